#include "tme/jsf_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace tme {

JointSpectralAmplitude::JointSpectralAmplitude(FrequencyGrid signal_grid,
                                               FrequencyGrid idler_grid, CMatrix values,
                                               double base_scale)
    : signal_grid_(signal_grid), idler_grid_(idler_grid), values_(std::move(values)),
      scale_G_(base_scale) {
  if (static_cast<std::size_t>(values_.rows()) != signal_grid_.n_points() ||
      static_cast<std::size_t>(values_.cols()) != idler_grid_.n_points()) {
    throw std::invalid_argument("kernel shape does not match its grids");
  }
  if (!values_.allFinite()) {
    throw std::invalid_argument("kernel has non-finite entries");
  }
  if (!(base_scale > 0.0) || !std::isfinite(base_scale)) {
    throw std::invalid_argument("kernel scale must be finite and positive");
  }
  const double n = quadrature_norm();
  if (!(n > 0.0)) throw std::invalid_argument("kernel is identically zero");
  values_ /= n;
  scale_G_ *= n;
}

double JointSpectralAmplitude::quadrature_norm() const {
  return std::sqrt(signal_grid_.weight() * idler_grid_.weight()) * values_.norm();
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

cplx fiber_jsf_entry(const KernelParams& params, double omega_s, double omega_i) {
  const double sum = omega_s + omega_i;
  const double mismatch = params.coeff_signal * omega_s + params.coeff_idler * omega_i;
  const double envelope = std::exp(-sum * sum / 4.0) * sinc(mismatch);
  const double phase = -mismatch + params.chirp_strength * sum * sum;
  return std::polar(envelope, phase);
}

JointSpectralAmplitude build_fiber_jsf(const KernelParams& params) {
  if (!std::isfinite(params.coeff_signal) || !std::isfinite(params.coeff_idler) ||
      !std::isfinite(params.chirp_strength)) {
    throw std::invalid_argument("kernel parameters must be finite");
  }
  const auto& gs = params.signal_grid;
  const auto& gi = params.idler_grid;
  CMatrix f(static_cast<Eigen::Index>(gs.n_points()),
            static_cast<Eigen::Index>(gi.n_points()));
  for (std::size_t i = 0; i < gs.n_points(); ++i) {
    const double ws = gs.point(i);
    for (std::size_t j = 0; j < gi.n_points(); ++j) {
      f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          fiber_jsf_entry(params, ws, gi.point(j));
    }
  }
  return JointSpectralAmplitude(gs, gi, std::move(f));
}

JointSpectralAmplitude build_custom_jsf(const FrequencyGrid& signal_grid,
                                        const FrequencyGrid& idler_grid,
                                        const CMatrix& entries) {
  return JointSpectralAmplitude(signal_grid, idler_grid, entries);
}

namespace {

void check_filter(std::span<const double> filter, const FrequencyGrid& grid,
                  const char* side) {
  if (filter.size() != grid.n_points()) {
    throw std::invalid_argument(std::string(side) + " filter length does not match grid");
  }
  for (double v : filter) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(side) + " filter value outside [0, 1]");
    }
  }
}

}  // namespace

JointSpectralAmplitude apply_spectral_filter(const JointSpectralAmplitude& jsa,
                                             std::span<const double> signal_filter,
                                             std::span<const double> idler_filter) {
  check_filter(signal_filter, jsa.signal_grid(), "signal");
  check_filter(idler_filter, jsa.idler_grid(), "idler");
  const Eigen::Map<const Eigen::VectorXd> fs(signal_filter.data(),
                                             static_cast<Eigen::Index>(signal_filter.size()));
  const Eigen::Map<const Eigen::VectorXd> fi(idler_filter.data(),
                                             static_cast<Eigen::Index>(idler_filter.size()));
  CMatrix filtered = fs.cast<cplx>().asDiagonal() * jsa.values() * fi.cast<cplx>().asDiagonal();
  return JointSpectralAmplitude(jsa.signal_grid(), jsa.idler_grid(), std::move(filtered),
                                jsa.scale_G());
}

std::vector<double> hard_band_filter(const FrequencyGrid& grid, double band) {
  std::vector<double> out(grid.n_points());
  for (std::size_t i = 0; i < grid.n_points(); ++i) {
    out[i] = std::abs(grid.point(i)) <= band ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace tme
