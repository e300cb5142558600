#include "tme/spectral_amplitude.hpp"

#include <cmath>
#include <stdexcept>

namespace tme {

SpectralAmplitude::SpectralAmplitude(FrequencyGrid grid, CVector values,
                                     AmplitudeRole role)
    : grid_(grid), values_(std::move(values)), role_(role) {
  if (static_cast<std::size_t>(values_.size()) != grid_.n_points()) {
    throw std::invalid_argument("spectral amplitude length does not match its grid");
  }
  if (!values_.allFinite()) {
    throw std::invalid_argument("spectral amplitude has non-finite entries");
  }
  if (role_ == AmplitudeRole::Mode &&
      std::abs(quadrature_norm(values_, grid_.weight()) - 1.0) > 1e-12) {
    throw std::invalid_argument("mode function is not unit-normalized");
  }
}

cplx inner(const SpectralAmplitude& a, const SpectralAmplitude& b) {
  if (!(a.grid() == b.grid())) {
    throw std::invalid_argument("inner product of amplitudes on different grids");
  }
  return a.grid().weight() * a.values().dot(b.values());
}

double norm(const SpectralAmplitude& a) {
  return quadrature_norm(a.values(), a.grid().weight());
}

double quadrature_norm(const CVector& values, double weight) {
  return std::sqrt(weight) * values.norm();
}

Eigen::Index phase_reference_index(const CVector& values) {
  if (values.size() == 0) return 0;
  const double peak = values.cwiseAbs().maxCoeff();
  const double cutoff = peak * (1.0 - 1e-9);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values[i]) >= cutoff) return i;
  }
  return 0;
}

cplx phase_convention_factor(const CVector& values) {
  const cplx ref = values[phase_reference_index(values)];
  if (ref == cplx(0.0)) return {1.0, 0.0};
  return std::conj(ref) / std::abs(ref);
}

SpectralAmplitude make_mode(const FrequencyGrid& grid, const CVector& values) {
  const double n = quadrature_norm(values, grid.weight());
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a zero amplitude");
  CVector unit = values / n;
  unit *= phase_convention_factor(unit);
  // The peak entry is real by construction; drop the rounding residue.
  const auto ref = phase_reference_index(unit);
  unit[ref] = cplx(std::abs(unit[ref]), 0.0);
  return SpectralAmplitude(grid, std::move(unit), AmplitudeRole::Mode);
}

SpectralAmplitude gaussian_seed(const FrequencyGrid& grid, double center, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("seed width must be positive");
  CVector v(static_cast<Eigen::Index>(grid.n_points()));
  for (std::size_t i = 0; i < grid.n_points(); ++i) {
    const double x = (grid.point(i) - center) / width;
    v[static_cast<Eigen::Index>(i)] = std::exp(-x * x / 4.0);
  }
  const double n = quadrature_norm(v, grid.weight());
  if (!(n > 0.0)) throw std::invalid_argument("seed vanishes on the grid");
  return SpectralAmplitude(grid, v / n, AmplitudeRole::Seed);
}

}  // namespace tme
