#include "tme/analysis.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <stdexcept>

namespace tme {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double x) {
  x = std::remainder(x, 2.0 * kPi);
  return x <= -kPi ? x + 2.0 * kPi : x;
}

std::vector<std::size_t> above_floor(const CVector& v, double floor) {
  std::vector<std::size_t> idx;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > floor) idx.push_back(static_cast<std::size_t>(i));
  }
  return idx;
}

}  // namespace

double TemporalProfile::quadrature_norm() const {
  if (tau.size() < 2) return 0.0;
  const double dtau = (tau.back() - tau.front()) / static_cast<double>(tau.size() - 1);
  return std::sqrt(dtau / (2.0 * kPi)) * values.norm();
}

TemporalProfile to_time_domain(const SpectralAmplitude& mode, std::span<const double> tau) {
  if (tau.empty()) throw std::invalid_argument("empty tau grid");
  const auto& g = mode.grid();
  const double w = g.weight();
  TemporalProfile out;
  out.tau.assign(tau.begin(), tau.end());
  out.values.resize(static_cast<Eigen::Index>(tau.size()));
  for (std::size_t m = 0; m < tau.size(); ++m) {
    cplx acc(0.0);
    for (std::size_t n = 0; n < g.n_points(); ++n) {
      acc += mode.values()[static_cast<Eigen::Index>(n)] * std::polar(1.0, -g.point(n) * tau[m]);
    }
    out.values[static_cast<Eigen::Index>(m)] = w * acc;
  }
  return out;
}

std::vector<double> default_tau_grid(const FrequencyGrid& spectral_grid, std::size_t n_points) {
  if (n_points == 0 || n_points % 2 == 0) {
    throw std::invalid_argument("tau grid needs an odd number of points");
  }
  const double dtau = 2.0 * kPi / (static_cast<double>(n_points) * spectral_grid.spacing());
  const auto half = static_cast<double>(n_points / 2);
  std::vector<double> tau(n_points);
  for (std::size_t m = 0; m < n_points; ++m) tau[m] = (static_cast<double>(m) - half) * dtau;
  return tau;
}

std::vector<double> unwrap_phase(const CVector& values) {
  std::vector<double> out(static_cast<std::size_t>(values.size()));
  if (out.empty()) return out;
  out[0] = std::arg(values[0]);
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    out[ui] = out[ui - 1] + wrap(std::arg(values[i]) - std::arg(values[i - 1]));
  }
  return out;
}

double default_magnitude_floor(const SpectralAmplitude& mode) {
  return 0.05 * mode.values().cwiseAbs().maxCoeff();
}

std::vector<PhaseJump> detect_phase_jumps(const SpectralAmplitude& mode, double magnitude_floor) {
  const CVector& v = mode.values();
  const auto idx = above_floor(v, magnitude_floor);
  if (idx.empty()) throw std::invalid_argument("magnitude floor excludes every grid point");

  const auto& g = mode.grid();
  // Local phase slope on one side of a node, from its nearest contiguous pair.
  auto slope_at = [&](std::size_t a, std::size_t b) -> std::optional<double> {
    if (b != a + 1) return std::nullopt;
    return wrap(std::arg(v[static_cast<Eigen::Index>(b)]) - std::arg(v[static_cast<Eigen::Index>(a)])) /
           g.spacing();
  };

  std::vector<PhaseJump> jumps;
  for (std::size_t n = 1; n < idx.size(); ++n) {
    const std::size_t a = idx[n - 1];
    const std::size_t b = idx[n];
    if (b == a + 1) continue;
    double trend = 0.0;
    int count = 0;
    if (n >= 2) {
      if (auto s = slope_at(idx[n - 2], a)) { trend += *s; ++count; }
    }
    if (n + 1 < idx.size()) {
      if (auto s = slope_at(b, idx[n + 1])) { trend += *s; ++count; }
    }
    if (count) trend /= count;
    const double raw = std::arg(v[static_cast<Eigen::Index>(b)]) - std::arg(v[static_cast<Eigen::Index>(a)]);
    const double jump = wrap(raw - trend * (g.point(b) - g.point(a)));
    if (std::abs(jump) > kPi / 2.0) jumps.push_back({b, jump});
  }
  return jumps;
}

std::vector<double> phase_segment_variation(const SpectralAmplitude& mode, double magnitude_floor) {
  const CVector& v = mode.values();
  const auto idx = above_floor(v, magnitude_floor);
  if (idx.empty()) throw std::invalid_argument("magnitude floor excludes every grid point");
  const auto& g = mode.grid();

  std::vector<double> out;
  std::size_t start = 0;
  while (start < idx.size()) {
    std::size_t end = start + 1;
    while (end < idx.size() && idx[end] == idx[end - 1] + 1) ++end;

    std::vector<double> x, ph;
    double acc = std::arg(v[static_cast<Eigen::Index>(idx[start])]);
    for (std::size_t n = start; n < end; ++n) {
      const auto i = static_cast<Eigen::Index>(idx[n]);
      if (n > start) acc += wrap(std::arg(v[i]) - std::arg(v[i - 1]));
      x.push_back(g.point(idx[n]));
      ph.push_back(acc);
    }
    double variation = 0.0;
    if (x.size() >= 2) {
      const double m = static_cast<double>(x.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t n = 0; n < x.size(); ++n) {
        sx += x[n]; sy += ph[n]; sxx += x[n] * x[n]; sxy += x[n] * ph[n];
      }
      const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      for (std::size_t n = 1; n < x.size(); ++n) {
        variation += std::abs((ph[n] - ph[n - 1]) - slope * (x[n] - x[n - 1]));
      }
    }
    out.push_back(variation);
    start = end;
  }
  return out;
}

int ConvergenceCurve::settled_step(double rel_tol) const {
  int settled = -1;
  for (std::size_t n = values.size(); n-- > 0;) {
    if (std::abs(values[n] - limit) > rel_tol * std::abs(limit)) break;
    settled = steps[n];
  }
  return settled;
}

std::vector<ConvergenceCurve> build_convergence_curve(std::span<const IterationTrace> traces,
                                                      const SchmidtDecomposition& oracle) {
  if (oracle.size() < traces.size()) {
    throw std::invalid_argument("oracle has fewer modes than traces");
  }
  if (oracle.size() == 0) return {};
  const double norm_const = oracle.scale_G * oracle.mode_numbers[0];
  std::vector<ConvergenceCurve> curves;
  for (std::size_t k = 0; k < traces.size(); ++k) {
    if (!traces[k].converged) {
      throw std::invalid_argument("trace for mode " + std::to_string(k + 1) + " is unconverged");
    }
    ConvergenceCurve c;
    c.mode_index = k + 1;
    c.limit = oracle.mode_numbers[k] / oracle.mode_numbers[0];
    for (const auto& s : traces[k].steps) {
      c.steps.push_back(s.step);
      c.values.push_back(s.power_ratio / norm_const);
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

}  // namespace tme
