#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tme/spectral_amplitude.hpp"
#include "tme/stimulated_iteration.hpp"
#include "tme/svd_oracle.hpp"

namespace tme {

/// f(tau) = sum_n w psi(w_n) exp(-i w_n tau) sampled on a uniform tau grid.
struct TemporalProfile {
  std::vector<double> tau;
  CVector values;

  /// sqrt(sum |f|^2 dtau / (2 pi)); equals the spectral quadrature norm on
  /// a Nyquist-consistent grid.
  double quadrature_norm() const;
};

/// Direct-sum transform; any tau samples are accepted. Throws
/// std::invalid_argument when `tau` is empty.
TemporalProfile to_time_domain(const SpectralAmplitude& mode, std::span<const double> tau);

/// `n_points` (odd) samples centered on 0 with spacing 2 pi / (n_points dw),
/// i.e. one full period of the discrete transform spanning about
/// [-pi/dw, pi/dw]. Parseval holds exactly on this grid whenever
/// n_points >= the spectral grid size.
std::vector<double> default_tau_grid(const FrequencyGrid& spectral_grid,
                                     std::size_t n_points = 401);

/// Phase unwrapped along the grid (adjacent differences folded into
/// (-pi, pi]); starts at arg(values[0]).
std::vector<double> unwrap_phase(const CVector& values);

struct PhaseJump {
  std::size_t index;  // first above-floor grid index after the node
  double size;        // signed, trend-corrected, in (-pi, pi]
};

/// Finds phase discontinuities larger than pi/2 between consecutive
/// above-floor samples that are separated by at least one below-floor
/// sample. The local linear phase trend is removed before measuring the
/// jump. Throws std::invalid_argument when the floor excludes every point.
std::vector<PhaseJump> detect_phase_jumps(const SpectralAmplitude& mode,
                                          double magnitude_floor);

/// Total variation of the unwrapped phase on each run of consecutive
/// above-floor samples, after removing that run's least-squares linear
/// phase (a pure group delay).
std::vector<double> phase_segment_variation(const SpectralAmplitude& mode,
                                            double magnitude_floor);

/// 5% of the peak magnitude.
double default_magnitude_floor(const SpectralAmplitude& mode);

struct ConvergenceCurve {
  std::size_t mode_index = 0;  // 1-based
  std::vector<int> steps;      // overall half-step counter M
  std::vector<double> values;  // R_k^(M) / (G r_1)
  double limit = 0.0;          // r_k / r_1 from the oracle

  /// First M after which every value stays within rel_tol of the limit, or
  /// -1 if that never happens.
  int settled_step(double rel_tol) const;
};

/// One curve per trace; traces[k-1] belongs to mode k. Throws
/// std::invalid_argument for an unconverged trace or when the oracle has
/// fewer modes than traces.
std::vector<ConvergenceCurve> build_convergence_curve(std::span<const IterationTrace> traces,
                                                      const SchmidtDecomposition& oracle);

}  // namespace tme
