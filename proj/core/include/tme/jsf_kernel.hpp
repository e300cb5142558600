#pragma once

#include <span>

#include "tme/grid.hpp"
#include "tme/spectral_amplitude.hpp"

namespace tme {

/// Discretized joint spectral amplitude F(w_s, w_i) / G. Rows index the
/// signal grid, columns the idler grid. The shape is normalized so that
/// sum |F/G|^2 dw_s dw_i = 1 under rectangle quadrature; the removed
/// amplitude is kept in scale_G.
class JointSpectralAmplitude {
 public:
  /// Normalizes `values` and multiplies `base_scale` by the removed norm.
  /// Throws std::invalid_argument on shape mismatch, non-finite entries or
  /// an identically zero matrix.
  JointSpectralAmplitude(FrequencyGrid signal_grid, FrequencyGrid idler_grid,
                         CMatrix values, double base_scale = 1.0);

  const FrequencyGrid& signal_grid() const { return signal_grid_; }
  const FrequencyGrid& idler_grid() const { return idler_grid_; }
  const CMatrix& values() const { return values_; }
  double scale_G() const { return scale_G_; }

  /// sqrt(w_s w_i) ||values||_F; 1 up to rounding after construction.
  double quadrature_norm() const;

 private:
  FrequencyGrid signal_grid_;
  FrequencyGrid idler_grid_;
  CMatrix values_;
  double scale_G_;
};

struct KernelParams {
  double coeff_signal = 0.125;
  double coeff_idler = -0.075;
  double chirp_strength = 0.0;
  FrequencyGrid signal_grid = make_grid(kDefaultGridPoints, kDefaultHalfWidth);
  FrequencyGrid idler_grid = make_grid(kDefaultGridPoints, kDefaultHalfWidth);
};

/// sin(x)/x, switching to 1 - x^2/6 + x^4/120 for |x| < 1e-4.
double sinc(double x);

/// Unnormalized fiber four-wave-mixing amplitude at one frequency pair:
///   exp(-(ws+wi)^2/4) exp(-i d) sinc(d) exp(i c (ws+wi)^2),
///   d = coeff_signal ws + coeff_idler wi.
cplx fiber_jsf_entry(const KernelParams& params, double omega_s, double omega_i);

JointSpectralAmplitude build_fiber_jsf(const KernelParams& params);

/// scale_G of the result is the quadrature norm of `entries`.
JointSpectralAmplitude build_custom_jsf(const FrequencyGrid& signal_grid,
                                        const FrequencyGrid& idler_grid,
                                        const CMatrix& entries);

/// Multiplies entry (i, j) by signal_filter[i] * idler_filter[j] and
/// renormalizes. Filter values must lie in [0, 1].
JointSpectralAmplitude apply_spectral_filter(const JointSpectralAmplitude& jsa,
                                             std::span<const double> signal_filter,
                                             std::span<const double> idler_filter);

/// Filter that passes |w| <= band and blocks the rest.
std::vector<double> hard_band_filter(const FrequencyGrid& grid, double band);

}  // namespace tme
