#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tme/grid.hpp"

namespace tme {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

enum class AmplitudeRole { Seed, Output, Mode };

/// A complex spectral shape sampled on one frequency grid: an injected seed,
/// a measured output, or a normalized mode function.
class SpectralAmplitude {
 public:
  /// Throws std::invalid_argument on length mismatch or non-finite entries.
  /// A Mode must already have unit quadrature norm (within 1e-12).
  SpectralAmplitude(FrequencyGrid grid, CVector values,
                    AmplitudeRole role = AmplitudeRole::Output);

  const FrequencyGrid& grid() const { return grid_; }
  const CVector& values() const { return values_; }
  AmplitudeRole role() const { return role_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

 private:
  FrequencyGrid grid_;
  CVector values_;
  AmplitudeRole role_;
};

/// Quadrature inner product <a, b> = sum_i w conj(a_i) b_i.
cplx inner(const SpectralAmplitude& a, const SpectralAmplitude& b);
double norm(const SpectralAmplitude& a);

/// Quadrature norm of raw samples with a uniform weight.
double quadrature_norm(const CVector& values, double weight);

/// Index used by the phase convention: the entry of largest magnitude, with
/// entries within a relative 1e-9 of the maximum counted as ties and the
/// lowest index winning. The tolerance keeps the choice stable when the
/// mode magnitude is mirror-symmetric on the grid.
Eigen::Index phase_reference_index(const CVector& values);

/// Unit-modulus factor that makes values[phase_reference_index] real and
/// positive when multiplied in.
cplx phase_convention_factor(const CVector& values);

/// Scales to unit quadrature norm and applies the phase convention.
/// Throws std::invalid_argument for an all-zero input.
SpectralAmplitude make_mode(const FrequencyGrid& grid, const CVector& values);

/// Unit-norm seed exp(-(w - center)^2 / (4 width^2)).
SpectralAmplitude gaussian_seed(const FrequencyGrid& grid, double center = 0.0,
                                double width = 1.0);

}  // namespace tme
