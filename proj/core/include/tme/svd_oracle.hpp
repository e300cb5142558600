#pragma once

#include <cstddef>
#include <vector>

#include "tme/jsf_kernel.hpp"
#include "tme/spectral_amplitude.hpp"

namespace tme {

/// How many Schmidt modes to return.
struct ModeRequest {
  enum class Kind { AboveThreshold, Count, All };
  Kind kind = Kind::AboveThreshold;
  std::size_t count = 0;
  double relative_threshold = 1e-3;  // keep r_k / r_1 >= this

  static ModeRequest all() { return {Kind::All, 0, 0.0}; }
  static ModeRequest first(std::size_t n) { return {Kind::Count, n, 0.0}; }
  static ModeRequest above(double threshold) { return {Kind::AboveThreshold, 0, threshold}; }
};

/// F / G = sum_k r_k p_k psi_k(ws) phi_k(wi), with psi_k and phi_k each
/// unit-norm and phase-fixed, and p_k a unit-modulus pairing factor.
struct SchmidtDecomposition {
  std::vector<double> mode_numbers;  // r_k, descending
  std::vector<SpectralAmplitude> signal_modes;
  std::vector<SpectralAmplitude> idler_modes;
  std::vector<cplx> pairing;
  double scale_G = 1.0;

  std::size_t size() const { return mode_numbers.size(); }

  /// Sum of the first `count` terms, as a matrix comparable to jsa.values().
  CMatrix reconstruct(std::size_t count) const;
};

/// Weighted singular-value factorization of the kernel. Modes are
/// orthonormal under the quadrature inner product. Throws
/// std::invalid_argument for a zero mode count.
SchmidtDecomposition schmidt_decompose(const JointSpectralAmplitude& jsa,
                                       ModeRequest request = {});

/// |<a, b>|^2 for unit-norm amplitudes on the same grid; phase invariant.
/// Throws std::invalid_argument on grid mismatch or inputs whose norm is
/// off by more than 1e-8.
double mode_fidelity(const SpectralAmplitude& a, const SpectralAmplitude& b);

/// Quadrature-weighted Frobenius norm of (jsa.values() - approx).
double kernel_residual(const JointSpectralAmplitude& jsa, const CMatrix& approx);

}  // namespace tme
