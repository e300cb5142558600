#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tme/jsf_kernel.hpp"
#include "tme/spectral_amplitude.hpp"

namespace tme {

enum class Side { Signal, Idler };

const char* to_string(Side side);

struct SeedSpec {
  double center = 0.0;
  double width = 1.0;  // exp(-(w - center)^2 / (4 width^2))
};

struct IterationConfig {
  int max_steps = 200;  // full signal/idler round trips
  double overlap_tolerance = 1e-10;
  double shaper_gain = 1.0;
  SeedSpec seed;
  /// Overrides `seed` when set; must live on the start side's grid.
  std::optional<SpectralAmplitude> custom_seed;
  int degeneracy_window = 50;
  Side start_side = Side::Signal;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// One half-step of the loop. `step` is the overall half-step counter M,
/// `output_side` the field that was measured.
struct TraceStep {
  int step = 0;
  Side output_side = Side::Idler;
  double power_ratio = 0.0;         // R^(M) = sqrt(P_out / P_in)
  double overlap = 0.0;             // |<previous same-side shape, this shape>|
  double deflation_residual = 0.0;  // ||removed part|| / ||raw output||
};

struct IterationTrace {
  std::vector<TraceStep> steps;
  bool converged = false;
  int iterations = 0;

  /// R of the last recorded half-step. Throws std::logic_error when empty.
  double final_ratio() const;
};

class IterationError : public std::runtime_error {
 public:
  enum class Kind { NotConverged, SeedAnnihilated, OutputAnnihilated, Degenerate };

  IterationError(Kind kind, std::size_t mode_index, int step, IterationTrace trace,
                 const std::string& what, double stabilized_ratio = 0.0);

  Kind kind() const { return kind_; }
  std::size_t mode_index() const { return mode_index_; }
  int step() const { return step_; }
  const IterationTrace& trace() const { return trace_; }
  double stabilized_ratio() const { return stabilized_ratio_; }

 private:
  Kind kind_;
  std::size_t mode_index_;
  int step_;
  IterationTrace trace_;
  double stabilized_ratio_;
};

const char* to_string(IterationError::Kind kind);

/// Previously found mode pairs, in extraction order.
struct PriorModes {
  std::vector<SpectralAmplitude> signal;
  std::vector<SpectralAmplitude> idler;
};

struct ExtractedMode {
  SpectralAmplitude psi;  // signal mode, unit norm, phase convention applied
  SpectralAmplitude phi;  // idler mode, unit norm, phase convention applied
  /// Unit-modulus p with idler_from_signal(psi) = gain * p * phi.
  cplx pairing;
  /// Converged power ratio, the estimate of G r_k.
  double gain;
  IterationTrace trace;
};

/// Stimulated idler output for a signal seed:
///   beta(wi) = G sum_s w_s F(ws, wi) conj(alpha(ws)).
/// Not normalized. Throws std::invalid_argument on grid mismatch.
SpectralAmplitude idler_from_signal(const JointSpectralAmplitude& jsa,
                                    const SpectralAmplitude& alpha);

/// Stimulated signal output for an idler seed:
///   alpha(ws) = G sum_i w_i F(ws, wi) conj(beta(wi)).
SpectralAmplitude signal_from_idler(const JointSpectralAmplitude& jsa,
                                    const SpectralAmplitude& beta);

/// Removes the quadrature projections of x onto each basis mode (modified
/// Gram-Schmidt). The basis must be orthonormal within 1e-8 and share x's
/// grid; otherwise std::invalid_argument. A Mode input comes back as an
/// Output, since the residual is no longer unit-norm.
SpectralAmplitude deflate(const SpectralAmplitude& x,
                          std::span<const SpectralAmplitude> basis);

/// sqrt(P_out / P_in) with quadrature weights. Throws std::invalid_argument
/// for a zero input.
double power_ratio(const SpectralAmplitude& step_output, const SpectralAmplitude& step_input);

/// Runs the cross-feedback loop for mode k (1-based) against the k-1 pairs
/// in `prior`. Throws IterationError on non-convergence, an annihilated
/// seed or output, or a suspected degenerate mode number.
ExtractedMode extract_mode(const JointSpectralAmplitude& jsa, std::size_t k,
                           const PriorModes& prior, const IterationConfig& config);

/// Extracts modes 1..count in order, each deflated against the ones before.
std::vector<ExtractedMode> extract_modes(const JointSpectralAmplitude& jsa,
                                         std::size_t count, const IterationConfig& config);

/// r_k / r_1 from the converged power ratios of two traces.
double estimate_mode_number(const IterationTrace& trace_k, const IterationTrace& trace_1);

}  // namespace tme
