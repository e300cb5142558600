#include "tme/stimulated_iteration.hpp"

#include <cmath>
#include <sstream>

namespace tme {

const char* to_string(Side side) { return side == Side::Signal ? "signal" : "idler"; }

const char* to_string(IterationError::Kind kind) {
  switch (kind) {
    case IterationError::Kind::NotConverged: return "not converged";
    case IterationError::Kind::SeedAnnihilated: return "seed annihilated by deflation";
    case IterationError::Kind::OutputAnnihilated: return "output annihilated";
    case IterationError::Kind::Degenerate: return "degenerate mode number";
  }
  return "unknown";
}

void IterationConfig::validate() const {
  if (max_steps < 2) throw std::invalid_argument("max_steps must be at least 2");
  if (!(overlap_tolerance > 0.0 && overlap_tolerance < 1.0)) {
    throw std::invalid_argument("overlap_tolerance must lie in (0, 1)");
  }
  if (!(shaper_gain > 0.0) || !std::isfinite(shaper_gain)) {
    throw std::invalid_argument("shaper_gain must be finite and positive");
  }
  if (degeneracy_window < 1) throw std::invalid_argument("degeneracy_window must be >= 1");
  if (!(seed.width > 0.0) || !std::isfinite(seed.center)) {
    throw std::invalid_argument("seed width must be positive and center finite");
  }
}

double IterationTrace::final_ratio() const {
  if (steps.empty()) throw std::logic_error("empty iteration trace");
  return steps.back().power_ratio;
}

IterationError::IterationError(Kind kind, std::size_t mode_index, int step,
                               IterationTrace trace, const std::string& what,
                               double stabilized_ratio)
    : std::runtime_error(what), kind_(kind), mode_index_(mode_index), step_(step),
      trace_(std::move(trace)), stabilized_ratio_(stabilized_ratio) {}

SpectralAmplitude idler_from_signal(const JointSpectralAmplitude& jsa,
                                    const SpectralAmplitude& alpha) {
  if (!(alpha.grid() == jsa.signal_grid())) {
    throw std::invalid_argument("signal seed is not on the kernel's signal grid");
  }
  const double scale = jsa.scale_G() * jsa.signal_grid().weight();
  CVector beta = jsa.values().transpose() * alpha.values().conjugate();
  beta *= scale;
  return SpectralAmplitude(jsa.idler_grid(), std::move(beta), AmplitudeRole::Output);
}

SpectralAmplitude signal_from_idler(const JointSpectralAmplitude& jsa,
                                    const SpectralAmplitude& beta) {
  if (!(beta.grid() == jsa.idler_grid())) {
    throw std::invalid_argument("idler seed is not on the kernel's idler grid");
  }
  const double scale = jsa.scale_G() * jsa.idler_grid().weight();
  CVector alpha = jsa.values() * beta.values().conjugate();
  alpha *= scale;
  return SpectralAmplitude(jsa.signal_grid(), std::move(alpha), AmplitudeRole::Output);
}

namespace {

// Projections are subtracted one at a time against the running residual.
CVector project_out(const CVector& x, std::span<const SpectralAmplitude> basis, double weight) {
  CVector r = x;
  for (const auto& b : basis) {
    const cplx c = weight * b.values().dot(r);
    r -= c * b.values();
  }
  return r;
}

void check_basis(const FrequencyGrid& grid, std::span<const SpectralAmplitude> basis) {
  const double w = grid.weight();
  for (std::size_t a = 0; a < basis.size(); ++a) {
    if (!(basis[a].grid() == grid)) {
      throw std::invalid_argument("deflation basis mode is on a different grid");
    }
    for (std::size_t b = a; b < basis.size(); ++b) {
      const cplx g = w * basis[a].values().dot(basis[b].values());
      const cplx expect = a == b ? cplx(1.0) : cplx(0.0);
      if (std::abs(g - expect) > 1e-8) {
        throw std::invalid_argument("deflation basis is not orthonormal");
      }
    }
  }
}

// Orthonormalizes once so per-step deflation sees an exact basis.
std::vector<SpectralAmplitude> reorthonormalize(std::span<const SpectralAmplitude> basis) {
  std::vector<SpectralAmplitude> out;
  out.reserve(basis.size());
  for (const auto& b : basis) {
    const double w = b.grid().weight();
    CVector v = project_out(b.values(), out, w);
    v /= quadrature_norm(v, w);
    out.emplace_back(b.grid(), std::move(v), AmplitudeRole::Output);
  }
  return out;
}

constexpr double kAnnihilationRatio = 1e-10;
constexpr double kStableRatio = 1e-12;

struct Loop {
  const JointSpectralAmplitude& jsa;
  const IterationConfig& config;
  std::size_t mode_index;
  std::vector<SpectralAmplitude> signal_basis;
  std::vector<SpectralAmplitude> idler_basis;
  IterationTrace trace;
  int step = 0;

  const std::vector<SpectralAmplitude>& basis(Side s) const {
    return s == Side::Signal ? signal_basis : idler_basis;
  }

  [[noreturn]] void fail(IterationError::Kind kind, const std::string& detail,
                         double ratio = 0.0) {
    std::ostringstream msg;
    msg << "mode " << mode_index << ", step " << step << ": " << to_string(kind);
    if (!detail.empty()) msg << " (" << detail << ")";
    throw IterationError(kind, mode_index, step, trace, msg.str(), ratio);
  }

  // Injects C * shape into the opposite field and returns the normalized,
  // deflated measurement.
  SpectralAmplitude half_step(const SpectralAmplitude& shape, Side output_side,
                              const std::optional<SpectralAmplitude>& previous) {
    ++step;
    const SpectralAmplitude injected(shape.grid(), config.shaper_gain * shape.values(),
                                     AmplitudeRole::Seed);
    const SpectralAmplitude raw = output_side == Side::Idler
                                      ? idler_from_signal(jsa, injected)
                                      : signal_from_idler(jsa, injected);
    const double w = raw.grid().weight();
    CVector kept = project_out(raw.values(), basis(output_side), w);

    const double raw_norm = quadrature_norm(raw.values(), w);
    const double kept_norm = quadrature_norm(kept, w);
    const double in_norm = norm(injected);
    const double ratio = kept_norm / in_norm;

    TraceStep rec;
    rec.step = step;
    rec.output_side = output_side;
    rec.power_ratio = ratio;
    rec.deflation_residual =
        raw_norm > 0.0 ? quadrature_norm(raw.values() - kept, w) / raw_norm : 0.0;

    if (!(ratio > kAnnihilationRatio * jsa.scale_G())) {
      trace.steps.push_back(rec);
      std::ostringstream d;
      d << "output/input amplitude ratio " << ratio << " on the " << to_string(output_side)
        << " side; no mode is left outside the deflated subspace";
      fail(IterationError::Kind::OutputAnnihilated, d.str(), ratio);
    }
    kept /= kept_norm;
    SpectralAmplitude out(raw.grid(), std::move(kept), AmplitudeRole::Output);
    rec.overlap = previous ? std::abs(inner(*previous, out)) : 0.0;
    trace.steps.push_back(rec);
    return out;
  }
};

}  // namespace

SpectralAmplitude deflate(const SpectralAmplitude& x, std::span<const SpectralAmplitude> basis) {
  check_basis(x.grid(), basis);
  return SpectralAmplitude(x.grid(), project_out(x.values(), basis, x.grid().weight()),
                           x.role() == AmplitudeRole::Mode ? AmplitudeRole::Output : x.role());
}

double power_ratio(const SpectralAmplitude& step_output, const SpectralAmplitude& step_input) {
  const double in = norm(step_input);
  if (!(in > 0.0)) throw std::invalid_argument("power ratio of a zero input");
  return norm(step_output) / in;
}

ExtractedMode extract_mode(const JointSpectralAmplitude& jsa, std::size_t k,
                           const PriorModes& prior, const IterationConfig& config) {
  config.validate();
  if (k == 0) throw std::invalid_argument("mode index is 1-based");
  if (prior.signal.size() != k - 1 || prior.idler.size() != k - 1) {
    throw std::invalid_argument("mode " + std::to_string(k) + " needs exactly " +
                                std::to_string(k - 1) + " prior mode pairs");
  }
  check_basis(jsa.signal_grid(), prior.signal);
  check_basis(jsa.idler_grid(), prior.idler);

  Loop loop{jsa, config, k, reorthonormalize(prior.signal), reorthonormalize(prior.idler),
            {}, 0};

  const Side seed_side = config.start_side;
  const Side other_side = seed_side == Side::Signal ? Side::Idler : Side::Signal;
  const FrequencyGrid& seed_grid =
      seed_side == Side::Signal ? jsa.signal_grid() : jsa.idler_grid();

  const SpectralAmplitude seed =
      config.custom_seed ? *config.custom_seed
                         : gaussian_seed(seed_grid, config.seed.center, config.seed.width);
  if (!(seed.grid() == seed_grid)) {
    throw std::invalid_argument("seed is not on the start side's grid");
  }
  const double w = seed_grid.weight();
  const double seed_norm = norm(seed);
  if (!(seed_norm > 0.0)) throw std::invalid_argument("seed is identically zero");
  CVector start = project_out(seed.values(), loop.basis(seed_side), w);
  const double start_norm = quadrature_norm(start, w);
  if (!(start_norm > 1e-12 * seed_norm)) {
    loop.fail(IterationError::Kind::SeedAnnihilated,
              "seed lies in the span of the prior modes");
  }
  start /= start_norm;

  std::optional<SpectralAmplitude> seed_side_prev(
      SpectralAmplitude(seed_grid, std::move(start), AmplitudeRole::Seed));
  std::optional<SpectralAmplitude> other_side_prev;

  const double target = 1.0 - config.overlap_tolerance;
  double last_round_ratio = 0.0;
  int stable_rounds = 0;

  for (int it = 1; it <= config.max_steps; ++it) {
    loop.trace.iterations = it;
    SpectralAmplitude other = loop.half_step(*seed_side_prev, other_side, other_side_prev);
    const double other_overlap = loop.trace.steps.back().overlap;
    SpectralAmplitude back = loop.half_step(other, seed_side, seed_side_prev);
    const double back_overlap = loop.trace.steps.back().overlap;
    const double ratio = loop.trace.steps.back().power_ratio;

    other_side_prev = std::move(other);
    seed_side_prev = std::move(back);

    if (other_overlap >= target && back_overlap >= target) {
      loop.trace.converged = true;
      break;
    }

    if (it > 1 && std::abs(ratio - last_round_ratio) < kStableRatio * ratio) {
      if (++stable_rounds >= config.degeneracy_window) {
        std::ostringstream d;
        d << "power ratio stabilized at " << ratio << " for " << stable_rounds
          << " iterations while the shape keeps changing";
        loop.fail(IterationError::Kind::Degenerate, d.str(), ratio);
      }
    } else {
      stable_rounds = 0;
    }
    last_round_ratio = ratio;
  }

  if (!loop.trace.converged) {
    loop.fail(IterationError::Kind::NotConverged,
              "overlap criterion unmet after " + std::to_string(config.max_steps) +
                  " iterations");
  }

  const SpectralAmplitude& signal_shape =
      seed_side == Side::Signal ? *seed_side_prev : *other_side_prev;
  const SpectralAmplitude& idler_shape =
      seed_side == Side::Signal ? *other_side_prev : *seed_side_prev;

  SpectralAmplitude psi = make_mode(jsa.signal_grid(), signal_shape.values());
  SpectralAmplitude phi = make_mode(jsa.idler_grid(), idler_shape.values());
  const cplx proj = inner(phi, idler_from_signal(jsa, psi));
  const cplx pairing = std::abs(proj) > 0.0 ? proj / std::abs(proj) : cplx(1.0);

  const double gain = loop.trace.final_ratio();
  return ExtractedMode{std::move(psi), std::move(phi), pairing, gain, std::move(loop.trace)};
}

std::vector<ExtractedMode> extract_modes(const JointSpectralAmplitude& jsa, std::size_t count,
                                         const IterationConfig& config) {
  std::vector<ExtractedMode> modes;
  PriorModes prior;
  for (std::size_t k = 1; k <= count; ++k) {
    modes.push_back(extract_mode(jsa, k, prior, config));
    prior.signal.push_back(modes.back().psi);
    prior.idler.push_back(modes.back().phi);
  }
  return modes;
}

double estimate_mode_number(const IterationTrace& trace_k, const IterationTrace& trace_1) {
  if (!trace_k.converged || !trace_1.converged) {
    throw std::invalid_argument("mode number estimate needs converged traces");
  }
  return trace_k.final_ratio() / trace_1.final_ratio();
}

}  // namespace tme
