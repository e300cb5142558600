#include "tme/experiment.hpp"

#include <chrono>
#include <fstream>

#include "tme/csv_io.hpp"
#include "tme/kernel_io.hpp"

namespace tme {

bool RunSummary::all_converged() const {
  for (const auto& m : modes) {
    if (!m.converged) return false;
  }
  return !modes.empty();
}

JointSpectralAmplitude build_kernel(const ExperimentConfig& config) {
  JointSpectralAmplitude jsa = config.custom_kernel ? read_kernel_file(*config.custom_kernel)
                                                    : build_fiber_jsf(config.kernel);
  if (config.signal_band || config.idler_band) {
    const auto fs = config.signal_band ? hard_band_filter(jsa.signal_grid(), *config.signal_band)
                                       : std::vector<double>(jsa.signal_grid().n_points(), 1.0);
    const auto fi = config.idler_band ? hard_band_filter(jsa.idler_grid(), *config.idler_band)
                                      : std::vector<double>(jsa.idler_grid().n_points(), 1.0);
    jsa = apply_spectral_filter(jsa, fs, fi);
  }
  return jsa;
}

namespace {

std::filesystem::path numbered(const std::filesystem::path& dir, const std::string& stem,
                               std::size_t k) {
  return dir / (stem + "_" + std::to_string(k) + ".csv");
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::string kernel_source(const ExperimentConfig& config) {
  std::string s = config.custom_kernel ? "custom:" + config.custom_kernel->string() : "fiber";
  if (config.signal_band) s += " signal_band=" + format_double(*config.signal_band);
  if (config.idler_band) s += " idler_band=" + format_double(*config.idler_band);
  return s;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const JointSpectralAmplitude jsa = build_kernel(config);
  const std::size_t K = config.modes_requested;
  const SchmidtDecomposition oracle = schmidt_decompose(jsa, ModeRequest::first(K));
  prepare_dir(config.output_dir);

  RunSummary summary;
  summary.kernel_source = kernel_source(config);
  summary.signal_points = jsa.signal_grid().n_points();
  summary.idler_points = jsa.idler_grid().n_points();
  summary.signal_half_width = jsa.signal_grid().half_width();
  summary.idler_half_width = jsa.idler_grid().half_width();
  summary.chirp_strength = config.custom_kernel ? 0.0 : config.kernel.chirp_strength;
  summary.scale_G = jsa.scale_G();

  const auto tau_s = default_tau_grid(jsa.signal_grid(), config.tau_points);
  const auto tau_i = default_tau_grid(jsa.idler_grid(), config.tau_points);

  PriorModes prior;
  std::vector<IterationTrace> traces;
  std::string blocked;
  for (std::size_t k = 1; k <= K; ++k) {
    ModeRecord rec;
    rec.k = k;
    if (k <= oracle.size() && oracle.mode_numbers[0] > 0.0) {
      rec.r_over_r1_oracle = oracle.mode_numbers[k - 1] / oracle.mode_numbers[0];
    }
    if (!blocked.empty()) {
      rec.error = blocked;
      summary.modes.push_back(rec);
      continue;
    }
    try {
      ExtractedMode m = extract_mode(jsa, k, prior, config.iteration);
      rec.converged = true;
      rec.iterations = m.trace.iterations;
      rec.half_steps = static_cast<int>(m.trace.steps.size());
      rec.r_over_r1_iteration = k == 1 ? 1.0 : estimate_mode_number(m.trace, traces.front());
      if (k <= oracle.size()) {
        rec.fidelity_signal = mode_fidelity(m.psi, oracle.signal_modes[k - 1]);
        rec.fidelity_idler = mode_fidelity(m.phi, oracle.idler_modes[k - 1]);
      }
      if (config.emit.modes) {
        emit_mode_csv(m.psi, numbered(config.output_dir, "psi", k));
        emit_mode_csv(m.phi, numbered(config.output_dir, "phi", k));
      }
      if (config.emit.time_profiles) {
        emit_time_profile_csv(to_time_domain(m.psi, tau_s), numbered(config.output_dir, "time_f", k));
        emit_time_profile_csv(to_time_domain(m.phi, tau_i), numbered(config.output_dir, "time_g", k));
      }
      traces.push_back(m.trace);
      prior.signal.push_back(std::move(m.psi));
      prior.idler.push_back(std::move(m.phi));
    } catch (const IterationError& e) {
      rec.iterations = e.trace().iterations;
      rec.half_steps = static_cast<int>(e.trace().steps.size());
      rec.error = e.what();
      blocked = "not attempted: mode " + std::to_string(k) + " failed";
    }
    summary.modes.push_back(rec);
  }

  if (config.emit.convergence) {
    const auto curves = build_convergence_curve(traces, oracle);
    emit_curve_csv(curves, config.output_dir / "convergence.csv");
  }
  if (config.emit.mode_numbers) {
    std::vector<ModeRecord> done;
    for (const auto& r : summary.modes) {
      if (r.converged) done.push_back(r);
    }
    emit_mode_numbers_csv(done, config.output_dir / "mode_numbers.csv");
  }
  if (config.emit.kernel_dump) write_kernel_file(config.output_dir / "kernel.txt", jsa);
  emit_summary(summary, config.output_dir / "summary.txt");

  summary.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summary;
}

SchmidtDecomposition run_decomposition(const ExperimentConfig& config) {
  const JointSpectralAmplitude jsa = build_kernel(config);
  const SchmidtDecomposition dec = schmidt_decompose(jsa);
  prepare_dir(config.output_dir);
  const std::size_t K = std::min(config.modes_requested, dec.size());
  for (std::size_t k = 1; k <= K; ++k) {
    emit_mode_csv(dec.signal_modes[k - 1], numbered(config.output_dir, "oracle_psi", k));
    emit_mode_csv(dec.idler_modes[k - 1], numbered(config.output_dir, "oracle_phi", k));
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < dec.size(); ++k) {
    rows.push_back({static_cast<double>(k + 1), dec.mode_numbers[k],
                    dec.mode_numbers[k] / dec.mode_numbers[0]});
  }
  write_csv(config.output_dir / "oracle_mode_numbers.csv", {"k", "r", "r_over_r1"}, rows);
  if (config.emit.kernel_dump) write_kernel_file(config.output_dir / "kernel.txt", jsa);
  return dec;
}

void emit_mode_csv(const SpectralAmplitude& mode, const std::filesystem::path& path) {
  const auto phase = unwrap_phase(mode.values());
  std::vector<std::vector<double>> rows;
  rows.reserve(mode.size());
  for (std::size_t i = 0; i < mode.size(); ++i) {
    const cplx v = mode.values()[static_cast<Eigen::Index>(i)];
    rows.push_back({mode.grid().point(i), v.real(), v.imag(), std::abs(v), phase[i]});
  }
  write_csv(path, {"omega", "re", "im", "abs", "phase_unwrapped"}, rows);
}

void emit_time_profile_csv(const TemporalProfile& profile, const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  rows.reserve(profile.tau.size());
  for (std::size_t m = 0; m < profile.tau.size(); ++m) {
    const cplx v = profile.values[static_cast<Eigen::Index>(m)];
    rows.push_back({profile.tau[m], v.real(), v.imag(), std::abs(v)});
  }
  write_csv(path, {"tau", "re", "im", "abs"}, rows);
}

void emit_curve_csv(std::span<const ConvergenceCurve> curves, const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  for (const auto& c : curves) {
    for (std::size_t n = 0; n < c.values.size(); ++n) {
      rows.push_back({static_cast<double>(c.steps[n]), static_cast<double>(c.mode_index),
                      c.values[n], c.limit});
    }
  }
  write_csv(path, {"step", "mode_index", "R_normalized", "limit"}, rows);
}

void emit_mode_numbers_csv(std::span<const ModeRecord> records, const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : records) {
    rows.push_back({static_cast<double>(r.k), r.r_over_r1_iteration, r.r_over_r1_oracle});
  }
  write_csv(path, {"k", "r_over_r1_iteration", "r_over_r1_oracle"}, rows);
}

void emit_summary(const RunSummary& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "kernel.source = " << s.kernel_source << '\n'
      << "kernel.signal_points = " << s.signal_points << '\n'
      << "kernel.idler_points = " << s.idler_points << '\n'
      << "kernel.signal_half_width = " << format_double(s.signal_half_width) << '\n'
      << "kernel.idler_half_width = " << format_double(s.idler_half_width) << '\n'
      << "kernel.chirp_strength = " << format_double(s.chirp_strength) << '\n'
      << "kernel.scale_G = " << format_double(s.scale_G) << '\n';
  std::size_t converged = 0;
  for (const auto& m : s.modes) converged += m.converged ? 1 : 0;
  out << "modes.requested = " << s.modes.size() << '\n'
      << "modes.converged = " << converged << '\n';
  for (const auto& m : s.modes) {
    const std::string p = "mode." + std::to_string(m.k) + ".";
    out << p << "converged = " << (m.converged ? "true" : "false") << '\n'
        << p << "iterations = " << m.iterations << '\n'
        << p << "half_steps = " << m.half_steps << '\n'
        << p << "r_over_r1_iteration = " << format_double(m.r_over_r1_iteration) << '\n'
        << p << "r_over_r1_oracle = " << format_double(m.r_over_r1_oracle) << '\n'
        << p << "fidelity_signal = " << format_double(m.fidelity_signal) << '\n'
        << p << "fidelity_idler = " << format_double(m.fidelity_idler) << '\n';
    if (!m.error.empty()) out << p << "error = " << m.error << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace tme
