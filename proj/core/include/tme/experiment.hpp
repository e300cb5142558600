#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tme/analysis.hpp"
#include "tme/jsf_kernel.hpp"
#include "tme/stimulated_iteration.hpp"
#include "tme/svd_oracle.hpp"

namespace tme {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what);
  int line() const { return line_; }  // 0 when not tied to a line

 private:
  int line_;
};

struct EmitFlags {
  bool modes = true;
  bool time_profiles = true;
  bool convergence = true;
  bool mode_numbers = true;
  bool kernel_dump = false;
};

struct ExperimentConfig {
  KernelParams kernel;
  std::optional<std::filesystem::path> custom_kernel;
  std::optional<double> signal_band;  // hard in-loop filter |w_s| <= band
  std::optional<double> idler_band;
  IterationConfig iteration;
  std::size_t modes_requested = 3;
  std::size_t tau_points = 401;
  std::filesystem::path output_dir = "tme_out";
  EmitFlags emit;
};

/// Parses `key = value` lines grouped under [kernel], [filter],
/// [iteration] and [run] headers, on top of `base`. '#' and ';' start
/// comments. Unknown sections or keys, repeated keys, a missing [kernel]
/// section and out-of-range values raise ConfigError. When layering a file
/// over a preset, pass require_kernel_section = false.
ExperimentConfig parse_config(std::string_view text, const ExperimentConfig& base = {},
                              bool require_kernel_section = true);

/// Reads and parses a file; a relative custom kernel path is resolved
/// against the file's directory.
ExperimentConfig parse_config_file(const std::filesystem::path& path,
                                   const ExperimentConfig& base = {},
                                   bool require_kernel_section = true);

/// Names accepted by preset_config.
const std::vector<std::string>& preset_names();

/// Configuration text for fig3..fig7. Throws ConfigError for other names.
std::string preset_text(std::string_view name);
ExperimentConfig preset_config(std::string_view name);

struct ModeRecord {
  std::size_t k = 0;
  bool converged = false;
  int iterations = 0;
  int half_steps = 0;
  double r_over_r1_iteration = 0.0;
  double r_over_r1_oracle = 0.0;
  double fidelity_signal = 0.0;
  double fidelity_idler = 0.0;
  std::string error;  // empty on success
};

struct RunSummary {
  std::vector<ModeRecord> modes;
  std::string kernel_source;
  std::size_t signal_points = 0;
  std::size_t idler_points = 0;
  double signal_half_width = 0.0;
  double idler_half_width = 0.0;
  double chirp_strength = 0.0;
  double scale_G = 0.0;
  double duration_seconds = 0.0;  // reported, not written to disk

  bool all_converged() const;
};

/// Builds the kernel described by the config (custom or fiber, then the
/// optional filter).
JointSpectralAmplitude build_kernel(const ExperimentConfig& config);

/// Extracts modes 1..K, validates them against the oracle and writes the
/// enabled outputs into config.output_dir. Iteration failures are recorded
/// per mode; files for completed modes are still written. Throws on
/// kernel construction or I/O errors.
RunSummary run_experiment(const ExperimentConfig& config);

/// Oracle-only pass: writes oracle_psi_k / oracle_phi_k for k <= K and an
/// oracle mode-number table. Returns the decomposition.
SchmidtDecomposition run_decomposition(const ExperimentConfig& config);

// Output writers. Numbers carry 17 significant digits.
void emit_mode_csv(const SpectralAmplitude& mode, const std::filesystem::path& path);
void emit_time_profile_csv(const TemporalProfile& profile, const std::filesystem::path& path);
void emit_curve_csv(std::span<const ConvergenceCurve> curves, const std::filesystem::path& path);
void emit_mode_numbers_csv(std::span<const ModeRecord> records,
                           const std::filesystem::path& path);
void emit_summary(const RunSummary& summary, const std::filesystem::path& path);

}  // namespace tme
