// tme: extract temporal modes by stimulated iteration and check them
// against a direct decomposition.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "tme/csv_io.hpp"
#include "tme/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnconverged = 2;

tme::ExperimentConfig load(const std::string& config_path, const std::string& preset) {
  if (!preset.empty()) {
    tme::ExperimentConfig base = tme::preset_config(preset);
    if (config_path.empty()) return base;
    return tme::parse_config_file(config_path, base, false);
  }
  if (config_path.empty()) throw tme::ConfigError(0, "a config file or --preset is required");
  return tme::parse_config_file(config_path);
}

void print_summary(const tme::RunSummary& s, std::ostream& os) {
  os << "kernel: " << s.kernel_source << " (" << s.signal_points << " x " << s.idler_points
     << ", G = " << tme::format_double(s.scale_G) << ")\n";
  for (const auto& m : s.modes) {
    os << "mode " << m.k << ": ";
    if (m.converged) {
      os << "converged in " << m.iterations << " iterations, r/r1 = "
         << tme::format_double(m.r_over_r1_iteration) << " (oracle "
         << tme::format_double(m.r_over_r1_oracle) << "), fidelity "
         << tme::format_double(m.fidelity_signal) << " / "
         << tme::format_double(m.fidelity_idler) << '\n';
    } else {
      os << m.error << '\n';
    }
  }
  os << "elapsed: " << s.duration_seconds << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal-mode extraction by stimulated iteration"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Extract modes and write outputs");
  run->add_option("config", config_path, "Experiment config (INI)")->check(CLI::ExistingFile);
  run->add_option("--preset", preset, "Built-in experiment")
      ->check(CLI::IsMember(tme::preset_names()));
  run->add_option("--out", out_dir, "Output directory (overrides the config)");

  auto* dec = app.add_subcommand("decompose", "Direct decomposition only");
  dec->add_option("config", config_path, "Experiment config (INI)")->check(CLI::ExistingFile);
  dec->add_option("--preset", preset, "Built-in experiment")
      ->check(CLI::IsMember(tme::preset_names()));
  dec->add_option("--out", out_dir, "Output directory (overrides the config)");

  auto* presets = app.add_subcommand("presets", "List or print built-in experiments");
  std::string show;
  presets->add_option("name", show, "Print this preset's config text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (presets->parsed()) {
      if (show.empty()) {
        for (const auto& n : tme::preset_names()) std::cout << n << '\n';
      } else {
        std::cout << tme::preset_text(show);
      }
      return kExitOk;
    }
    tme::ExperimentConfig config = load(config_path, preset);
    if (!out_dir.empty()) config.output_dir = out_dir;

    if (dec->parsed()) {
      const auto d = tme::run_decomposition(config);
      std::cout << "wrote " << d.size() << " mode numbers to " << config.output_dir.string()
                << '\n';
      return kExitOk;
    }
    const tme::RunSummary summary = tme::run_experiment(config);
    print_summary(summary, std::cout);
    return summary.all_converged() ? kExitOk : kExitUnconverged;
  } catch (const tme::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitError;
}
