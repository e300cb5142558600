#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "tme/experiment.hpp"

using namespace tme;

namespace {

int error_line(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Config, MinimalKernelSectionUsesDefaults) {
  const auto c = parse_config("[kernel]\ncoeff_signal = 0.125\ncoeff_idler = -0.075\n");
  EXPECT_EQ(c.kernel.signal_grid, make_grid(201, 20.0));
  EXPECT_EQ(c.kernel.idler_grid, make_grid(201, 20.0));
  EXPECT_EQ(c.kernel.chirp_strength, 0.0);
  EXPECT_EQ(c.modes_requested, 3u);
  EXPECT_EQ(c.iteration.max_steps, 200);
  EXPECT_EQ(c.iteration.overlap_tolerance, 1e-10);
  EXPECT_EQ(c.iteration.degeneracy_window, 50);
  EXPECT_FALSE(c.custom_kernel.has_value());
}

TEST(Config, ChirpSelectsChirpedKernel) {
  const auto c = parse_config("[kernel]\nchirp_strength = 1\n");
  EXPECT_EQ(c.kernel.chirp_strength, 1.0);
}

TEST(Config, FullFileParses) {
  const auto c = parse_config(R"(
# comment
[kernel]
coeff_signal = 0.2   ; trailing comment
coeff_idler = -0.1
n_points = 101
half_width = 10
[filter]
signal_band = 2
[iteration]
max_steps = 50
overlap_tolerance = 1e-8
shaper_gain = 0.5
seed_center = 0.5
seed_width = 2
degeneracy_window = 7
start_side = idler
[run]
modes = 4
tau_points = 201
output_dir = out/here
emit_modes = false
emit_time_profiles = no
emit_convergence = on
emit_mode_numbers = 1
emit_kernel = true
)");
  EXPECT_EQ(c.kernel.coeff_signal, 0.2);
  EXPECT_EQ(c.kernel.signal_grid, make_grid(101, 10.0));
  EXPECT_EQ(c.kernel.idler_grid, make_grid(101, 10.0));
  EXPECT_EQ(c.signal_band, 2.0);
  EXPECT_FALSE(c.idler_band.has_value());
  EXPECT_EQ(c.iteration.max_steps, 50);
  EXPECT_EQ(c.iteration.shaper_gain, 0.5);
  EXPECT_EQ(c.iteration.seed.width, 2.0);
  EXPECT_EQ(c.iteration.start_side, Side::Idler);
  EXPECT_EQ(c.modes_requested, 4u);
  EXPECT_EQ(c.tau_points, 201u);
  EXPECT_EQ(c.output_dir, std::filesystem::path("out/here"));
  EXPECT_FALSE(c.emit.modes);
  EXPECT_FALSE(c.emit.time_profiles);
  EXPECT_TRUE(c.emit.convergence);
  EXPECT_TRUE(c.emit.mode_numbers);
  EXPECT_TRUE(c.emit.kernel_dump);
}

TEST(Config, FailsClosed) {
  EXPECT_EQ(error_line("[kernel]\nn_points = 200\n"), 0);   // even grid, caught at build
  EXPECT_EQ(error_line("[kernel]\nbogus = 1\n"), 2);
  EXPECT_EQ(error_line("[kernel]\n[extra]\n"), 2);
  EXPECT_EQ(error_line("coeff_signal = 1\n"), 1);
  EXPECT_EQ(error_line("[kernel]\ncoeff_signal = 1\ncoeff_signal = 2\n"), 3);
  EXPECT_EQ(error_line("[kernel]\ncoeff_signal = abc\n"), 2);
  EXPECT_EQ(error_line("[kernel]\ncoeff_signal\n"), 2);
  EXPECT_EQ(error_line("[run]\nmodes = 2\n"), 0);           // no [kernel]
  EXPECT_EQ(error_line("[kernel]\n[run]\nmodes = 0\n"), 0);
  EXPECT_EQ(error_line("[kernel]\n[run]\nemit_modes = maybe\n"), 3);
  EXPECT_EQ(error_line("[kernel]\n[iteration]\noverlap_tolerance = 2\n"), 0);
  EXPECT_EQ(error_line("[kernel]\n[iteration]\nstart_side = both\n"), 3);
  EXPECT_EQ(error_line("[kernel]\ncustom_file = k.txt\nchirp_strength = 1\n"), 0);
  EXPECT_EQ(error_line("[kernel]\n[filter]\nsignal_band = -1\n"), 0);
  EXPECT_EQ(error_line("[kernel]\n[run]\ntau_points = 400\n"), 0);
}

TEST(Config, EvenGridIsRejected) {
  EXPECT_THROW(parse_config("[kernel]\nn_points = 200\n"), ConfigError);
}

TEST(Config, LayersOverBase) {
  const auto base = preset_config("fig5");
  const auto c = parse_config("[run]\nmodes = 2\n", base, false);
  EXPECT_EQ(c.kernel.chirp_strength, 1.0);
  EXPECT_EQ(c.modes_requested, 2u);
  EXPECT_EQ(c.output_dir, base.output_dir);
}

TEST(Config, CustomFileResolvedAgainstConfigDir) {
  const auto dir = std::filesystem::temp_directory_path() / "tme_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "exp.ini";
  std::ofstream(path) << "[kernel]\ncustom_file = kernel.txt\n";
  const auto c = parse_config_file(path);
  ASSERT_TRUE(c.custom_kernel.has_value());
  EXPECT_EQ(*c.custom_kernel, dir / "kernel.txt");
  EXPECT_THROW(parse_config_file(dir / "missing.ini"), std::exception);
  std::filesystem::remove_all(dir);
}

TEST(Presets, AllFiguresExist) {
  EXPECT_EQ(preset_names(), (std::vector<std::string>{"fig3", "fig4", "fig5", "fig6", "fig7"}));
  for (const auto& name : preset_names()) {
    const auto c = preset_config(name);
    EXPECT_EQ(c.modes_requested, 3u) << name;
    EXPECT_EQ(c.kernel.coeff_signal, 0.125);
    EXPECT_EQ(c.kernel.coeff_idler, -0.075);
    EXPECT_EQ(c.output_dir, std::filesystem::path(name));
    const bool chirped = name == "fig5" || name == "fig6";
    EXPECT_EQ(c.kernel.chirp_strength, chirped ? 1.0 : 0.0) << name;
    EXPECT_FALSE(c.custom_kernel.has_value());
  }
  EXPECT_TRUE(preset_config("fig3").emit.modes);
  EXPECT_TRUE(preset_config("fig4").emit.mode_numbers);
  EXPECT_TRUE(preset_config("fig6").emit.mode_numbers);
  EXPECT_TRUE(preset_config("fig7").emit.convergence);
  EXPECT_THROW(preset_config("fig8"), ConfigError);
}
