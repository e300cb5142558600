#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "brute_force.hpp"
#include "tme/csv_io.hpp"
#include "tme/experiment.hpp"
#include "tme/kernel_io.hpp"

using namespace tme;
namespace fs = std::filesystem;

namespace {

class ExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("tme_experiment_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  ExperimentConfig preset(const std::string& name, const std::string& sub) const {
    auto c = preset_config(name);
    c.output_dir = dir_ / sub;
    return c;
  }

  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_F(ExperimentTest, Fig3WritesSixModeFiles) {
  const auto s = run_experiment(preset("fig3", "out"));
  ASSERT_EQ(s.modes.size(), 3u);
  EXPECT_TRUE(s.all_converged());
  for (const auto& m : s.modes) {
    EXPECT_GE(m.fidelity_signal, 1.0 - 1e-6);
    EXPECT_GE(m.fidelity_idler, 1.0 - 1e-6);
    EXPECT_NEAR(m.r_over_r1_iteration, m.r_over_r1_oracle, 1e-6);
    EXPECT_TRUE(m.error.empty());
  }
  for (const char* stem : {"psi", "phi", "time_f", "time_g"}) {
    for (int k = 1; k <= 3; ++k) {
      const auto p = dir_ / "out" / (std::string(stem) + "_" + std::to_string(k) + ".csv");
      ASSERT_TRUE(fs::exists(p)) << p;
    }
  }
  const auto psi = read_csv(dir_ / "out" / "psi_1.csv");
  EXPECT_EQ(psi.header, (std::vector<std::string>{"omega", "re", "im", "abs", "phase_unwrapped"}));
  EXPECT_EQ(psi.rows.size(), 201u);
  const auto tf = read_csv(dir_ / "out" / "time_f_2.csv");
  EXPECT_EQ(tf.header, (std::vector<std::string>{"tau", "re", "im", "abs"}));
  EXPECT_EQ(tf.rows.size(), 401u);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "summary.txt"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "convergence.csv"));
}

TEST_F(ExperimentTest, Fig7WritesThreeCurves) {
  run_experiment(preset("fig7", "out"));
  const auto t = read_csv(dir_ / "out" / "convergence.csv");
  EXPECT_EQ(t.header, (std::vector<std::string>{"step", "mode_index", "R_normalized", "limit"}));
  std::map<int, std::vector<std::vector<double>>> by_mode;
  for (const auto& r : t.rows) by_mode[static_cast<int>(r[1])].push_back(r);
  ASSERT_EQ(by_mode.size(), 3u);
  EXPECT_EQ(by_mode[1].back()[3], 1.0);
  for (auto& [k, rows] : by_mode) {
    EXPECT_NEAR(rows.back()[2], rows.back()[3], 1e-6) << k;
    EXPECT_EQ(rows.front()[0], 1.0);
  }
}

TEST_F(ExperimentTest, Fig4ModeNumbersStartAtOne) {
  run_experiment(preset("fig4", "out"));
  const auto t = read_csv(dir_ / "out" / "mode_numbers.csv");
  EXPECT_EQ(t.header,
            (std::vector<std::string>{"k", "r_over_r1_iteration", "r_over_r1_oracle"}));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0][0], 1.0);
  EXPECT_EQ(t.rows[0][1], 1.0);
  EXPECT_EQ(t.rows[0][2], 1.0);
  EXPECT_GT(t.rows[1][2], t.rows[2][2]);
}

TEST_F(ExperimentTest, RankOneKernelExhaustsAfterFirstMode) {
  const auto g = make_grid(11, 2.0);
  CVector u = ref::random_vector(11, 90).real().cast<cplx>();
  CVector v = ref::random_vector(11, 91).real().cast<cplx>();
  write_kernel_file(dir_ / "rank1.txt", build_custom_jsf(g, g, u * v.transpose()));
  const auto c = parse_config_file(
      [&] {
        std::ofstream(dir_ / "rank1.ini")
            << "[kernel]\ncustom_file = rank1.txt\n[run]\nmodes = 3\noutput_dir = "
            << (dir_ / "out").string() << "\n";
        return dir_ / "rank1.ini";
      }());
  const auto s = run_experiment(c);
  ASSERT_EQ(s.modes.size(), 3u);
  EXPECT_TRUE(s.modes[0].converged);
  EXPECT_GE(s.modes[0].fidelity_signal, 1.0 - 1e-12);
  EXPECT_FALSE(s.modes[1].converged);
  EXPECT_NE(s.modes[1].error.find("mode 2"), std::string::npos);
  EXPECT_NE(s.modes[1].error.find("annihilated"), std::string::npos);
  EXPECT_FALSE(s.modes[2].converged);
  EXPECT_NE(s.modes[2].error.find("not attempted"), std::string::npos);
  EXPECT_FALSE(s.all_converged());
  EXPECT_TRUE(fs::exists(dir_ / "out" / "psi_1.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "psi_2.csv"));
  const std::string summary = slurp(dir_ / "out" / "summary.txt");
  EXPECT_NE(summary.find("mode.2.converged = false"), std::string::npos);
  EXPECT_NE(summary.find("mode.2.error = "), std::string::npos);
}

TEST_F(ExperimentTest, RunsAreByteIdentical) {
  run_experiment(preset("fig3", "a"));
  run_experiment(preset("fig3", "b"));
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "a")) {
    const auto other = dir_ / "b" / e.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path().filename();
    ++files;
  }
  EXPECT_EQ(files, 13u);
}

TEST_F(ExperimentTest, ModeCsvRoundTripsExactly) {
  const auto seed = gaussian_seed(make_grid(201, 20.0));
  emit_mode_csv(seed, dir_ / "g.csv");
  const auto t = read_csv(dir_ / "g.csv");
  ASSERT_EQ(t.rows.size(), 201u);
  for (std::size_t i = 0; i < 201; ++i) {
    const cplx v = seed.values()[static_cast<Eigen::Index>(i)];
    EXPECT_EQ(t.rows[i][0], seed.grid().point(i));
    EXPECT_EQ(t.rows[i][1], v.real());
    EXPECT_EQ(t.rows[i][2], v.imag());
    EXPECT_EQ(t.rows[i][3], std::abs(v));
  }
}

TEST_F(ExperimentTest, EmptyCurveListIsHeaderOnly) {
  emit_curve_csv({}, dir_ / "c.csv");
  EXPECT_EQ(slurp(dir_ / "c.csv"), "step,mode_index,R_normalized,limit\n");
}

TEST_F(ExperimentTest, UnwritablePathThrows) {
  EXPECT_THROW(emit_curve_csv({}, dir_ / "no" / "such" / "c.csv"), std::runtime_error);
  RunSummary s;
  EXPECT_THROW(emit_summary(s, dir_ / "no" / "summary.txt"), std::runtime_error);
}

TEST_F(ExperimentTest, DecomposeWritesOracleTables) {
  auto c = preset("fig3", "oracle");
  const auto d = run_decomposition(c);
  EXPECT_GT(d.size(), 3u);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_TRUE(fs::exists(c.output_dir / ("oracle_psi_" + std::to_string(k) + ".csv")));
    EXPECT_TRUE(fs::exists(c.output_dir / ("oracle_phi_" + std::to_string(k) + ".csv")));
  }
  const auto t = read_csv(c.output_dir / "oracle_mode_numbers.csv");
  EXPECT_EQ(t.header, (std::vector<std::string>{"k", "r", "r_over_r1"}));
  EXPECT_EQ(t.rows.size(), d.size());
  EXPECT_EQ(t.rows[0][2], 1.0);
}

TEST_F(ExperimentTest, BandFilterIsApplied) {
  auto c = preset("fig3", "f");
  c.signal_band = 2.0;
  const auto filtered = build_kernel(c);
  const auto& g = filtered.signal_grid();
  for (std::size_t i = 0; i < g.n_points(); ++i) {
    if (std::abs(g.point(i)) > 2.0) {
      EXPECT_EQ(filtered.values().row(static_cast<Eigen::Index>(i)).norm(), 0.0);
    }
  }
  EXPECT_LT(filtered.scale_G(), build_kernel(preset("fig3", "u")).scale_G());
}

TEST_F(ExperimentTest, KernelDumpReloads) {
  auto c = preset("fig3", "k");
  c.emit = {false, false, false, false, true};
  run_experiment(c);
  const auto back = read_kernel_file(c.output_dir / "kernel.txt");
  const auto orig = build_kernel(c);
  EXPECT_NEAR(back.scale_G(), orig.scale_G(), 1e-14 * orig.scale_G());
  EXPECT_LT((back.values() - orig.values()).cwiseAbs().maxCoeff(), 1e-15);
}
