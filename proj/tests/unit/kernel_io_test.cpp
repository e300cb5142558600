#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "brute_force.hpp"
#include "tme/kernel_io.hpp"

using namespace tme;

TEST(KernelIo, RoundTripIsExact) {
  const auto gs = make_grid(7, 1.5);
  const auto gi = make_grid(5, 2.0);
  const auto jsa = build_custom_jsf(gs, gi, ref::random_matrix(7, 5, 20));
  std::stringstream ss;
  write_kernel(ss, jsa);
  const auto back = read_kernel(ss);
  EXPECT_EQ(back.signal_grid(), gs);
  EXPECT_EQ(back.idler_grid(), gi);
  EXPECT_NEAR(back.scale_G(), jsa.scale_G(), 1e-15 * jsa.scale_G());
  EXPECT_LT((back.values() - jsa.values()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(KernelIo, ParsesHandWrittenFile) {
  std::istringstream in("3 3 1 1\n1 0\n0 0\n0 0\n0 0\n1 0\n0 0\n0 0\n0 0\n1 0\n");
  const auto jsa = read_kernel(in);
  EXPECT_NEAR(jsa.scale_G(), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(jsa.values()(1, 1).real(), 1.0 / std::sqrt(3.0), 1e-15);
}

TEST(KernelIo, RejectsMalformedInput) {
  const char* bad[] = {
      "",                                // no header
      "3 3 1\n",                         // short header
      "3 3 1 1\n1 0\n",                  // too few entries
      "3 3 1 1\n1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 9\n",  // trailing data
      "3 3 1 1\n1 x 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0\n",    // bad number
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    EXPECT_ANY_THROW(read_kernel(in)) << text;
  }
  std::istringstream even("4 3 1 1\n");
  EXPECT_THROW(read_kernel(even), std::invalid_argument);
}

TEST(KernelIo, MissingFileThrows) {
  EXPECT_THROW(read_kernel_file("/nonexistent/kernel.txt"), std::runtime_error);
}
