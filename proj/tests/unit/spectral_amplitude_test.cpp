#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "brute_force.hpp"
#include "tme/spectral_amplitude.hpp"

using namespace tme;

TEST(SpectralAmplitude, ValidatesLengthAndFiniteness) {
  const auto g = make_grid(5, 1.0);
  EXPECT_THROW(SpectralAmplitude(g, CVector::Zero(4)), std::invalid_argument);
  CVector v = CVector::Ones(5);
  v[2] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
  EXPECT_THROW(SpectralAmplitude(g, v), std::invalid_argument);
}

TEST(SpectralAmplitude, ModeRoleRequiresUnitNorm) {
  const auto g = make_grid(5, 1.0);
  EXPECT_THROW(SpectralAmplitude(g, CVector::Ones(5), AmplitudeRole::Mode),
               std::invalid_argument);
  const CVector unit = CVector::Ones(5) / std::sqrt(5.0 * g.weight());
  EXPECT_NO_THROW(SpectralAmplitude(g, unit, AmplitudeRole::Mode));
}

TEST(SpectralAmplitude, InnerProductMatchesDirectSum) {
  const auto g = make_grid(11, 3.0);
  const CVector a = ref::random_vector(11, 1);
  const CVector b = ref::random_vector(11, 2);
  const cplx got = inner(SpectralAmplitude(g, a), SpectralAmplitude(g, b));
  const cplx want = ref::brute_inner(a, b, g.weight());
  EXPECT_NEAR(std::abs(got - want), 0.0, 1e-13 * std::abs(want));
  EXPECT_NEAR(norm(SpectralAmplitude(g, a)), ref::brute_norm(a, g.weight()), 1e-13);
}

TEST(SpectralAmplitude, InnerIsConjugateLinearInFirstArgument) {
  const auto g = make_grid(7, 1.0);
  const CVector a = ref::random_vector(7, 3);
  const CVector b = ref::random_vector(7, 4);
  const cplx s(0.3, -1.2);
  const cplx lhs = inner(SpectralAmplitude(g, s * a), SpectralAmplitude(g, b));
  const cplx rhs = std::conj(s) * inner(SpectralAmplitude(g, a), SpectralAmplitude(g, b));
  EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-13);
}

TEST(PhaseConvention, LargestEntryBecomesRealPositive) {
  const auto g = make_grid(9, 2.0);
  const CVector v = ref::random_vector(9, 5);
  const auto m = make_mode(g, v);
  const Eigen::Index ref = phase_reference_index(m.values());
  EXPECT_GT(m.values()[ref].real(), 0.0);
  EXPECT_EQ(m.values()[ref].imag(), 0.0);
  EXPECT_NEAR(norm(m), 1.0, 1e-14);
}

TEST(PhaseConvention, TiesGoToLowestIndex) {
  const auto g = make_grid(5, 1.0);
  CVector v(5);
  v << cplx(0.1, 0), cplx(0, 1), cplx(0.2, 0), cplx(-1, 0), cplx(0.1, 0);
  EXPECT_EQ(phase_reference_index(v), 1);
  const auto m = make_mode(g, v);
  EXPECT_GT(m.values()[1].real(), 0.0);
  // -1 rotated by -i lands on +i.
  EXPECT_NEAR(std::abs(m.values()[3] - cplx(0, m.values()[1].real())), 0.0, 1e-15);
}

TEST(PhaseConvention, IsInvariantUnderGlobalPhase) {
  const auto g = make_grid(9, 2.0);
  const CVector v = ref::random_vector(9, 6);
  const auto a = make_mode(g, v);
  const auto b = make_mode(g, std::polar(1.0, 2.1) * v);
  EXPECT_LT((a.values() - b.values()).norm(), 1e-14);
}

TEST(PhaseConvention, RejectsZero) {
  const auto g = make_grid(5, 1.0);
  EXPECT_THROW(make_mode(g, CVector::Zero(5)), std::invalid_argument);
}

TEST(GaussianSeed, UnitNormAndPeakedAtCenter) {
  const auto g = make_grid(201, 20.0);
  const auto s = gaussian_seed(g);
  EXPECT_NEAR(norm(s), 1.0, 1e-14);
  EXPECT_EQ(phase_reference_index(s.values()), static_cast<Eigen::Index>(g.center_index()));
  const auto shifted = gaussian_seed(g, 2.0, 0.5);
  const double w = shifted.values().cwiseAbs().maxCoeff();
  EXPECT_NEAR(std::abs(shifted.values()[110]), w, 1e-12);  // point 110 is +2.0
}
