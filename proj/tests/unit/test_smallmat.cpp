#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "taylor_expm.hpp"
#include "zemtwist/errors.hpp"
#include "zemtwist/linmodel.hpp"
#include "zemtwist/smallmat.hpp"

using namespace zemtwist;

namespace {

template <std::size_t N>
Mat<N> random_mat(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat<N> m;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) m(r, c) = u(rng);
  return m;
}

template <std::size_t N>
double max_abs_diff(const Mat<N>& a, const Mat<N>& b) {
  double worst = 0.0;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
  return worst;
}

template <std::size_t N>
double max_abs(const Mat<N>& a) {
  double worst = 0.0;
  for (double v : a.data()) worst = std::max(worst, std::abs(v));
  return worst;
}

// Random matrix whose eigenvalues have negative real part: shifted by its
// Gershgorin radius.
Mat6 random_stable(std::mt19937_64& rng) {
  Mat6 m = random_mat<6>(rng);
  for (std::size_t r = 0; r < 6; ++r) {
    double radius = 0.0;
    for (std::size_t c = 0; c < 6; ++c)
      if (c != r) radius += std::abs(m(r, c));
    m(r, r) = -radius - 0.1;
  }
  return m;
}

}  // namespace

TEST(Smallmat, ConstructionRejectsWrongLengthAndNonFinite) {
  EXPECT_THROW((Mat<2>{1.0, 2.0, 3.0}), InputDomainError);
  EXPECT_THROW((Vec<3>{1.0, 2.0}), InputDomainError);
  EXPECT_THROW((Mat<2>{1.0, std::numeric_limits<double>::quiet_NaN(), 0.0, 1.0}),
               InputDomainError);
  EXPECT_THROW((Vec<2>{1.0, std::numeric_limits<double>::infinity()}), InputDomainError);
  EXPECT_NO_THROW((Mat<2>{1.0, 2.0, 3.0, 4.0}));
}

TEST(Smallmat, IdentityIsNeutral) {
  std::mt19937_64 rng(7);
  const Mat6 a = random_mat<6>(rng);
  const Vec6 x{1.0, -2.0, 3.0, -4.0, 5.0, -6.0};
  EXPECT_EQ(mat_vec(identity<6>(), x), x);
  EXPECT_EQ(mat_mul(a, identity<6>()), a);
  EXPECT_EQ(mat_mul(identity<6>(), a), a);
}

TEST(Smallmat, ProductsMatchNaiveTripleLoop) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat6 a = random_mat<6>(rng);
    const Mat6 b = random_mat<6>(rng);
    const Mat6 ab = mat_mul(a, b);
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 6; ++c) {
        long double ref = 0.0L;
        for (int k = 0; k < 6; ++k) ref += static_cast<long double>(a(r, k)) * b(k, c);
        EXPECT_NEAR(ab(r, c), static_cast<double>(ref), 1e-14);
      }
    }
  }
}

TEST(Smallmat, SolveWithPivoting) {
  // Zero leading pivot forces a row swap.
  const Mat<3> a{0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0};
  std::mt19937_64 rng(3);
  const Mat<3> x = random_mat<3>(rng);
  const Mat<3> b = mat_mul(a, x);
  EXPECT_LT(max_abs_diff(solve(a, b), x), 1e-13);
  const Mat<3> singular{1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 0.0, 1.0};
  EXPECT_THROW(solve(singular, b), InputDomainError);
}

TEST(Smallmat, ExpAtZeroIsExactIdentity) {
  std::mt19937_64 rng(5);
  EXPECT_EQ(mat_exp(random_mat<6>(rng, 100.0), 0.0), identity<6>());
}

TEST(Smallmat, ExpOfNilpotentShift) {
  const Mat<2> a{0.0, 1.0, 0.0, 0.0};
  for (double t : {0.5, 1.0, 3.0, 10.0}) {
    const Mat<2> e = mat_exp(a, t);
    EXPECT_DOUBLE_EQ(e(0, 0), 1.0);
    EXPECT_NEAR(e(0, 1), t, 1e-14 * t);
    EXPECT_DOUBLE_EQ(e(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(e(1, 1), 1.0);
  }
}

TEST(Smallmat, ExpOfRotationGenerator) {
  const double w = 2.5;
  const Mat<2> a{0.0, -w, w, 0.0};
  const double t = 1.3;
  const Mat<2> e = mat_exp(a, t);
  EXPECT_NEAR(e(0, 0), std::cos(w * t), 1e-14);
  EXPECT_NEAR(e(0, 1), -std::sin(w * t), 1e-14);
  EXPECT_NEAR(e(1, 0), std::sin(w * t), 1e-14);
}

TEST(Smallmat, ExpRejectsNonFiniteInput) {
  Mat6 a;
  EXPECT_THROW(mat_exp(a, std::numeric_limits<double>::infinity()), InputDomainError);
  EXPECT_THROW(mat_exp(a, std::numeric_limits<double>::quiet_NaN()), InputDomainError);
}

TEST(Smallmat, ExpOfNominalIntegratedModelMatchesSeriesOracle) {
  const LinearModels m = build_models(VehicleCoeffs{}, 0.0, 0.0);
  const Mat6 e = mat_exp(m.AI, 1.0);
  const Mat6 ref = oracle::scaled_taylor_expm(m.AI, 1.0);
  EXPECT_LT(max_abs_diff(e, ref), 1e-9);
}

TEST(Smallmat, ExpMatchesPlainSeriesOracleOnRandomMatrices) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> normDist(0.1, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    Mat6 a = random_mat<6>(rng);
    a = (normDist(rng) / a.norm1()) * a;
    EXPECT_LT(max_abs_diff(mat_exp(a, 1.0), oracle::taylor_expm(a, 1.0)), 1e-9);
  }
}

TEST(Smallmat, ExpSemigroupProperty) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> tDist(0.1, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Mat6 a = random_stable(rng);
    const double t1 = tDist(rng), t2 = tDist(rng);
    const double scale = 10.0 / ((t1 + t2) * a.norm1());
    if (scale < 1.0) a = scale * a;
    const Mat6 lhs = mat_exp(a, t1 + t2);
    const Mat6 rhs = mat_mul(mat_exp(a, t1), mat_exp(a, t2));
    EXPECT_LT(max_abs_diff(lhs, rhs), 1e-8 * std::max(1.0, max_abs(lhs)));
  }
}

TEST(Smallmat, ExpDerivativeIsAExp) {
  std::mt19937_64 rng(17);
  const double h = 1e-4;
  for (int trial = 0; trial < 10; ++trial) {
    const Mat6 a = random_stable(rng);
    const double t = 0.7;
    const Mat6 fd = (1.0 / (2.0 * h)) * (mat_exp(a, t + h) - mat_exp(a, t - h));
    EXPECT_LT(max_abs_diff(fd, mat_mul(a, mat_exp(a, t))), 1e-5);
  }
}

TEST(Smallmat, ExpPreservesBlockTriangularStructure) {
  std::mt19937_64 rng(23);
  Mat6 a = random_mat<6>(rng, 3.0);
  for (std::size_t r = 3; r < 6; ++r)
    for (std::size_t c = 0; c < 3; ++c) a(r, c) = 0.0;
  const Mat6 e = mat_exp(a, 2.0);
  for (std::size_t r = 3; r < 6; ++r)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_LE(std::abs(e(r, c)), 1e-12);
}

TEST(Smallmat, ExpHandlesLargeStiffArguments) {
  // A_I at tgo = 10 s has ||A t|| in the thousands.
  const LinearModels m = build_models(VehicleCoeffs{}, 0.0, 0.0);
  const Mat6 e = mat_exp(m.AI, 10.0);
  EXPECT_TRUE(e.all_finite());
  const Mat6 ref = oracle::scaled_taylor_expm(m.AI, 10.0);
  EXPECT_LT(max_abs_diff(e, ref), 1e-9 * std::max(1.0, max_abs(ref)));
}
