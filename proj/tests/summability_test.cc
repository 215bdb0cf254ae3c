#include "walshlab/summability.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "walshlab/walsh.h"

namespace walshlab {
namespace {

Martingale2 w1w1(int bits = 3) {
  const StepFn1 w1 = walsh_paley(1, Resolution(bits));
  return Martingale2(tensor_product(w1, w1));
}

Martingale2 random_martingale(int bits, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StepFn2::Matrix m(Index{1} << bits, Index{1} << bits);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return Martingale2(StepFn2(Resolution(bits), Resolution(bits), m));
}

Martingale2 zero() { return Martingale2(StepFn2::zeros(Resolution(3), Resolution(3))); }

TEST(ConeIndices, Examples) {
  using P = std::pair<Index, Index>;
  EXPECT_EQ(cone_indices(0, 3, 3), (std::vector<P>{{1, 1}, {2, 2}, {3, 3}}));
  EXPECT_EQ(cone_indices(1, 2, 2), (std::vector<P>{{1, 1}, {1, 2}, {2, 1}, {2, 2}}));
  EXPECT_THROW(cone_indices(-1, 2, 2), std::invalid_argument);
}

TEST(ConeIndices, MatchesBruteForce) {
  for (double alpha : {0.0, 1.0, 2.0, 0.5, 1.5}) {
    for (Index n : {1, 5, 8}) {
      for (Index m : {1, 7, 8}) {
        std::size_t count = 0;
        for (Index k = 1; k <= n; ++k) {
          for (Index l = 1; l <= m; ++l) {
            const double r = static_cast<double>(k) / static_cast<double>(l);
            if (r >= std::exp2(-alpha) && r <= std::exp2(alpha)) ++count;
          }
        }
        EXPECT_EQ(cone_indices(alpha, n, m).size(), count) << alpha << " " << n << " " << m;
      }
    }
  }
}

TEST(ConeIndices, Symmetric) {
  const auto a = cone_indices(1, 6, 9);
  const auto b = cone_indices(1, 9, 6);
  ASSERT_EQ(a.size(), b.size());
  for (const auto& [k, l] : a) {
    EXPECT_NE(std::find(b.begin(), b.end(), std::make_pair(l, k)), b.end());
  }
}

TEST(WeiszFunctional, ZeroFunction) {
  for (auto kind : {NormKind::kStrong, NormKind::kWeak}) {
    EXPECT_EQ(weisz_functional(zero(), 1.0, 1.0, 8, 8, kind), 0.0);
    EXPECT_EQ(weisz_functional(zero(), 0.5, 0.0, 8, 4, kind), 0.0);
  }
}

TEST(WeiszFunctional, HandComputedDiagonal) {
  const double lg = std::log2(4.0);
  const double expected = (1.0 / 4 + 1.0 / 9 + 1.0 / 16) / (lg * lg);
  EXPECT_NEAR(weisz_functional(w1w1(), 1.0, 0.0, 4, 4, NormKind::kStrong), expected, 1e-15);
}

TEST(WeiszFunctional, RejectsBadArguments) {
  EXPECT_THROW(weisz_functional(zero(), 1.5, 0, 4, 4, NormKind::kStrong), std::invalid_argument);
  EXPECT_THROW(weisz_functional(zero(), 1.0, 0, 1, 4, NormKind::kStrong), std::invalid_argument);
}

TEST(WeiszFunctional, InnerSumMonotone) {
  std::mt19937_64 rng(1);
  const Martingale2 f = random_martingale(4, rng);
  PartialSumNorms norms(f, 0.5, NormKind::kStrong);
  double prev = 0.0;
  for (Index n = 2; n <= 32; n *= 2) {
    const double v = weisz_inner_sum(norms, 1.0, n, n);
    EXPECT_GE(v, prev);
    EXPECT_GE(weisz_inner_sum(norms, 1.0, n, 2 * n), v);
    prev = v;
  }
}

TEST(WeiszFunctional, InnerSumEqualsW1WithoutPrefactor) {
  std::mt19937_64 rng(2);
  const Martingale2 f = random_martingale(4, rng);
  PartialSumNorms norms(f, 1.0, NormKind::kStrong);
  for (Index N : {2, 5, 16, 20}) {
    EXPECT_EQ(weisz_inner_sum(norms, 0.0, N, N),
              diagonal_variant_sum(f, Variant::kW1, 1.0, N, false));
  }
}

TEST(WeiszFunctional, Homogeneous) {
  std::mt19937_64 rng(3);
  const Martingale2 f = random_martingale(3, rng);
  const Martingale2 g(-2.5 * f.finest());
  for (double p : {0.5, 1.0}) {
    for (auto kind : {NormKind::kStrong, NormKind::kWeak}) {
      const double a = weisz_functional(f, p, 1.0, 8, 8, kind);
      const double b = weisz_functional(g, p, 1.0, 8, 8, kind);
      EXPECT_NEAR(b, std::pow(2.5, p) * a, 1e-12 * b);
    }
  }
}

TEST(WeiszFunctional, BoundedRatioForRandomAtom) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  // Zero-mean function supported on I_1 x I_1.
  StepFn2::Matrix m = StepFn2::Matrix::Zero(16, 16);
  for (Index i = 0; i < 8; ++i) {
    for (Index j = 0; j < 8; ++j) m(i, j) = g(rng);
  }
  m.topLeftCorner(8, 8).array() -= m.topLeftCorner(8, 8).mean();
  const Martingale2 f(StepFn2(Resolution(4), Resolution(4), m));
  const double hp = hardy_quasinorm(f, 1.0);
  PartialSumNorms norms(f, 1.0, NormKind::kStrong);
  double r128 = 0.0, r256 = 0.0, best = 0.0;
  for (Index n = 4; n <= 256; n *= 2) {
    const double r = weisz_functional(norms, 1.0, n, n) / hp;
    best = std::max(best, r);
    if (n == 128) r128 = r;
    if (n == 256) r256 = r;
  }
  RecordProperty("max_ratio", std::to_string(best));
  EXPECT_LT(best, 10.0);
  EXPECT_LE(r256, 1.05 * r128);
}

TEST(DiagonalVariants, ZeroFunction) {
  EXPECT_EQ(diagonal_variant_sum(zero(), Variant::kW1, 1.0, 8), 0.0);
  EXPECT_EQ(diagonal_variant_sum(zero(), Variant::kW2, 0.5, 8), 0.0);
  EXPECT_EQ(diagonal_variant_sum(zero(), Variant::kTH, 1.0, 8), 0.0);
  EXPECT_EQ(diagonal_variant_sum(zero(), Variant::kTH1, 0.5, 8), 0.0);
}

TEST(DiagonalVariants, HandComputed) {
  double th = 0.0;
  for (int n = 2; n <= 4; ++n) th += 1.0 / (n * std::log2(n) * std::log2(n));
  EXPECT_NEAR(diagonal_variant_sum(w1w1(), Variant::kTH, 1.0, 4), th, 1e-15);
  EXPECT_NEAR(diagonal_variant_sum(w1w1(), Variant::kTH1, 0.5, 3), 1.0 / 4 + 1.0 / 9, 1e-15);
  EXPECT_NEAR(diagonal_variant_sum(w1w1(), Variant::kW2, 0.5, 3), 1.0 / 8 + 1.0 / 27, 1e-15);
}

TEST(DiagonalVariants, VariantAndExponentMustMatch) {
  EXPECT_THROW(diagonal_variant_sum(zero(), Variant::kTH, 0.5, 4), std::invalid_argument);
  EXPECT_THROW(diagonal_variant_sum(zero(), Variant::kW2, 1.0, 4), std::invalid_argument);
  EXPECT_THROW(diagonal_variant_sum(zero(), Variant::kW1, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(variant_from_string("W3"), std::invalid_argument);
}

TEST(PhiConeSum, ConstantOneMatchesWeisz) {
  std::mt19937_64 rng(5);
  const Martingale2 f = random_martingale(4, rng);
  for (auto kind : {NormKind::kStrong, NormKind::kWeak}) {
    EXPECT_NEAR(phi_cone_sum(f, 0.5, 1.0, constant_weight(1.0), 16, 12, kind),
                weisz_functional(f, 0.5, 1.0, 16, 12, kind), 1e-13);
  }
  EXPECT_EQ(phi_cone_sum(zero(), 0.5, 1.0, log4_weight(), 8, 8, NormKind::kStrong), 0.0);
  EXPECT_THROW(phi_cone_sum(zero(), 1.0, 1.0, log4_weight(), 8, 8, NormKind::kStrong),
               std::invalid_argument);
}

TEST(PartialSumNorms, ClampsBeyondGrid) {
  std::mt19937_64 rng(6);
  const Martingale2 f = random_martingale(3, rng);
  PartialSumNorms norms(f, 1.0, NormKind::kStrong);
  EXPECT_EQ(norms.powered(100, 9), norms.powered(8, 8));
  EXPECT_NEAR(norms.powered(8, 8), lp_quasinorm(f.finest(), 1.0), 1e-13);
  EXPECT_EQ(norms.powered(0, 5), 0.0);
}

TEST(WeightFunction, Validation) {
  EXPECT_TRUE(validate_weight(log4_weight(), 1 << 20).admissible());
  EXPECT_TRUE(validate_weight(loglog_weight(), 1 << 20).admissible());
  const WeightReport bad = validate_weight(
      WeightFunction("inv", [](double m, double n) { return 1.0 / (m + n); }), 1024);
  EXPECT_FALSE(bad.at_least_one);
  EXPECT_FALSE(bad.monotone);
  const WeightReport flat = validate_weight(constant_weight(5.0), 1024);
  EXPECT_TRUE(flat.monotone);
  EXPECT_TRUE(flat.at_least_one);
  EXPECT_FALSE(flat.diverging_on_grid);
  EXPECT_FALSE(flat.admissible());
}

TEST(WeightFunction, Names) {
  EXPECT_EQ(weight_from_name("log4")(4, 4), std::pow(1 + std::log2(5.0), 4));
  EXPECT_EQ(weight_from_name("const:2.5")(3, 7), 2.5);
  EXPECT_THROW(weight_from_name("const:"), std::invalid_argument);
  EXPECT_THROW(weight_from_name("cubic"), std::invalid_argument);
}

}  // namespace
}  // namespace walshlab
