#include "walshlab/walsh.h"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

namespace walshlab {
namespace {

StepFn1 vec(int bits, std::initializer_list<double> xs) {
  StepFn1::Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return StepFn1(Resolution(bits), v);
}

StepFn1 random_step(int bits, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StepFn1::Vector v(Index{1} << bits);
  for (auto& x : v) x = g(rng);
  return StepFn1(Resolution(bits), v);
}

StepFn2 random_step2(int bx, int by, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StepFn2::Matrix m(Index{1} << bx, Index{1} << by);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return StepFn2(Resolution(bx), Resolution(by), m);
}

TEST(Rademacher, Examples) {
  EXPECT_EQ(rademacher(0, Resolution(1)), vec(1, {1, -1}));
  EXPECT_EQ(rademacher(1, Resolution(2)), vec(2, {1, -1, 1, -1}));
  for (int k = 0; k < 6; ++k) EXPECT_EQ(integrate(rademacher(k, Resolution(6))), 0.0);
  EXPECT_THROW(rademacher(2, Resolution(2)), std::out_of_range);
}

TEST(WalshPaley, Examples) {
  EXPECT_EQ(walsh_paley(0, Resolution(3)), StepFn1::constant(Resolution(3), 1.0));
  EXPECT_EQ(walsh_paley(3, Resolution(2)), vec(2, {1, -1, -1, 1}));
}

TEST(WalshPaley, Orthonormal) {
  for (std::uint64_t m = 0; m < 16; ++m) {
    for (std::uint64_t n = 0; n < 16; ++n) {
      const double ip = integrate(walsh_paley(m, Resolution(4)) * walsh_paley(n, Resolution(4)));
      EXPECT_EQ(ip, m == n ? 1.0 : 0.0) << m << "," << n;
    }
  }
}

TEST(Dirichlet, Examples) {
  EXPECT_EQ(dirichlet_kernel(1, Resolution(3)), StepFn1::constant(Resolution(3), 1.0));
  EXPECT_EQ(dirichlet_kernel(4, Resolution(2)), vec(2, {4, 0, 0, 0}));
  EXPECT_EQ(dirichlet_kernel(3, Resolution(2)), vec(2, {3, 1, 1, -1}));
  EXPECT_EQ(dirichlet_closed(3, Resolution(2)), vec(2, {3, 1, 1, -1}));
  EXPECT_EQ(dirichlet_kernel(0, Resolution(2)), StepFn1::zeros(Resolution(2)));
  EXPECT_THROW(dirichlet_kernel(5, Resolution(2)), std::out_of_range);
}

TEST(Dirichlet, DyadicClosedForm) {
  const Resolution res(10);
  for (int m = 0; m <= 10; ++m) {
    const StepFn1 d = dirichlet_closed(std::uint64_t{1} << m, res);
    EXPECT_EQ(d, dirichlet_dyadic(m, res));
    for (Index j = 0; j < res.cells(); ++j) {
      const bool in_im = (j >> (10 - m)) == 0;
      ASSERT_EQ(d[j], in_im ? std::exp2(m) : 0.0);
    }
  }
}

TEST(Dirichlet, PaleyIdentityAndValueAtZero) {
  const Resolution res(7);
  for (std::uint64_t n = 0; n <= 128; ++n) {
    const StepFn1 d = dirichlet_closed(n, res);
    EXPECT_EQ(d, dirichlet_kernel(n, res)) << n;
    EXPECT_EQ(d[0], static_cast<double>(n));
  }
}

TEST(Transform, Examples) {
  const Spectrum1 one = forward_transform(StepFn1::constant(Resolution(3), 1.0));
  EXPECT_EQ(one.coeffs()[0], 1.0);
  for (Index i = 1; i < 8; ++i) EXPECT_EQ(one.coeffs()[i], 0.0);
  const Spectrum1 d4 = forward_transform(vec(2, {4, 0, 0, 0}));
  for (Index i = 0; i < 4; ++i) EXPECT_EQ(d4.coeffs()[i], 1.0);
  EXPECT_EQ(inverse_transform(d4), vec(2, {4, 0, 0, 0}));
  Spectrum1::Vector e = Spectrum1::Vector::Zero(8);
  e[0] = 1;
  EXPECT_EQ(inverse_transform(Spectrum1(Resolution(3), e)), StepFn1::constant(Resolution(3), 1.0));
}

TEST(Transform, WalshFunctionsAreUnitVectors) {
  const Resolution res(6);
  for (std::uint64_t n = 0; n < 64; ++n) {
    const Spectrum1 s = forward_transform(walsh_paley(n, res));
    for (Index i = 0; i < 64; ++i) ASSERT_EQ(s[i], i == static_cast<Index>(n) ? 1.0 : 0.0);
  }
}

TEST(Transform, MatchesOracle1D) {
  std::mt19937_64 rng(1);
  for (int bits = 0; bits <= 7; ++bits) {
    const StepFn1 f = random_step(bits, rng);
    const Spectrum1 s = forward_transform(f);
    for (Index i = 0; i < s.coeffs().size(); ++i) {
      EXPECT_NEAR(s[i], coefficient_oracle(f, static_cast<std::uint64_t>(i)), 1e-13);
    }
  }
}

TEST(Transform, MatchesOracle2D) {
  std::mt19937_64 rng(2);
  const StepFn2 f = random_step2(3, 4, rng);
  const Spectrum2 s = forward_transform(f);
  for (Index i = 0; i < 8; ++i) {
    for (Index j = 0; j < 16; ++j) {
      EXPECT_NEAR(s(i, j), coefficient_oracle(f, i, j), 1e-13);
    }
  }
}

TEST(Transform, RoundTripAndParseval) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const StepFn1 f = random_step(10, rng);
    const Spectrum1 s = forward_transform(f);
    const StepFn1 back = inverse_transform(s);
    ASSERT_LE((back.values() - f.values()).cwiseAbs().maxCoeff(), 1e-10);
    if (t < 5) {
      const double energy = integrate(f * f);
      EXPECT_NEAR(s.coeffs().squaredNorm(), energy, 1e-10 * energy);
    }
  }
  const StepFn2 g = random_step2(7, 7, rng);
  const Spectrum2 s2 = forward_transform(g);
  const double energy = g.values().squaredNorm() / (128.0 * 128.0);
  EXPECT_NEAR(s2.coeffs().squaredNorm(), energy, 1e-10 * energy);
  EXPECT_LE((inverse_transform(s2).values() - g.values()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Transform, Linearity) {
  std::mt19937_64 rng(4);
  const StepFn1 f = random_step(8, rng);
  const StepFn1 g = random_step(8, rng);
  const double a = 1.75, b = -0.5;
  const Spectrum1 lhs = forward_transform(a * f + b * g);
  const Spectrum1::Vector rhs = a * forward_transform(f).coeffs() + b * forward_transform(g).coeffs();
  EXPECT_LE((lhs.coeffs() - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Transform, RowColumnOrderIsIrrelevant) {
  std::mt19937_64 rng(5);
  const StepFn2 f = random_step2(4, 5, rng);
  const Spectrum2 s = forward_transform(f);
  // Columns first: transform every column, then every row.
  StepFn2::Matrix cols(16, 32);
  for (Index j = 0; j < 32; ++j) {
    const Spectrum1 c = forward_transform(StepFn1(Resolution(4), f.values().col(j)));
    cols.col(j) = c.coeffs();
  }
  for (Index i = 0; i < 16; ++i) {
    const Spectrum1 r = forward_transform(StepFn1(Resolution(5), cols.row(i).transpose()));
    for (Index j = 0; j < 32; ++j) EXPECT_NEAR(r[j], s(i, j), 1e-14);
  }
}

TEST(Transform, ResultIndependentOfThreadCount) {
  std::mt19937_64 rng(6);
  const StepFn2 f = random_step2(8, 8, rng);
  set_max_threads(1);
  const Spectrum2 a = forward_transform(f);
  set_max_threads(4);
  const Spectrum2 b = forward_transform(f);
  set_max_threads(0);
  EXPECT_EQ(a.coeffs(), b.coeffs());
}

TEST(RectangularPartialSum, Examples) {
  const StepFn1 w1 = walsh_paley(1, Resolution(1));
  const StepFn2 f = tensor_product(w1, w1);
  const Spectrum2 s = forward_transform(f);
  EXPECT_EQ(rectangular_partial_sum(s, 1, 1), StepFn2::zeros(Resolution(1), Resolution(1)));
  EXPECT_EQ(rectangular_partial_sum(s, 2, 2), f);
  EXPECT_EQ(rectangular_partial_sum(s, 0, 2), StepFn2::zeros(Resolution(1), Resolution(1)));

  const StepFn1 d4 = dirichlet_dyadic(2, Resolution(2));
  const Spectrum2 sd = forward_transform(tensor_product(d4, d4));
  EXPECT_EQ(rectangular_partial_sum(sd, 3, 2),
            tensor_product(dirichlet_kernel(3, Resolution(2)), dirichlet_kernel(2, Resolution(2))));
  EXPECT_THROW(rectangular_partial_sum(sd, 5, 1), std::out_of_range);
}

TEST(RectangularPartialSum, FullRangeReproduces) {
  std::mt19937_64 rng(8);
  const StepFn2 f = random_step2(4, 4, rng);
  const StepFn2 g = rectangular_partial_sum(forward_transform(f), 16, 16);
  EXPECT_LE((g.values() - f.values()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(CoefficientOracle, Examples) {
  const StepFn2 one = StepFn2::constant(Resolution(3), Resolution(3), 1.0);
  EXPECT_EQ(coefficient_oracle(one, 0, 0), 1.0);
  EXPECT_EQ(coefficient_oracle(one, 0, 3), 0.0);
  const StepFn2 f = tensor_product(walsh_paley(2, Resolution(3)), walsh_paley(3, Resolution(3)));
  for (std::uint64_t i = 0; i < 8; ++i) {
    for (std::uint64_t j = 0; j < 8; ++j) {
      EXPECT_EQ(coefficient_oracle(f, i, j), (i == 2 && j == 3) ? 1.0 : 0.0);
    }
  }
}

TEST(TransformPerformance, TwoDimensional1024Square) {
  std::mt19937_64 rng(9);
  const StepFn2 f = random_step2(10, 10, rng);
  double best = 1e9;
  for (int rep = 0; rep < 3; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    const Spectrum2 s = forward_transform(f);
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    ASSERT_EQ(s.coeffs().rows(), 1024);
  }
  RecordProperty("best_ms", std::to_string(best));
  EXPECT_LT(best, 250.0);
}

}  // namespace
}  // namespace walshlab
