#include "walshlab/hardy.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "walshlab/walsh.h"

namespace walshlab {
namespace {

StepFn2 random_step2(int bits, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StepFn2::Matrix m(Index{1} << bits, Index{1} << bits);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return StepFn2(Resolution(bits), Resolution(bits), m);
}

StepFn2 w1w1() {
  const StepFn1 w1 = walsh_paley(1, Resolution(1));
  return tensor_product(w1, w1);
}

TEST(Martingale, RejectsNonSquareGrid) {
  EXPECT_THROW(Martingale2(StepFn2::zeros(Resolution(2), Resolution(3))), std::invalid_argument);
}

TEST(Martingale, StabilizationLevel) {
  EXPECT_EQ(Martingale2(StepFn2::constant(Resolution(4), Resolution(4), 2.0)).stabilization_level(), 0);
  EXPECT_EQ(Martingale2(w1w1().refined(Resolution(5), Resolution(5))).stabilization_level(), 1);
  const StepFn1 d = dirichlet_dyadic(3, Resolution(6));
  EXPECT_EQ(Martingale2(tensor_product(d, d)).stabilization_level(), 3);
}

TEST(Martingale, LevelZeroIsTheIntegral) {
  std::mt19937_64 rng(1);
  const StepFn2 f = random_step2(4, rng);
  const StepFn2 l0 = level(Martingale2(f), 0);
  for (Index i = 0; i < l0.values().size(); ++i) {
    EXPECT_NEAR(l0.values().data()[i], integrate(f), 1e-14);
  }
}

TEST(Martingale, LevelsAreConditionalExpectations) {
  std::mt19937_64 rng(2);
  const Martingale2 f(random_step2(5, rng));
  const auto levels = coarse_levels(f);
  ASSERT_EQ(levels.size(), 6u);
  for (int n = 0; n < 5; ++n) {
    // Averaging level n+1 over the squares of level n gives level n back.
    const auto& fine = levels[n + 1].values();
    const auto& coarse = levels[n].values();
    for (Index i = 0; i < coarse.rows(); ++i) {
      for (Index j = 0; j < coarse.cols(); ++j) {
        const double avg = fine.block(2 * i, 2 * j, 2, 2).sum() / 4.0;
        EXPECT_NEAR(avg, coarse(i, j), 1e-13);
      }
    }
    EXPECT_NEAR(levels[n].values().mean(), levels[n + 1].values().mean(), 1e-13);
  }
  EXPECT_EQ(level(f, 5), f.finest());
  EXPECT_EQ(level(f, 9), f.finest());
}

TEST(MaximalFunction, Examples) {
  const Martingale2 c(StepFn2::constant(Resolution(3), Resolution(3), -1.5));
  EXPECT_EQ(maximal_function(c), StepFn2::constant(Resolution(3), Resolution(3), 1.5));
  const Martingale2 w(w1w1().refined(Resolution(3), Resolution(3)));
  EXPECT_EQ(maximal_function(w), StepFn2::constant(Resolution(3), Resolution(3), 1.0));
}

TEST(HardyQuasinorm, Examples) {
  for (double p : {0.25, 0.5, 1.0}) {
    EXPECT_DOUBLE_EQ(hardy_quasinorm(Martingale2(w1w1()), p), 1.0);
    EXPECT_DOUBLE_EQ(hardy_quasinorm(Martingale2(StepFn2::constant(Resolution(2), Resolution(2), -3.0)), p), 3.0);
  }
}

TEST(HardyQuasinorm, DominatesLp) {
  std::mt19937_64 rng(3);
  const Martingale2 f(random_step2(4, rng));
  for (double p : {0.5, 1.0}) {
    EXPECT_GE(hardy_quasinorm(f, p), lp_quasinorm(f.finest(), p));
  }
}

TEST(ValidateAtom, DirichletDifferenceAtom) {
  const Resolution r(4);
  const StepFn1 u = dirichlet_dyadic(4, r) - dirichlet_dyadic(2, r);
  Atom a{tensor_product(u, u), 2, DyadicPoint(Resolution(2), 0), DyadicPoint(Resolution(2), 0), 0.5};
  const AtomReport rep = validate_atom(a);
  EXPECT_TRUE(rep.valid());
  EXPECT_EQ(rep.sup_norm, 144.0);
  EXPECT_EQ(rep.sup_bound, 256.0);
  EXPECT_EQ(rep.integral, 0.0);
}

TEST(ValidateAtom, ConstantFailsZeroIntegral) {
  Atom a{StepFn2::constant(Resolution(2), Resolution(2), 1.0), 0,
         DyadicPoint(Resolution(0), 0), DyadicPoint(Resolution(0), 0), 1.0};
  const AtomReport rep = validate_atom(a);
  EXPECT_TRUE(rep.support_ok);
  EXPECT_TRUE(rep.sup_bound_ok);
  EXPECT_FALSE(rep.zero_integral_ok);
  EXPECT_FALSE(rep.valid());
}

TEST(ValidateAtom, ExactSupBoundaryPasses) {
  const int n = 2;
  const double p = 0.5;
  const double h = std::exp2(2 * n / p);
  // Cube I_2 x I_2 around cell (1, 2); left half +h, right half -h.
  StepFn2::Matrix m = StepFn2::Matrix::Zero(8, 8);
  for (Index i = 2; i < 4; ++i) {
    m(i, 4) = h;
    m(i, 5) = -h;
  }
  Atom a{StepFn2(Resolution(3), Resolution(3), m), n, DyadicPoint(Resolution(2), 1),
         DyadicPoint(Resolution(2), 2), p};
  EXPECT_TRUE(validate_atom(a).valid());
  a.fn = (1.0 + 1e-6) * a.fn;
  EXPECT_FALSE(validate_atom(a).sup_bound_ok);
  a.fn = StepFn2(Resolution(3), Resolution(3), m);
  a.corner_y = DyadicPoint(Resolution(2), 3);
  EXPECT_FALSE(validate_atom(a).support_ok);
}

TEST(Assemble, SingleAtom) {
  const StepFn2 f = w1w1();
  AtomicDecomposition d;
  d.entries.push_back({1.0, Atom{f, 0, DyadicPoint(Resolution(0), 0), DyadicPoint(Resolution(0), 0), 1.0}});
  const AssembledMartingale am = assemble(d);
  EXPECT_EQ(am.martingale.finest(), f);
  EXPECT_EQ(am.hp_upper_bound, 1.0);
}

TEST(Assemble, TwoDisjointAtoms) {
  const Resolution r(3);
  const StepFn1 left = dirichlet_dyadic(2, r) - dirichlet_dyadic(1, r);
  StepFn1::Vector sv = StepFn1::Vector::Zero(8);
  sv << 0, 0, 0, 0, 2, 2, -2, -2;
  const StepFn1 right(r, sv);
  AtomicDecomposition d;
  d.entries.push_back({1.0, Atom{tensor_product(left, left), 1, DyadicPoint(Resolution(1), 0),
                                 DyadicPoint(Resolution(1), 0), 1.0}});
  d.entries.push_back({1.0, Atom{tensor_product(right, right), 1, DyadicPoint(Resolution(1), 1),
                                 DyadicPoint(Resolution(1), 1), 1.0}});
  for (const auto& e : d.entries) EXPECT_TRUE(validate_atom(e.atom).valid());
  const AssembledMartingale am = assemble(d);
  EXPECT_EQ(am.hp_upper_bound, 2.0);
  const double hp = hardy_quasinorm(am.martingale, 1.0);
  RecordProperty("hp_over_bound", std::to_string(hp / am.hp_upper_bound));
  EXPECT_GT(hp, 0.0);
  EXPECT_LE(hp, 4.0 * am.hp_upper_bound);
}

TEST(Assemble, EmptyAndMixed) {
  const AssembledMartingale empty = assemble(AtomicDecomposition{});
  EXPECT_EQ(empty.hp_upper_bound, 0.0);
  EXPECT_EQ(hardy_quasinorm(empty.martingale, 1.0), 0.0);
  AtomicDecomposition d;
  d.entries.push_back({1.0, Atom{w1w1(), 0, DyadicPoint(Resolution(0), 0), DyadicPoint(Resolution(0), 0), 1.0}});
  d.entries.push_back({1.0, Atom{w1w1(), 0, DyadicPoint(Resolution(0), 0), DyadicPoint(Resolution(0), 0), 0.5}});
  EXPECT_THROW(assemble(d), std::invalid_argument);
}

}  // namespace
}  // namespace walshlab
