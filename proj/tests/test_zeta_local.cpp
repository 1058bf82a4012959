#include "test_support.hpp"

#include "stackheight/zeta_local.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace stackheight;
using stackheight::testing::load_bundled;

namespace {

SparsePoly var(std::size_t n, std::size_t i) { return SparsePoly::variable(n, i); }
SparsePoly one(std::size_t n) { return SparsePoly::constant(n, 1); }

}  // namespace

TEST(QSigma, P1) {
  const Fan f = load_bundled("p1");
  EXPECT_EQ(q_sigma_poly(f), one(2) - var(2, 0) * var(2, 1));
}

TEST(QSigma, P12) {
  const Fan f = load_bundled("p12");
  const SparsePoly xp = var(3, 0), xm = var(3, 1), y = var(3, 2);
  EXPECT_EQ(q_sigma_poly(f), one(3) + y - xp * xm - xp * y);
}

TEST(QSigma, LowDegreePartOnBundledFans) {
  for (const auto& name : stackheight::testing::kBundledFans) {
    const Fan f = load_bundled(name);
    const SparsePoly q = q_sigma_poly(f);
    const std::size_t n = f.num_rays() + f.num_twisted();
    Monomial zero(n, 0);
    EXPECT_EQ(q.coefficient(zero), 1) << name;
    for (std::size_t i = 0; i < n; ++i) {
      auto m = zero;
      m[i] = 1;
      EXPECT_EQ(q.coefficient(m), i < f.num_rays() ? 0 : 1) << name << " variable " << i;
    }
  }
}

TEST(LocalTransform, Examples) {
  const Fan p1 = load_bundled("p1");
  EXPECT_NEAR(local_transform(p1, anticanonical(p1), 2), 3.0, 1e-14);
  const Fan p12 = load_bundled("p12");
  EXPECT_NEAR(local_transform(p12, anticanonical(p12), 2), 4.0, 1e-14);
  for (const auto& name : stackheight::testing::kBundledFans) {
    const Fan f = load_bundled(name);
    EXPECT_NEAR(local_transform(f, anticanonical(f), 1'000'000'007ULL), 1.0, 1e-6) << name;
  }
}

TEST(LocalTransform, DivergesOutsideLambda) {
  const Fan p12 = load_bundled("p12");
  EXPECT_THROW(local_transform(p12, RaisedVector(2, {1, 1, Rational(-1, 2)}), 2), DivergenceError);
}

TEST(Oracle, P1Radius30) {
  const Fan p1 = load_bundled("p1");
  const OracleSum o = local_transform_oracle(p1, anticanonical(p1), 2, 30);
  EXPECT_NEAR(o.partial, 3.0 - std::ldexp(1.0, -29), 1e-15);
  EXPECT_LT(o.tail, 1e-8);
  EXPECT_LE(std::fabs(o.partial - 3.0), o.tail);
}

TEST(Oracle, RadiusZeroSumsTheClassesAtTheOrigin) {
  EXPECT_DOUBLE_EQ(local_transform_oracle(load_bundled("p1"), anticanonical(load_bundled("p1")), 2, 0).partial,
                   1.0);
  const Fan mu2 = load_bundled("p1xbmu2");
  EXPECT_DOUBLE_EQ(local_transform_oracle(mu2, anticanonical(mu2), 2, 0).partial, 1.5);
}

TEST(Oracle, AgreesWithClosedForm) {
  for (const auto& name : stackheight::testing::kBundledFans) {
    const Fan f = load_bundled(name);
    const RaisedVector k = anticanonical(f);
    for (std::uint64_t p : {2, 3, 5}) {
      const auto r = oracle_radius_for(f, k, p, 1e-11);
      const OracleSum o = local_transform_oracle(f, k, p, r);
      EXPECT_LT(o.tail, 1e-11) << name;
      EXPECT_LE(std::fabs(o.partial - local_transform(f, k, p)), o.tail) << name << " p=" << p;
    }
  }
}

TEST(Gamma, P1ConvergesToSixOverPiSquared) {
  const Fan p1 = load_bundled("p1");
  const EulerProduct g = gamma_euler(p1, anticanonical(p1), 1'000'000);
  const double target = 6 / (std::numbers::pi * std::numbers::pi);
  EXPECT_NEAR(g.value, target, 1e-6);
  EXPECT_LE(std::fabs(g.value / target - 1), g.tail + 1e-12);
  EXPECT_EQ(g.decay_exponent, 2);
}

TEST(Gamma, P12ClosedFormFactor) {
  const Fan p12 = load_bundled("p12");
  const RaisedVector k = anticanonical(p12);
  EXPECT_NEAR(gamma_euler(p12, k, 2).value, 0.5, 1e-15);
  double expected = 1;
  for (double p : {2.0, 3.0, 5.0, 7.0}) expected *= 1 - 3 / (p * p) + 2 / (p * p * p);
  EXPECT_NEAR(gamma_euler(p12, k, 10).value, expected, 1e-14);
}

TEST(Gamma, BitIdenticalAcrossThreadCounts) {
  const Fan f = load_bundled("p23");
  const RaisedVector k = anticanonical(f);
  const double one = gamma_euler(f, k, 200'000, 1).value;
  EXPECT_EQ(one, gamma_euler(f, k, 200'000, 2).value);
  EXPECT_EQ(one, gamma_euler(f, k, 200'000, 8).value);
}

TEST(Gamma, InfiniteTailWhenTheProductDiverges) {
  const Fan p1 = load_bundled("p1");
  const EulerProduct g = gamma_euler(p1, RaisedVector(2, {Rational(1, 2), Rational(1, 2)}), 1000);
  EXPECT_TRUE(std::isinf(g.tail));
}

TEST(HInf, Examples) {
  const Fan p1 = load_bundled("p1");
  EXPECT_EQ(h_inf_hat_exact(p1, anticanonical(p1)), 2);
  EXPECT_EQ(h_inf_hat_exact(p1, RaisedVector(2, {2, 2})), 1);
  const Fan p12 = load_bundled("p12");
  EXPECT_EQ(h_inf_hat_exact(p12, anticanonical(p12)), 3);
  const Fan p2 = load_bundled("p2");
  EXPECT_EQ(h_inf_hat_exact(p2, anticanonical(p2)), 3);
}
