// Randomized invariants on complete simplicial stacky fans of rank <= 3.

#include "test_support.hpp"

#include "fan_io.hpp"
#include "stackheight/counting.hpp"
#include "stackheight/geometry_cones.hpp"
#include "stackheight/predict.hpp"
#include "stackheight/zeta_local.hpp"

#include <gtest/gtest.h>

using namespace stackheight;
using stackheight::testing::random_fan;
using stackheight::testing::RandomFanOptions;

namespace {

std::vector<StackyFan> sample_fans(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<StackyFan> out;
  for (int i = 0; i < count; ++i) {
    RandomFanOptions o;
    o.dim = 1 + rng() % 3;
    out.push_back(random_fan(rng, o));
  }
  return out;
}

}  // namespace

TEST(Properties, RandomFansValidate) {
  for (const auto& spec : sample_fans(1, 60)) EXPECT_TRUE(validate(spec).ok()) << cli::fan_to_json(spec).dump();
}

TEST(Properties, QSigmaLowDegree) {
  for (const auto& spec : sample_fans(2, 40)) {
    const Fan f(spec);
    const SparsePoly q = q_sigma_poly(f);
    const std::size_t n = f.num_rays() + f.num_twisted();
    Monomial zero(n, 0);
    EXPECT_EQ(q.coefficient(zero), 1);
    for (const auto& [m, c] : q.terms())
      if (SparsePoly::degree(m) == 1) {
        const auto i = static_cast<std::size_t>(std::find(m.begin(), m.end(), 1u) - m.begin());
        EXPECT_GE(i, f.num_rays());
        EXPECT_EQ(c, 1);
      }
    for (std::size_t t = 0; t < f.num_twisted(); ++t) {
      auto m = zero;
      m[f.num_rays() + t] = 1;
      EXPECT_EQ(q.coefficient(m), 1);
    }
  }
}

TEST(Properties, AnticanonicalFormsAndShift) {
  std::mt19937_64 rng(3);
  for (const auto& spec : sample_fans(3, 40)) {
    const Fan f(spec);
    const RaisedVector k = anticanonical(f);
    for (const auto& v : xi_all(f, k)) EXPECT_EQ(v, 1);
    const RaisedVector s = stackheight::testing::random_interior(rng, f);
    for (std::size_t t = 1; t < f.sectors().size(); ++t) {
      const Sector& sec = f.sectors()[t];
      EXPECT_EQ(phi(f, s + k, sec.y, sec.g), phi(f, s, sec.y, sec.g) + 1);
    }
  }
}

TEST(Properties, SplitIsUniqueUnderConeTranslation) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::int64_t> coord(-9, 9);
  for (const auto& spec : sample_fans(4, 30)) {
    const Fan f(spec);
    for (int trial = 0; trial < 10; ++trial) {
      LatticePoint y(f.dim());
      for (auto& v : y) v = coord(rng);
      const SplitQR qr = f.split_qr(y);
      for (std::size_t j = 0; j < y.size(); ++j) EXPECT_EQ(qr.q[j] + qr.r[j], y[j]);
      EXPECT_NO_THROW(f.sector_index(qr.q, TorsionClass(f.torsion_orders().size(), 0)));
      // Adding a ray of the containing cone leaves q unchanged.
      const auto c = f.containing_cone(y);
      LatticePoint shifted = y;
      const auto& b = f.ray(f.cone_rays(c)[0]);
      for (std::size_t j = 0; j < y.size(); ++j) shifted[j] += b[j];
      EXPECT_EQ(f.split_qr(shifted).q, qr.q);
    }
  }
}

TEST(Properties, HeightDataInvariantUnderLatticeAutomorphisms) {
  std::mt19937_64 rng(5);
  for (const auto& spec : sample_fans(5, 20)) {
    const auto u = stackheight::testing::random_unimodular(rng, static_cast<std::size_t>(spec.rig_rank));
    const Fan f(spec), g(stackheight::testing::transform_fan(spec, u));
    ASSERT_EQ(f.sectors().size(), g.sectors().size());
    std::vector<Rational> ages_f, ages_g;
    for (const auto& s : f.sectors()) ages_f.push_back(s.age);
    for (const auto& s : g.sectors()) ages_g.push_back(s.age);
    std::sort(ages_f.begin(), ages_f.end());
    std::sort(ages_g.begin(), ages_g.end());
    EXPECT_EQ(ages_f, ages_g);
    EXPECT_EQ(h_inf_hat_exact(f, anticanonical(f)), h_inf_hat_exact(g, anticanonical(g)));
    EXPECT_EQ(ns_model(f, false).b, ns_model(g, false).b);
  }
}

TEST(Properties, CountInvariantUnderLatticeAutomorphisms) {
  std::mt19937_64 rng(6);
  RandomFanOptions o;
  o.dim = 2;
  o.max_subdivisions = 1;
  for (int i = 0; i < 6; ++i) {
    const StackyFan spec = random_fan(rng, o);
    const auto u = stackheight::testing::random_unimodular(rng, 2);
    const Fan f(spec), g(stackheight::testing::transform_fan(spec, u));
    EXPECT_EQ(count_points(f, anticanonical(f), 50).points, count_points(g, anticanonical(g), 50).points);
  }
}

TEST(Properties, CountMatchesNaiveOnRandomRankOneFans) {
  std::mt19937_64 rng(7);
  RandomFanOptions o;
  o.dim = 1;
  for (int i = 0; i < 10; ++i) {
    const Fan f(random_fan(rng, o));
    const RaisedVector k = anticanonical(f);
    EXPECT_EQ(count_points(f, k, 60).points, count_points_naive(f, k, 60).points);
  }
}

TEST(Properties, NormalizeRoundTripOnRandomFans) {
  for (const auto& spec : sample_fans(8, 30)) {
    const StackyFan n = cli::normalize(spec);
    EXPECT_EQ(cli::parse_fan(cli::fan_to_json(n).dump()), n);
  }
}

TEST(Properties, PoleOrderMatchesQuotientRank) {
  for (const auto& spec : sample_fans(9, 20)) {
    const Fan f(spec);
    EXPECT_EQ(ns_model(f, false).b, f.num_rays() + f.num_twisted() - f.dim());
  }
}
