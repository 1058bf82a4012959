#include "test_support.hpp"

#include "fan_io.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <nlohmann/json.hpp>

using namespace stackheight;
using stackheight::testing::load_bundled;
using stackheight::testing::load_bundled_spec;

TEST(Validate, P1PassesEveryCheck) {
  const ValidationReport r = validate(load_bundled_spec("p1"));
  EXPECT_TRUE(r.ok());
  for (const char* check : {"well_formed", "spans", "simplicial", "complete", "proper_intersections"}) {
    ASSERT_NE(r.find(check), nullptr) << check;
    EXPECT_TRUE(r.find(check)->passed) << check;
  }
}

TEST(Validate, HalfLineIsIncompleteWithWitness) {
  const ValidationReport r = validate(load_bundled_spec("incomplete"));
  EXPECT_FALSE(r.ok());
  const Diagnostic* c = r.find("complete");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
  EXPECT_EQ(c->witness, (std::vector<Rational>{-1}));
  EXPECT_THROW(Fan(load_bundled_spec("incomplete")), InvalidFan);
}

TEST(Validate, ThreeRaysInRankTwoAreNotSimplicial) {
  StackyFan f;
  f.rig_rank = 2;
  f.rays = {{"a", {1, 0}, {}}, {"b", {0, 1}, {}}, {"c", {1, 1}, {}}};
  f.max_cones = {{0, 1, 2}};
  const ValidationReport r = validate(f);
  ASSERT_NE(r.find("simplicial"), nullptr);
  EXPECT_FALSE(r.find("simplicial")->passed);
}

TEST(Validate, OverlappingConesAreRejected) {
  StackyFan f;
  f.rig_rank = 2;
  f.rays = {{"a", {1, 0}, {}}, {"b", {0, 1}, {}}, {"c", {-1, -1}, {}}, {"d", {1, 1}, {}}};
  f.max_cones = {{0, 1}, {1, 2}, {2, 0}, {0, 3}};
  EXPECT_FALSE(validate(f).ok());
}

TEST(Validate, MalformedInputNeverThrows) {
  StackyFan f;
  f.rig_rank = 1;
  f.rays = {{"a", {1, 0}, {}}};
  f.max_cones = {{0, 5}};
  EXPECT_NO_THROW({
    const auto r = validate(f);
    EXPECT_FALSE(r.ok());
  });
  StackyFan zero;
  zero.rig_rank = 1;
  zero.rays = {{"a", {0}, {}}, {"b", {1}, {}}};
  zero.max_cones = {{0}, {1}};
  EXPECT_FALSE(validate(zero).ok());
}

TEST(ConeCoordinates, Examples) {
  const Fan p12 = load_bundled("p12");
  EXPECT_EQ(p12.barycentric(LatticePoint{5}), (std::vector<Rational>{5, 0}));
  EXPECT_EQ(p12.barycentric(LatticePoint{-3}), (std::vector<Rational>{0, Rational(3, 2)}));
  const Fan p2 = load_bundled("p2");
  // rays e1, e2, -e1-e2
  EXPECT_EQ(p2.barycentric(LatticePoint{-1, -2}), (std::vector<Rational>{1, 0, 2}));
}

TEST(SplitQR, Examples) {
  const Fan p12 = load_bundled("p12");
  EXPECT_EQ(p12.split_qr({-3}).q, LatticePoint{-1});
  EXPECT_EQ(p12.split_qr({-3}).r, LatticePoint{-2});
  EXPECT_EQ(p12.split_qr({0}).q, LatticePoint{0});
  EXPECT_EQ(p12.split_qr({0}).r, LatticePoint{0});
  EXPECT_EQ(p12.split_qr({4}).q, LatticePoint{0});
  EXPECT_EQ(p12.split_qr({4}).r, LatticePoint{4});
}

TEST(Sectors, P1HasOnlyTheUntwistedSector) {
  const Fan f = load_bundled("p1");
  ASSERT_EQ(f.sectors().size(), 1u);
  EXPECT_TRUE(f.sectors()[0].untwisted);
}

TEST(Sectors, P12) {
  const Fan f = load_bundled("p12");
  ASSERT_EQ(f.sectors().size(), 2u);
  EXPECT_TRUE(f.sectors()[0].untwisted);
  EXPECT_EQ(f.sectors()[1].y, LatticePoint{-1});
  EXPECT_EQ(f.sectors()[1].age, Rational(1, 2));
}

TEST(Sectors, P1xBmu2) {
  const Fan f = load_bundled("p1xbmu2");
  ASSERT_EQ(f.sectors().size(), 2u);
  EXPECT_EQ(f.sectors()[1].y, LatticePoint{0});
  EXPECT_EQ(f.sectors()[1].g, TorsionClass{1});
  EXPECT_EQ(f.sectors()[1].age, 0);
  EXPECT_FALSE(f.sectors()[1].untwisted);
}

TEST(Sectors, MatchSidecarFiles) {
  for (const auto& name : stackheight::testing::kBundledFans) {
    std::ifstream in(std::string(STACKHEIGHT_FANS_DIR) + "/" + name + ".sectors.json");
    ASSERT_TRUE(in) << name;
    const auto doc = nlohmann::json::parse(in);
    const Fan f = load_bundled(name);
    ASSERT_EQ(f.sectors().size(), doc["sectors"].size()) << name;
    for (std::size_t i = 0; i < f.sectors().size(); ++i) {
      const auto& e = doc["sectors"][i];
      EXPECT_EQ(f.sectors()[i].y, e["y"].get<LatticePoint>()) << name << " " << i;
      EXPECT_EQ(f.sectors()[i].g, e["g"].get<TorsionClass>()) << name << " " << i;
      EXPECT_EQ(f.sectors()[i].age, parse_rational(e["age"].get<std::string>())) << name << " " << i;
      EXPECT_EQ(f.sectors()[i].untwisted, e["untwisted"].get<bool>()) << name << " " << i;
    }
    const RaisedVector k = anticanonical(f);
    ASSERT_EQ(k.size(), doc["anticanonical"].size()) << name;
    for (std::size_t i = 0; i < k.size(); ++i)
      EXPECT_EQ(k[i], parse_rational(doc["anticanonical"][i].get<std::string>())) << name << " " << i;
  }
}

TEST(Sectors, P23HasThreeTwistedSectors) {
  const Fan f = load_bundled("p23");
  EXPECT_EQ(f.num_twisted(), 3u);
  EXPECT_EQ(f.box_rig_size(), 4u);
}

TEST(ResidueMap, Examples) {
  const Fan p12 = load_bundled("p12");
  EXPECT_EQ(p12.sector_of_valuation({-3}, {}), 1u);
  EXPECT_EQ(p12.sector_of_valuation({0}, {}), 0u);
  EXPECT_EQ(p12.sector_of_valuation({4}, {}), 0u);
  const Fan mu2 = load_bundled("p1xbmu2");
  EXPECT_EQ(mu2.sector_of_valuation({1}, {1}), 1u);
  EXPECT_EQ(mu2.sector_of_valuation({0}, {3}), 1u);
  EXPECT_EQ(mu2.sector_of_valuation({0}, {0}), 0u);
  EXPECT_THROW(p12.sector_index({5}, {}), std::out_of_range);
}

TEST(ContainingCone, DoubleAndExactAgree) {
  const Fan p2 = load_bundled("p2");
  const std::vector<double> x = {-0.5, -2.0};
  const std::size_t c = p2.containing_cone(std::span<const double>(x));
  const std::vector<Rational> xq = {Rational(-1, 2), Rational(-2)};
  EXPECT_EQ(c, p2.containing_cone(std::span<const Rational>(xq)));
}

TEST(Torsion, ElementsAndOrders) {
  const Fan mu2 = load_bundled("p1xbmu2");
  EXPECT_EQ(mu2.torsion_group_order(), 2);
  EXPECT_EQ(mu2.num_even_torsion(), 1u);
  EXPECT_EQ(mu2.torsion_elements().size(), 2u);
}
