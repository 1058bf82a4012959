#include "test_support.hpp"

#include "stackheight/predict.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace stackheight;
using stackheight::testing::load_bundled;

TEST(Predict, PoleOrders) {
  EXPECT_EQ(predict(load_bundled("p1"), 1000).b, 1);
  EXPECT_EQ(predict(load_bundled("p12"), 1000).b, 2);
  EXPECT_EQ(predict(load_bundled("p23"), 1000).b, 4);
  EXPECT_EQ(predict(load_bundled("p2"), 1000).b, 1);
  EXPECT_EQ(predict(load_bundled("p1xbmu2"), 1000).b, 2);
}

TEST(Predict, PoleOrderIsRaysPlusSectorsMinusRank) {
  for (const auto& name : stackheight::testing::kBundledFans) {
    const Fan f = load_bundled(name);
    EXPECT_EQ(static_cast<std::size_t>(predict(f, 100).b), f.num_rays() + f.num_twisted() - f.dim()) << name;
  }
}

TEST(Predict, ClosedFormConstants) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  EXPECT_NEAR(predict(load_bundled("p1"), 1'000'000).C, 12 / pi2, 1e-6);
  EXPECT_NEAR(predict(load_bundled("p1xbmu2"), 1'000'000).C, 144 / (pi2 * pi2), 1e-5);
}

TEST(Predict, ConstantIsPositive) {
  for (const auto& name : stackheight::testing::kBundledFans) EXPECT_GT(predict(load_bundled(name), 1000).C, 0);
}

TEST(Fit, ExactLinearGrowth) {
  std::vector<std::pair<double, double>> s;
  for (double b : {1e2, 1e3, 1e4, 1e5}) s.emplace_back(b, 2 * b);
  const FitResult r = fit(s, 1);
  EXPECT_NEAR(r.exponent_hat, 0, 1e-12);
  EXPECT_NEAR(r.c_hat, 2, 1e-12);
}

TEST(Fit, RecoversLogPower) {
  std::vector<std::pair<double, double>> s;
  for (double b : {1e3, 1e4, 1e5, 1e6}) s.emplace_back(b, 0.5 * b * std::log(b));
  const FitResult r = fit(s, 2);
  EXPECT_NEAR(r.exponent_hat, 1, 1e-12);
  EXPECT_NEAR(r.c_hat, 0.5, 1e-12);
  EXPECT_NEAR(r.polynomial_leading, 0.5, 1e-9);
}

TEST(Fit, InsufficientData) {
  std::vector<std::pair<double, double>> three = {{1e2, 1}, {1e3, 2}, {1e4, 3}};
  EXPECT_THROW(fit(three, 1), std::invalid_argument);
  std::vector<std::pair<double, double>> narrow = {{10, 1}, {20, 2}, {40, 3}, {80, 4}};
  EXPECT_THROW(fit(narrow, 1), std::invalid_argument);
  std::vector<std::pair<double, double>> unsorted = {{1e2, 1}, {1e4, 2}, {1e3, 3}, {1e5, 4}};
  EXPECT_THROW(fit(unsorted, 1), std::invalid_argument);
}
