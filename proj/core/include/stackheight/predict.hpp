#pragma once

// Predicted asymptotics N_H(B) ~ C B (log B)^{b-1} over Q and empirical fits.

#include "stackheight/exact.hpp"
#include "stackheight/stacky_fan.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace stackheight {

/// Net normalization factor, fixed once against the P^1 coprime-pair density.
inline constexpr double kCalibration = 1.0;
inline constexpr const char* kNormalizationTag = "quotient Z^n/sat(M), units 2^(d+#even), 1/(b-1)!, kappa=1";

struct PredictedAsymptotics {
  int b = 0;
  Rational x_exact;
  double x_value = 0;
  double gamma = 0;
  double gamma_tail = 0;
  std::uint64_t prime_bound = 0;
  double h_inf = 0;
  std::int64_t gd_order = 1;
  int sha_order = 1;
  int b_group_order = 1;
  std::uint64_t unit_multiplicity = 1;
  double calibration = kCalibration;
  double C = 0;
  std::string normalization_tag = kNormalizationTag;
  std::string note;
};

/// Assembles b and C at s = -K_X.
PredictedAsymptotics predict(const Fan& fan, std::uint64_t prime_bound, unsigned threads = 1);

struct FitResult {
  int b = 1;
  double c_hat = 0;         // N / (B (log B)^{b-1}) at the largest B
  double exponent_hat = 0;  // slope of log(N/B) against log log B
  std::vector<double> c_trend;          // c_hat at every sample
  std::vector<double> polynomial;       // least-squares N/B = sum_k a_k (log B)^k, k < b
  double polynomial_leading = 0;        // a_{b-1}
};

/// Throws std::invalid_argument with fewer than 4 samples, non-increasing B,
/// or a span of less than two decades.
FitResult fit(std::vector<std::pair<double, double>> samples, int b);

}  // namespace stackheight
