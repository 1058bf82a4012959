#include "stackheight/predict.hpp"

#include "stackheight/geometry_cones.hpp"
#include "stackheight/raised_heights.hpp"
#include "stackheight/zeta_local.hpp"

#include <cmath>
#include <stdexcept>

namespace stackheight {

PredictedAsymptotics predict(const Fan& fan, std::uint64_t prime_bound, unsigned threads) {
  const RaisedVector k = anticanonical(fan);
  const QuotientConeModel model = ns_model(fan);
  const XFunctionReport x = x_function_quotient(model, k);
  const EulerProduct gamma = gamma_euler(fan, k, prime_bound, threads);

  PredictedAsymptotics out;
  out.b = static_cast<int>(model.b);
  out.x_exact = x.exact;
  out.x_value = x.value;
  out.gamma = gamma.value;
  out.gamma_tail = gamma.tail;
  out.prime_bound = prime_bound;
  out.h_inf = h_inf_hat(fan, k);
  out.gd_order = fan.torsion_group_order();
  out.unit_multiplicity = std::uint64_t{1} << (fan.dim() + fan.num_even_torsion());
  double factorial = 1;
  for (int i = 2; i < out.b; ++i) factorial *= i;
  out.C = out.calibration * static_cast<double>(out.unit_multiplicity) * out.x_value * out.gamma * out.h_inf *
          out.sha_order * out.b_group_order / factorial;
  out.note =
      "over Q: Sha = 1, Dedekind residue = 1 and the unramified character groups are trivial (narrow class "
      "number 1), so #B = 1; units {+-1} give the multiplicity 2^(d + #even l_i)";
  return out;
}

namespace {

// Least squares for y ~ sum_k a_k x^k, k < degree, by normal equations.
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  const std::size_t n = static_cast<std::size_t>(degree);
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t s = 0; s < x.size(); ++s) {
    std::vector<double> pw(n);
    for (std::size_t k = 0; k < n; ++k) pw[k] = std::pow(x[s], static_cast<double>(k));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a[i][j] += pw[i] * pw[j];
      a[i][n] += pw[i] * y[s];
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    if (a[c][c] == 0) throw std::invalid_argument("singular polynomial fit");
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> coef(n);
  for (std::size_t i = 0; i < n; ++i) coef[i] = a[i][n] / a[i][i];
  return coef;
}

}  // namespace

FitResult fit(std::vector<std::pair<double, double>> samples, int b) {
  if (b < 1) throw std::invalid_argument("fit: b must be positive");
  if (samples.size() < 4) throw std::invalid_argument("fit: insufficient data (need at least 4 samples)");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].first <= std::exp(1.0) || samples[i].second <= 0)
      throw std::invalid_argument("fit: samples need B > e and N > 0");
    if (i && samples[i].first <= samples[i - 1].first) throw std::invalid_argument("fit: B must increase");
  }
  if (samples.back().first / samples.front().first < 100)
    throw std::invalid_argument("fit: insufficient data (B must span at least two decades)");

  FitResult out;
  out.b = b;
  std::vector<double> lx, ly, logs, ratios;
  for (const auto& [B, N] : samples) {
    const double L = std::log(B);
    lx.push_back(std::log(L));
    ly.push_back(std::log(N / B));
    logs.push_back(L);
    ratios.push_back(N / B);
    out.c_trend.push_back(N / (B * std::pow(L, b - 1)));
  }
  const double n = static_cast<double>(samples.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i] / n, my += ly[i] / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  out.exponent_hat = sxy / sxx;
  out.c_hat = out.c_trend.back();
  if (static_cast<std::size_t>(b) <= samples.size()) {
    out.polynomial = polyfit(logs, ratios, b);
    out.polynomial_leading = out.polynomial.back();
  }
  return out;
}

}  // namespace stackheight
