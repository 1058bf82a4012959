#include "stackheight/zeta_local.hpp"

#include "stackheight/primes.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <thread>

namespace stackheight {

namespace {

// Non-constant part of a polynomial evaluated at X_i = p^{-xi_i}:
// value(p) = sum c_alpha p^{-<alpha, xi>}.
struct CompiledPoly {
  double constant = 0;
  std::vector<double> exponents;
  std::vector<double> coeffs;
  double l1 = 0;         // sum |c_alpha| over non-constant monomials
  double min_exponent = std::numeric_limits<double>::infinity();

  CompiledPoly(const SparsePoly& poly, const std::vector<Rational>& xis) {
    for (const auto& [m, c] : poly.terms()) {
      Rational e = 0;
      for (std::size_t i = 0; i < m.size(); ++i) e += xis[i] * m[i];
      if (SparsePoly::degree(m) == 0) {
        constant += c.get_d();
        continue;
      }
      exponents.push_back(e.get_d());
      coeffs.push_back(c.get_d());
      l1 += std::fabs(c.get_d());
      min_exponent = std::min(min_exponent, e.get_d());
    }
  }

  double varying(double log_p) const {
    double v = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) v += coeffs[i] * std::exp(-exponents[i] * log_p);
    return v;
  }
};

std::vector<Rational> admissible_xis(const Fan& fan, const RaisedVector& s) {
  auto xis = xi_all(fan, s);
  for (std::size_t i = 0; i < xis.size(); ++i)
    if (xis[i] <= 0)
      throw DivergenceError("local transform diverges: Xi_" + std::to_string(i) + "(s) = " + to_string(xis[i]) +
                            " is not positive");
  return xis;
}

SparsePoly one_minus(std::size_t n, std::size_t i) {
  return SparsePoly::constant(n, 1) - SparsePoly::variable(n, i);
}

bool support_within(const Sector& sec, const std::vector<std::size_t>& face) {
  for (std::size_t rho = 0; rho < sec.coords.size(); ++rho)
    if (sec.coords[rho] != 0 && !std::binary_search(face.begin(), face.end(), rho)) return false;
  return true;
}

}  // namespace

std::vector<std::string> raised_variable_names(const Fan& fan) {
  std::vector<std::string> names;
  for (const auto& r : fan.spec().rays) names.push_back("X_" + r.id);
  for (std::size_t t = 1; t <= fan.num_twisted(); ++t) names.push_back("Y" + std::to_string(t));
  return names;
}

SparsePoly r_sigma_numerator(const Fan& fan, const std::vector<std::size_t>& face) {
  const std::size_t r = fan.num_rays();
  const std::size_t n = r + fan.num_twisted();
  Monomial corner(n, 0);
  for (auto rho : face) corner[rho] = 1;
  SparsePoly num(n);
  num.add_term(corner, 1);
  for (std::size_t t = 1; t < fan.sectors().size(); ++t) {
    const Sector& sec = fan.sectors()[t];
    if (!support_within(sec, face)) continue;
    Monomial m(n, 0);
    m[r + t - 1] = 1;
    for (auto rho : face)
      if (sec.coords[rho] == 0) m[rho] = 1;
    num.add_term(m, 1);
  }
  return num;
}

SparsePoly q_sigma_poly(const Fan& fan) {
  const std::size_t r = fan.num_rays();
  const std::size_t n = r + fan.num_twisted();
  SparsePoly q(n);
  for (const auto& face : fan.faces()) {
    SparsePoly term = r_sigma_numerator(fan, face);
    for (std::size_t rho = 0; rho < r; ++rho)
      if (!std::binary_search(face.begin(), face.end(), rho)) term = term * one_minus(n, rho);
    q += term;
  }
  return q;
}

SparsePoly gamma_factor_poly(const Fan& fan) {
  const std::size_t r = fan.num_rays();
  const std::size_t n = r + fan.num_twisted();
  SparsePoly f = q_sigma_poly(fan);
  for (std::size_t i = r; i < n; ++i) f = f * one_minus(n, i);
  return f;
}

double local_transform(const Fan& fan, const RaisedVector& s, std::uint64_t p) {
  const auto xis = admissible_xis(fan, s);
  const CompiledPoly q(q_sigma_poly(fan), xis);
  const double log_p = std::log(static_cast<double>(p));
  double denom = 1;
  for (std::size_t rho = 0; rho < fan.num_rays(); ++rho) denom *= -std::expm1(-xis[rho].get_d() * log_p);
  return (q.constant + q.varying(log_p)) / denom;
}

namespace {

struct OracleGrowth {
  double alpha;    // phi(y, g) >= alpha * ||y||_inf + c_min
  double c_min;
  double classes;  // #G^D
};

OracleGrowth oracle_growth(const Fan& fan, const RaisedVector& s) {
  Rational s_min = s[0];
  std::int64_t b_max = 0;
  for (std::size_t rho = 0; rho < fan.num_rays(); ++rho) {
    s_min = std::min(s_min, s[rho]);
    for (auto v : fan.ray(rho)) b_max = std::max<std::int64_t>(b_max, std::abs(v));
  }
  Rational c_min = 0;
  for (std::size_t t = 0; t < fan.num_twisted(); ++t) c_min = std::min(c_min, s.twisted(t));
  const Rational alpha = s_min / b_max;
  // Round the bound parameters down so the float tail stays an upper bound.
  return {alpha.get_d() * (1 - 1e-12), c_min.get_d() - 1e-12 * (1 + std::fabs(c_min.get_d())),
          static_cast<double>(fan.torsion_group_order())};
}

double shell_tail(const OracleGrowth& g, std::size_t d, double log_p, std::int64_t radius) {
  auto term = [&](std::int64_t k) {
    const double shell = std::pow(2.0 * k + 1, static_cast<double>(d)) - std::pow(2.0 * k - 1, static_cast<double>(d));
    return g.classes * shell * std::exp(-(g.alpha * k + g.c_min) * log_p);
  };
  double total = 0;
  for (std::int64_t k = radius + 1;; ++k) {
    const double t = term(k);
    const double next = term(k + 1);
    const double ratio = next / t;
    // Term ratios decrease in k, so once below 1 the rest is geometric.
    if (ratio < 0.9 || t == 0) {
      total += t + (t == 0 ? 0 : next / (1 - ratio));
      return total;
    }
    total += t;
    if (k - radius > 10000000) return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

OracleSum local_transform_oracle(const Fan& fan, const RaisedVector& s, std::uint64_t p, std::int64_t radius) {
  admissible_xis(fan, s);
  const std::size_t d = fan.dim();
  const double log_p = std::log(static_cast<double>(p));
  const auto torsion = fan.torsion_elements();
  OracleSum out;
  out.radius = radius;

  double sum = 0, comp = 0;  // Neumaier summation
  auto accumulate = [&](double v) {
    const double t = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  };

  LatticePoint y(d, -radius);
  while (true) {
    const auto a = fan.barycentric(y);
    Rational base = 0;
    LatticePoint q = y;
    for (std::size_t rho = 0; rho < a.size(); ++rho) {
      if (a[rho] == 0) continue;
      base += a[rho] * s[rho];
      const auto fl = floor_of(a[rho]).get_si();
      for (std::size_t i = 0; i < d; ++i) q[i] -= fl * fan.ray(rho)[i];
    }
    for (const auto& g : torsion) {
      const std::size_t sector = fan.sector_index(q, g);
      const Rational phi_value = sector == 0 ? base : base + s.twisted(sector - 1);
      accumulate(std::exp(-phi_value.get_d() * log_p));
      ++out.terms;
    }
    std::size_t i = 0;
    while (i < d && y[i] == radius) y[i] = -radius, ++i;
    if (i == d) break;
    ++y[i];
  }
  out.partial = sum + comp;
  const double rounding = 64 * DBL_EPSILON * out.partial;
  out.tail = shell_tail(oracle_growth(fan, s), d, log_p, radius) + rounding;
  return out;
}

std::int64_t oracle_radius_for(const Fan& fan, const RaisedVector& s, std::uint64_t p, double tolerance) {
  admissible_xis(fan, s);
  const auto growth = oracle_growth(fan, s);
  const double log_p = std::log(static_cast<double>(p));
  std::int64_t r = 0;
  while (shell_tail(growth, fan.dim(), log_p, r) >= tolerance) r = r < 4 ? r + 1 : r + r / 4;
  std::int64_t lo = r / 2, hi = r;
  while (lo < hi) {
    const std::int64_t mid = (lo + hi) / 2;
    if (shell_tail(growth, fan.dim(), log_p, mid) < tolerance)
      hi = mid;
    else
      lo = mid + 1;
  }
  return hi;
}

EulerProduct gamma_euler(const Fan& fan, const RaisedVector& s, std::uint64_t prime_bound, unsigned threads) {
  const auto xis = admissible_xis(fan, s);
  const CompiledPoly f(gamma_factor_poly(fan), xis);
  const auto primes = primes_up_to(prime_bound);

  // Fixed block boundaries and an ordered reduction make the float product
  // independent of the thread count.
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (primes.size() + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 1.0);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t b = first; b < blocks; b += stride) {
      double prod = 1;
      const std::size_t end = std::min(primes.size(), (b + 1) * kBlock);
      for (std::size_t i = b * kBlock; i < end; ++i)
        prod *= f.constant + f.varying(std::log(static_cast<double>(primes[i])));
      partial[b] = prod;
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(blocks, 1))));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }

  EulerProduct out;
  out.value = 1;
  for (double v : partial) out.value *= v;
  out.prime_bound = prime_bound;
  out.primes_used = primes.size();
  out.decay_exponent = f.min_exponent;

  const double rounding = 4 * DBL_EPSILON * static_cast<double>(primes.size() + 1);
  if (f.coeffs.empty()) {
    out.tail = rounding;
    return out;
  }
  const double delta = f.min_exponent;
  const double P = static_cast<double>(std::max<std::uint64_t>(prime_bound, 1));
  if (delta <= 1 || f.l1 * std::pow(P + 1, -delta) > 0.5) {
    out.tail = std::numeric_limits<double>::infinity();
    return out;
  }
  const double t = f.l1 * std::pow(P, 1 - delta) / (delta - 1);
  out.tail = std::expm1(2 * t) + rounding;
  return out;
}

Rational h_inf_hat_exact(const Fan& fan, const RaisedVector& s) {
  check_layout(fan, s);
  for (std::size_t rho = 0; rho < fan.num_rays(); ++rho)
    if (s[rho] <= 0) throw DivergenceError("archimedean integral diverges: s_rho must be positive on rays");
  Rational total = 0;
  for (std::size_t c = 0; c < fan.num_max_cones(); ++c) {
    Rational term = abs(fan.cone_determinant(c));
    for (auto rho : fan.cone_rays(c)) term /= s[rho];
    total += term;
  }
  return total;
}

double h_inf_hat(const Fan& fan, const RaisedVector& s) { return h_inf_hat_exact(fan, s).get_d(); }

}  // namespace stackheight
