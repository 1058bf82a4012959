#include "stackheight/raised_heights.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace stackheight {

RaisedVector& RaisedVector::operator+=(const RaisedVector& o) {
  if (o.rays_ != rays_ || o.size() != size()) throw std::invalid_argument("raised vector layout mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
  return *this;
}

RaisedVector& RaisedVector::operator-=(const RaisedVector& o) {
  if (o.rays_ != rays_ || o.size() != size()) throw std::invalid_argument("raised vector layout mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
  return *this;
}

RaisedVector& RaisedVector::operator*=(const Rational& t) {
  for (auto& e : entries_) e *= t;
  return *this;
}

void check_layout(const Fan& fan, const RaisedVector& s) {
  if (s.num_rays() != fan.num_rays() || s.num_twisted() != fan.num_twisted())
    throw std::invalid_argument("raised vector expects " + std::to_string(fan.num_rays()) + " ray and " +
                                std::to_string(fan.num_twisted()) + " sector entries");
}

Rational xi(const Fan& fan, std::size_t flat_index, const RaisedVector& s) {
  check_layout(fan, s);
  const std::size_t r = fan.num_rays();
  if (flat_index < r) return s[flat_index];
  if (flat_index >= s.size()) throw std::out_of_range("raised index out of range");
  const Sector& sec = fan.sectors()[flat_index - r + 1];
  Rational v = s[flat_index];
  for (std::size_t rho = 0; rho < r; ++rho) v += sec.coords[rho] * s[rho];
  return v;
}

std::vector<Rational> xi_all(const Fan& fan, const RaisedVector& s) {
  std::vector<Rational> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = xi(fan, i, s);
  return out;
}

RationalMatrix xi_matrix(const Fan& fan) {
  const std::size_t r = fan.num_rays();
  const std::size_t n = r + fan.num_twisted();
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < r; ++i) m(i, i) = 1;
  for (std::size_t t = 0; t < fan.num_twisted(); ++t) {
    const Sector& sec = fan.sectors()[t + 1];
    m(r + t, r + t) = 1;
    for (std::size_t rho = 0; rho < r; ++rho) m(r + t, rho) = sec.coords[rho];
  }
  return m;
}

RaisedVector anticanonical(const Fan& fan) {
  RaisedVector k(fan.num_rays(), fan.num_twisted(), Rational(1));
  for (std::size_t t = 0; t < fan.num_twisted(); ++t) k.twisted(t) = 1 - fan.sectors()[t + 1].age;
  return k;
}

RaisedVector embed_character(const Fan& fan, const LatticePoint& m) {
  if (m.size() != fan.dim()) throw std::invalid_argument("character has wrong dimension");
  RaisedVector v(fan.num_rays(), fan.num_twisted());
  for (std::size_t rho = 0; rho < fan.num_rays(); ++rho) {
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < m.size(); ++i) acc += fan.ray(rho)[i] * m[i];
    v.ray(rho) = acc;
  }
  return v;
}

bool lambda_contains(const Fan& fan, const RaisedVector& s, bool interior) {
  for (const auto& v : xi_all(fan, s))
    if (interior ? v <= 0 : v < 0) return false;
  return true;
}

Rational phi(const Fan& fan, const RaisedVector& s, const LatticePoint& y, const TorsionClass& g) {
  check_layout(fan, s);
  const auto a = fan.barycentric(y);
  Rational v = 0;
  for (std::size_t rho = 0; rho < a.size(); ++rho) v += a[rho] * s[rho];
  const std::size_t sector = fan.sector_of_valuation(y, g);
  if (sector != 0) v += s.twisted(sector - 1);
  return v;
}

double phi_inf(const Fan& fan, std::span<const double> s_rays, std::span<const double> x) {
  const std::size_t c = fan.containing_cone(x);
  std::vector<double> coords(fan.dim());
  fan.cone_coordinates(c, x, coords);
  const auto& rays = fan.cone_rays(c);
  double v = 0;
  for (std::size_t j = 0; j < rays.size(); ++j) v += s_rays[rays[j]] * coords[j];
  return v;
}

double phi_inf(const Fan& fan, const RaisedVector& s, std::span<const double> x) {
  std::vector<double> sr(fan.num_rays());
  for (std::size_t i = 0; i < sr.size(); ++i) sr[i] = s[i].get_d();
  return phi_inf(fan, sr, x);
}

void LogCombination::add(const Integer& base, const Rational& coeff) {
  if (base <= 0) throw std::invalid_argument("log of a non-positive base");
  if (base == 1 || coeff == 0) return;
  auto& c = terms_[base];
  c += coeff;
  if (c == 0) terms_.erase(base);
}

void LogCombination::add(const LogCombination& other, const Rational& scale) {
  for (const auto& [b, c] : other.terms_) add(b, c * scale);
}

double LogCombination::approx() const {
  double v = 0;
  for (const auto& [b, c] : terms_) {
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, b.get_mpz_t());
    v += c.get_d() * (std::log(mant) + static_cast<double>(exp2) * std::log(2.0));
  }
  return v;
}

int LogCombination::sign() const {
  if (terms_.empty()) return 0;
  double v = 0, scale = 0;
  for (const auto& [b, c] : terms_) {
    const double t = c.get_d() * std::log(b.get_d());
    v += t;
    scale += std::fabs(t);
  }
  if (std::fabs(v) > 1e-9 * scale) return v > 0 ? 1 : -1;
  std::vector<Rational> coeffs;
  for (const auto& [b, c] : terms_) coeffs.push_back(c);
  const Integer den = common_denominator(coeffs);
  Integer pos = 1, neg = 1;
  for (const auto& [b, c] : terms_) {
    const Rational e = c * den;
    Integer power;
    mpz_pow_ui(power.get_mpz_t(), b.get_mpz_t(), mpz_get_ui(Integer(abs(e.get_num())).get_mpz_t()));
    (e > 0 ? pos : neg) *= power;
  }
  return cmp(pos, neg) > 0 ? 1 : (cmp(pos, neg) < 0 ? -1 : 0);
}

std::vector<std::pair<Integer, long>> factor(const Integer& n) {
  if (n <= 0) throw std::invalid_argument("factor expects a positive integer");
  std::vector<std::pair<Integer, long>> out;
  Integer m = n;
  auto strip = [&](const Integer& p) {
    long e = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
      m /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  };
  strip(2);
  for (Integer p = 3; p * p <= m; p += 2) strip(p);
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

long valuation(const Rational& q, const Integer& p) {
  if (q == 0) throw std::invalid_argument("valuation of zero");
  long v = 0;
  Integer num = q.get_num(), den = q.get_den();
  while (mpz_divisible_p(num.get_mpz_t(), p.get_mpz_t())) num /= p, ++v;
  while (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t())) den /= p, --v;
  return v;
}

namespace {

void check_point(const Fan& fan, const TorusPointQ& point) {
  if (point.x.size() != fan.dim() || point.g.size() != fan.torsion_orders().size())
    throw std::invalid_argument("torus point has wrong shape");
  for (const auto& v : point.x)
    if (v == 0) throw std::invalid_argument("torus coordinates must be nonzero");
  for (const auto& v : point.g)
    if (v == 0) throw std::invalid_argument("class representatives must be nonzero");
}

std::set<Integer> support(const TorusPointQ& point) {
  std::set<Integer> primes;
  auto collect = [&](const Rational& q) {
    for (const auto& [p, e] : factor(abs(q.get_num()))) primes.insert(p);
    for (const auto& [p, e] : factor(q.get_den())) primes.insert(p);
  };
  for (const auto& v : point.x) collect(v);
  for (const auto& v : point.g) collect(v);
  return primes;
}

struct Valuations {
  LatticePoint y;
  TorsionClass g;
};

Valuations valuations_at(const Fan& fan, const Integer& p, const TorusPointQ& point) {
  Valuations v{LatticePoint(fan.dim()), TorsionClass(point.g.size())};
  for (std::size_t j = 0; j < point.x.size(); ++j) v.y[j] = valuation(point.x[j], p);
  for (std::size_t i = 0; i < point.g.size(); ++i) {
    const auto l = fan.torsion_orders()[i];
    v.g[i] = ((valuation(point.g[i], p) % l) + l) % l;
  }
  return v;
}

}  // namespace

LocalHeight local_height_finite(const Fan& fan, const RaisedVector& s, const Integer& p,
                                const TorusPointQ& point) {
  check_point(fan, point);
  const auto v = valuations_at(fan, p, point);
  LocalHeight h{p, phi(fan, s, v.y, v.g), 1.0};
  h.value = std::pow(p.get_d(), h.exponent.get_d());
  return h;
}

LogCombination log_height_from_valuations(const Fan& fan, const RaisedVector& s,
                                          const std::vector<PrimeValuation>& data) {
  check_layout(fan, s);
  const std::size_t d = fan.dim();
  LogCombination total;
  for (const auto& v : data) total.add(v.p, phi(fan, s, v.y, v.g));

  // log|x| = sum_p y_p log p; locate its cone by exact sign tests.
  for (std::size_t c = 0; c < fan.num_max_cones(); ++c) {
    const auto& inv = fan.cone_inverse(c);
    std::vector<LogCombination> coords(d);
    for (const auto& v : data)
      for (std::size_t i = 0; i < d; ++i) {
        Rational a = 0;
        for (std::size_t j = 0; j < d; ++j) a += inv(i, j) * v.y[j];
        coords[i].add(v.p, a);
      }
    if (std::all_of(coords.begin(), coords.end(), [](const LogCombination& l) { return l.sign() >= 0; })) {
      const auto& rays = fan.cone_rays(c);
      for (std::size_t i = 0; i < d; ++i) total.add(coords[i], s[rays[i]]);
      return total;
    }
  }
  throw std::logic_error("no maximal cone contains log|x|");
}

LogCombination log_global_height(const Fan& fan, const RaisedVector& s, const TorusPointQ& point) {
  check_point(fan, point);
  std::vector<PrimeValuation> data;
  for (const auto& p : support(point)) {
    auto v = valuations_at(fan, p, point);
    data.push_back({p, std::move(v.y), std::move(v.g)});
  }
  return log_height_from_valuations(fan, s, data);
}

double global_height(const Fan& fan, const RaisedVector& s, const TorusPointQ& point) {
  return std::exp(log_global_height(fan, s, point).approx());
}

bool height_at_most(const Fan& fan, const RaisedVector& s, const TorusPointQ& point, const Rational& bound) {
  if (bound <= 0) return false;
  LogCombination diff = log_global_height(fan, s, point);
  diff.add(bound.get_num(), Rational(-1));
  diff.add(bound.get_den(), Rational(1));
  return diff.sign() <= 0;
}

}  // namespace stackheight
