#pragma once

// Raised vectors, the forms Xi, the cone Lambda, -K_X, the pairings phi and
// phi_inf, and heights of rational points of the stacky torus.
//
// Flat layout of a raised vector: entries [0, R) are the rays, entry R + t is
// the twisted sector sectors()[t + 1].

#include "stackheight/exact.hpp"
#include "stackheight/stacky_fan.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace stackheight {

class RaisedVector {
 public:
  RaisedVector() = default;
  RaisedVector(std::size_t rays, std::size_t twisted, const Rational& fill = Rational(0))
      : rays_(rays), entries_(rays + twisted, fill) {}
  RaisedVector(std::size_t rays, std::vector<Rational> entries)
      : rays_(rays), entries_(std::move(entries)) {}

  std::size_t num_rays() const { return rays_; }
  std::size_t num_twisted() const { return entries_.size() - rays_; }
  std::size_t size() const { return entries_.size(); }

  Rational& operator[](std::size_t i) { return entries_[i]; }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  Rational& ray(std::size_t i) { return entries_[i]; }
  const Rational& ray(std::size_t i) const { return entries_[i]; }
  Rational& twisted(std::size_t t) { return entries_[rays_ + t]; }
  const Rational& twisted(std::size_t t) const { return entries_[rays_ + t]; }
  const std::vector<Rational>& entries() const { return entries_; }

  RaisedVector& operator+=(const RaisedVector& o);
  RaisedVector& operator-=(const RaisedVector& o);
  RaisedVector& operator*=(const Rational& t);
  friend RaisedVector operator+(RaisedVector a, const RaisedVector& b) { return a += b; }
  friend RaisedVector operator-(RaisedVector a, const RaisedVector& b) { return a -= b; }
  friend RaisedVector operator*(const Rational& t, RaisedVector a) { return a *= t; }
  friend bool operator==(const RaisedVector&, const RaisedVector&) = default;

 private:
  std::size_t rays_ = 0;
  std::vector<Rational> entries_;
};

/// Checks the layout against the fan; throws std::invalid_argument otherwise.
void check_layout(const Fan& fan, const RaisedVector& s);

/// Xi_rho(s) = s_rho; Xi_Y(s) = s_Y + sum a_rho(Y) s_rho.
Rational xi(const Fan& fan, std::size_t flat_index, const RaisedVector& s);
std::vector<Rational> xi_all(const Fan& fan, const RaisedVector& s);

/// Matrix whose row i is the form Xi_i in the standard coordinates.
RationalMatrix xi_matrix(const Fan& fan);

RaisedVector anticanonical(const Fan& fan);

/// Image of m in Hom(N^rig, Z): (<b_rho, m>)_rho and 0 on sectors.
RaisedVector embed_character(const Fan& fan, const LatticePoint& m);

bool lambda_contains(const Fan& fan, const RaisedVector& s, bool interior);

/// phi_s(y, g) = s_{q(y,g)} [twisted] + sum a_rho(y) s_rho.
Rational phi(const Fan& fan, const RaisedVector& s, const LatticePoint& y, const TorsionClass& g);

/// The Sigma-piecewise-linear function with value s_rho at b_rho.
double phi_inf(const Fan& fan, std::span<const double> s_rays, std::span<const double> x);
double phi_inf(const Fan& fan, const RaisedVector& s, std::span<const double> x);

struct TorusPointQ {
  std::vector<Rational> x;  // d nonzero torus coordinates
  std::vector<Rational> g;  // k nonzero class representatives
};

/// A real number sum_b c_b log b with positive integer bases and rational
/// coefficients, compared exactly.
class LogCombination {
 public:
  void add(const Integer& base, const Rational& coeff);
  void add(const LogCombination& other, const Rational& scale = Rational(1));
  const std::map<Integer, Rational>& terms() const { return terms_; }
  double approx() const;
  /// Exact sign: -1, 0 or 1.
  int sign() const;

 private:
  std::map<Integer, Rational> terms_;
};

struct LocalHeight {
  Integer prime;
  Rational exponent;  // H_p = prime^exponent
  double value = 1.0;
};

LocalHeight local_height_finite(const Fan& fan, const RaisedVector& s, const Integer& p,
                                const TorusPointQ& point);

/// Valuation data of a torus point at one prime.
struct PrimeValuation {
  Integer p;
  LatticePoint y;
  TorsionClass g;
};

/// log H from valuation data, exact. The archimedean cone is located by exact
/// sign tests on combinations of log p.
LogCombination log_height_from_valuations(const Fan& fan, const RaisedVector& s,
                                          const std::vector<PrimeValuation>& data);

/// log H as an exact combination of log p.
LogCombination log_global_height(const Fan& fan, const RaisedVector& s, const TorusPointQ& point);
double global_height(const Fan& fan, const RaisedVector& s, const TorusPointQ& point);

/// H(s, point) <= bound, decided exactly. bound must be positive.
bool height_at_most(const Fan& fan, const RaisedVector& s, const TorusPointQ& point, const Rational& bound);

/// Prime factorization of a positive integer by trial division.
std::vector<std::pair<Integer, long>> factor(const Integer& n);

/// p-adic valuation of a nonzero rational.
long valuation(const Rational& q, const Integer& p);

}  // namespace stackheight
