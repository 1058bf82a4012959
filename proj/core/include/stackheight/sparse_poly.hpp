#pragma once

// Sparse multivariate polynomials with integer coefficients.

#include "stackheight/exact.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace stackheight {

using Monomial = std::vector<std::uint32_t>;  // dense exponent vector

class SparsePoly {
 public:
  explicit SparsePoly(std::size_t num_vars = 0) : vars_(num_vars) {}

  static SparsePoly constant(std::size_t num_vars, const Integer& c);
  static SparsePoly variable(std::size_t num_vars, std::size_t i);

  std::size_t num_vars() const { return vars_; }
  const std::map<Monomial, Integer>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Integer coefficient(const Monomial& m) const;
  void add_term(const Monomial& m, const Integer& c);

  SparsePoly& operator+=(const SparsePoly& o);
  SparsePoly& operator-=(const SparsePoly& o);
  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);
  friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

  double evaluate(std::span<const double> x) const;
  Rational evaluate(std::span<const Rational> x) const;

  static std::uint32_t degree(const Monomial& m);
  std::string to_string(std::span<const std::string> names) const;

 private:
  std::size_t vars_;
  std::map<Monomial, Integer> terms_;
};

}  // namespace stackheight
