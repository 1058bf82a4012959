#include "stackheight/sparse_poly.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace stackheight {

SparsePoly SparsePoly::constant(std::size_t num_vars, const Integer& c) {
  SparsePoly p(num_vars);
  p.add_term(Monomial(num_vars, 0), c);
  return p;
}

SparsePoly SparsePoly::variable(std::size_t num_vars, std::size_t i) {
  SparsePoly p(num_vars);
  Monomial m(num_vars, 0);
  m.at(i) = 1;
  p.add_term(m, 1);
  return p;
}

Integer SparsePoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Integer(0) : it->second;
}

void SparsePoly::add_term(const Monomial& m, const Integer& c) {
  if (m.size() != vars_) throw std::invalid_argument("monomial arity mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
  if (o.vars_ != vars_) throw std::invalid_argument("polynomial arity mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) {
  if (o.vars_ != vars_) throw std::invalid_argument("polynomial arity mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
  if (a.vars_ != b.vars_) throw std::invalid_argument("polynomial arity mismatch");
  SparsePoly out(a.vars_);
  Monomial m(a.vars_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  return out;
}

double SparsePoly::evaluate(std::span<const double> x) const {
  double total = 0;
  for (const auto& [m, c] : terms_) {
    double t = c.get_d();
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) t *= std::pow(x[i], static_cast<double>(m[i]));
    total += t;
  }
  return total;
}

Rational SparsePoly::evaluate(std::span<const Rational> x) const {
  Rational total = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::uint32_t k = 0; k < m[i]; ++k) t *= x[i];
    total += t;
  }
  return total;
}

std::uint32_t SparsePoly::degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0u); }

std::string SparsePoly::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool unit = degree(m) > 0 && abs(c) == 1;
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    if (!unit || degree(m) == 0) os << Integer(abs(c)).get_str();
    bool need_star = !unit && degree(m) > 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      if (need_star) os << '*';
      os << names[i];
      if (m[i] > 1) os << '^' << m[i];
      need_star = true;
    }
  }
  return os.str();
}

}  // namespace stackheight
