#include "stackheight/exact.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace stackheight {

RationalMatrix to_rational(const IntegerMatrix& a) {
  RationalMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = Rational(a(i, j));
  return r;
}

IntegerMatrix from_int64(std::size_t rows, std::size_t cols, std::span<const std::int64_t> values) {
  if (values.size() != rows * cols) throw std::invalid_argument("from_int64: size mismatch");
  IntegerMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Integer(static_cast<long>(values[i * cols + j]));
  return m;
}

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}
template IntegerMatrix multiply(const IntegerMatrix&, const IntegerMatrix&);
template RationalMatrix multiply(const RationalMatrix&, const RationalMatrix&);

std::vector<Rational> multiply(const RationalMatrix& a, std::span<const Rational> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("multiply: dimension mismatch");
  std::vector<Rational> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& m, std::size_t pivot_cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_cols && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    const Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::optional<std::vector<Rational>> solve_exact(const RationalMatrix& a, std::span<const Rational> b) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve_exact: rhs length does not match rows");
  RationalMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const auto pivots = rref(aug, a.cols());
  for (std::size_t i = pivots.size(); i < aug.rows(); ++i)
    if (aug(i, a.cols()) != 0) return std::nullopt;
  std::vector<Rational> x(a.cols());
  for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug(k, a.cols());
  return x;
}

std::size_t rank(const RationalMatrix& a) {
  RationalMatrix m = a;
  return rref(m, m.cols()).size();
}

Rational determinant(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: matrix not square");
  RationalMatrix m = a;
  Rational det = 1;
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      m.swap_rows(p, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      const Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix not square");
  const std::size_t n = a.rows();
  RationalMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  if (rref(aug, n).size() != n) return std::nullopt;
  RationalMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

namespace {

// rows (r, i) <- (s*r + t*i, -(b/g)*r + (a/g)*i), determinant one.
void combine_rows(IntegerMatrix& m, std::size_t r, std::size_t i, const Integer& s, const Integer& t,
                  const Integer& bg, const Integer& ag) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Integer x = m(r, j);
    Integer y = m(i, j);
    m(r, j) = s * x + t * y;
    m(i, j) = ag * y - bg * x;
  }
}

void subtract_multiple(IntegerMatrix& m, std::size_t target, std::size_t source, const Integer& q) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(target, j) -= q * m(source, j);
}

void negate_row(IntegerMatrix& m, std::size_t r) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
}

IntegerMatrix leading_rows(const IntegerMatrix& m, std::size_t first, std::size_t count) {
  IntegerMatrix out(count, m.cols());
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(first + i, j);
  return out;
}

}  // namespace

HermiteForm hermite_normal_form(const IntegerMatrix& a) {
  HermiteForm hf{a, IntegerMatrix::identity(a.rows()), 0};
  IntegerMatrix& h = hf.form;
  IntegerMatrix& u = hf.transform;
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    for (std::size_t i = r + 1; i < h.rows(); ++i) {
      if (h(i, c) == 0) continue;
      if (h(r, c) == 0) {
        h.swap_rows(r, i);
        u.swap_rows(r, i);
        continue;
      }
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h(r, c).get_mpz_t(), h(i, c).get_mpz_t());
      const Integer ag = h(r, c) / g;
      const Integer bg = h(i, c) / g;
      combine_rows(h, r, i, s, t, bg, ag);
      combine_rows(u, r, i, s, t, bg, ag);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      negate_row(h, r);
      negate_row(u, r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
      if (q == 0) continue;
      subtract_multiple(h, i, r, q);
      subtract_multiple(u, i, r, q);
    }
    ++r;
  }
  hf.rank = r;
  return hf;
}

IntegerMatrix integer_kernel(const IntegerMatrix& a) {
  const std::size_t n = a.cols();
  if (a.rows() == 0) return IntegerMatrix::identity(n);
  const HermiteForm hf = hermite_normal_form(a.transposed());
  IntegerMatrix basis = leading_rows(hf.transform, hf.rank, n - hf.rank);
  if (basis.rows() == 0) return IntegerMatrix(0, n);
  const HermiteForm canon = hermite_normal_form(basis);
  return leading_rows(canon.form, 0, canon.rank);
}

IntegerMatrix saturation(const IntegerMatrix& a) {
  const IntegerMatrix k = integer_kernel(a);
  IntegerMatrix sat = integer_kernel(k);
  return sat;
}

KernelAndSaturation kernel_and_saturation(const IntegerMatrix& a) {
  return {integer_kernel(a), saturation(a)};
}

namespace {

bool is_diagonal(const IntegerMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != 0) return false;
  return true;
}

}  // namespace

std::vector<Integer> smith_invariants(const IntegerMatrix& a) {
  IntegerMatrix m = a;
  for (;;) {
    HermiteForm hf = hermite_normal_form(m);
    m = leading_rows(hf.form, 0, hf.rank);
    if (is_diagonal(m)) break;
    hf = hermite_normal_form(m.transposed());
    m = leading_rows(hf.form, 0, hf.rank);
    if (is_diagonal(m)) break;
  }
  std::vector<Integer> d;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
    if (m(i, i) != 0) d.push_back(abs(m(i, i)));
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      Integer g = gcd(d[i], d[j]);
      Integer l = lcm(d[i], d[j]);
      d[i] = g;
      d[j] = l;
    }
  return d;
}

Integer common_denominator(std::span<const Rational> values) {
  Integer l = 1;
  for (const auto& q : values) l = lcm(l, q.get_den());
  return l;
}

Integer floor_of(const Rational& q) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f;
}

Rational frac_of(const Rational& q) { return q - Rational(floor_of(q)); }

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational q;
    try {
      q = Rational(Integer(s.substr(0, slash), 10), Integer(s.substr(slash + 1), 10));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("malformed rational literal: " + text);
    }
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    q.canonicalize();
    return q;
  }
  // decimal with optional exponent, parsed exactly
  long exponent = 0;
  std::string mantissa = s;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mantissa = s.substr(0, e);
    try {
      exponent = std::stol(s.substr(e + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed exponent: " + text);
    }
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.erase(0, 1);
  }
  std::string digits;
  long scale = 0;
  bool seen_point = false;
  for (char ch : mantissa) {
    if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (seen_point) ++scale;
    } else {
      throw std::invalid_argument("malformed number: " + text);
    }
  }
  if (digits.empty()) throw std::invalid_argument("malformed number: " + text);
  Integer num(digits, 10);
  if (negative) num = -num;
  const long shift = exponent - scale;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  q.canonicalize();
  return q;
}

}  // namespace stackheight
