#pragma once

// Exact integer/rational linear algebra over GMP.
//
// Every combinatorial layer of the library (barycentric coordinates, Box
// enumeration, cone duality, lattice saturation) runs on these types; floats
// only appear in the analytic modules.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stackheight {

using Integer = mpz_class;
using Rational = mpq_class;

/// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<T> row_vector(std::size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }

  void append_row(std::span<const T> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntegerMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

RationalMatrix to_rational(const IntegerMatrix& a);
IntegerMatrix from_int64(std::size_t rows, std::size_t cols, std::span<const std::int64_t> values);

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b);
extern template IntegerMatrix multiply(const IntegerMatrix&, const IntegerMatrix&);
extern template RationalMatrix multiply(const RationalMatrix&, const RationalMatrix&);

std::vector<Rational> multiply(const RationalMatrix& a, std::span<const Rational> x);

/// Solves A x = b exactly. Overdetermined systems are accepted when consistent;
/// underdetermined ones return some solution (free variables set to zero).
/// Returns nullopt when the system is inconsistent. Throws std::invalid_argument
/// on a dimension mismatch.
std::optional<std::vector<Rational>> solve_exact(const RationalMatrix& a, std::span<const Rational> b);

std::size_t rank(const RationalMatrix& a);
Rational determinant(const RationalMatrix& a);
std::optional<RationalMatrix> inverse(const RationalMatrix& a);

/// Row-style Hermite normal form: transform * input == form, transform unimodular.
/// Nonzero rows of `form` come first, pivots positive and strictly increasing in
/// column, entries above a pivot reduced into [0, pivot).
struct HermiteForm {
  IntegerMatrix form;
  IntegerMatrix transform;
  std::size_t rank = 0;
};

HermiteForm hermite_normal_form(const IntegerMatrix& a);

/// Rows form a basis of {x in Z^n : A x = 0}; the lattice is saturated.
IntegerMatrix integer_kernel(const IntegerMatrix& a);

/// Rows form a basis (in Hermite form) of span_Q(rows of a) intersected with Z^n.
IntegerMatrix saturation(const IntegerMatrix& a);

struct KernelAndSaturation {
  IntegerMatrix kernel;      // of A acting on column vectors
  IntegerMatrix saturation;  // of the row lattice of A
};

KernelAndSaturation kernel_and_saturation(const IntegerMatrix& a);

/// Nonzero Smith invariants d_1 | d_2 | ... of a.
std::vector<Integer> smith_invariants(const IntegerMatrix& a);

/// gcd/lcm helpers on ranges of rationals.
Integer common_denominator(std::span<const Rational> values);
Integer floor_of(const Rational& q);
Rational frac_of(const Rational& q);

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);  // "3", "-3/2", "0.25"

}  // namespace stackheight
