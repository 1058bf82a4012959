#pragma once

// Local height transforms at the trivial character and the Euler product
// gamma; the archimedean transform in closed form.
//
// Variables of R_Sigma and Q_Sigma follow the raised-vector layout: X_rho for
// rays, then X_Y for the twisted sectors.

#include "stackheight/raised_heights.hpp"
#include "stackheight/sparse_poly.hpp"
#include "stackheight/stacky_fan.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stackheight {

class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Names X_<ray id> and Y<t> in raised-vector order.
std::vector<std::string> raised_variable_names(const Fan& fan);

/// Numerator of R_sigma over prod_{rho in sigma} (1 - X_rho).
SparsePoly r_sigma_numerator(const Fan& fan, const std::vector<std::size_t>& face);

/// Q_Sigma = (sum over all cones of R_sigma) * prod_rho (1 - X_rho).
SparsePoly q_sigma_poly(const Fan& fan);

/// Q_Sigma * prod_Y (1 - X_Y), the Euler factor of gamma as a polynomial.
SparsePoly gamma_factor_poly(const Fan& fan);

/// R_Sigma at X_i = p^{-Xi_i(s)}. Throws DivergenceError if some Xi_i(s) <= 0.
double local_transform(const Fan& fan, const RaisedVector& s, std::uint64_t p);

struct OracleSum {
  double partial = 0;  // sum over ||y||_inf <= radius and all g
  double tail = 0;     // bound on the omitted terms plus rounding
  std::int64_t radius = 0;
  std::size_t terms = 0;
};

/// Direct summation of p^{-phi_s(y,g)}; independent of R_Sigma.
OracleSum local_transform_oracle(const Fan& fan, const RaisedVector& s, std::uint64_t p, std::int64_t radius);

/// Smallest radius whose oracle tail bound is below `tolerance`.
std::int64_t oracle_radius_for(const Fan& fan, const RaisedVector& s, std::uint64_t p, double tolerance);

struct EulerProduct {
  double value = 0;
  double tail = 0;  // relative bound on |gamma / value - 1| from primes > bound
  std::uint64_t prime_bound = 0;
  std::size_t primes_used = 0;
  double decay_exponent = 0;  // min <alpha, Xi(s)> over non-constant monomials
};

/// prod_{p <= prime_bound} R_Sigma(p) prod_i (1 - p^{-Xi_i(s)}). Bit-identical
/// for every thread count.
EulerProduct gamma_euler(const Fan& fan, const RaisedVector& s, std::uint64_t prime_bound, unsigned threads = 1);

/// Integral of exp(-phi_inf) over R^d: sum_sigma |det sigma| / prod s_rho.
Rational h_inf_hat_exact(const Fan& fan, const RaisedVector& s);
double h_inf_hat(const Fan& fan, const RaisedVector& s);

}  // namespace stackheight
