#pragma once

// Rational points of the stacky torus of bounded height over Q.
//
// A point is determined up to units by its finite-place skeleton
// {p -> (y_p, g_p)}. Over Q the units contribute the constant factor
// 2^{d + #even l_i}: signs of the coordinates and the class of -1 modulo
// l_i-th powers.

#include "stackheight/raised_heights.hpp"
#include "stackheight/stacky_fan.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace stackheight {

class OracleGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws std::domain_error unless every Xi_i(s) > 0.
void require_lambda_interior(const Fan& fan, const RaisedVector& s);

/// min phi_s(y, g) over (y, g) != 0, by a certified finite search.
Rational min_positive_phi(const Fan& fan, const RaisedVector& s);

struct LocalEntry {
  LatticePoint y;
  TorsionClass g;
  std::size_t sector = 0;
  Rational phi;
  double phi_f64 = 0;
};

/// All (y, g) != 0 with phi_s(y, g) <= max_phi, sorted by (phi, y, g).
std::vector<LocalEntry> local_table(const Fan& fan, const RaisedVector& s, const Rational& max_phi);

/// All (y, g) != 0 with p^{phi_s(y, g)} <= budget, sorted by (phi, y, g).
std::vector<LocalEntry> enumerate_local_data(const Fan& fan, const RaisedVector& s, std::uint64_t p,
                                             const Rational& budget);

struct CountOptions {
  unsigned threads = 1;
  std::uint64_t max_prime_cap = 200'000'000;  // refuse larger sieves
};

struct CountReport {
  Rational bound;
  std::uint64_t points = 0;             // N_H(B)
  std::uint64_t unit_multiplicity = 0;  // 2^{d + #even l_i}
  std::uint64_t skeletons = 0;          // skeletons with H <= B
  std::uint64_t skeletons_visited = 0;  // skeletons with H_f <= B
  std::vector<std::uint64_t> sector_tally;  // psi_p over counted skeletons, per sector
  std::uint64_t exact_comparisons = 0;
  std::uint64_t max_prime = 0;
  unsigned threads = 1;
  double seconds = 0;
};

std::uint64_t unit_multiplicity(const Fan& fan);

/// N_H(B) by depth-first search over finite skeletons. Requires s in the
/// interior of Lambda; B < 1 gives 0.
CountReport count_points(const Fan& fan, const RaisedVector& s, const Rational& bound,
                         const CountOptions& options = {});

/// Independent brute force over x_j = +-n/m and class representatives.
/// Requires s_Y >= 0 on twisted sectors; throws OracleGuardError when the
/// search space exceeds `max_candidates`.
CountReport count_points_naive(const Fan& fan, const RaisedVector& s, const Rational& bound,
                               std::uint64_t max_candidates = 50'000'000);

}  // namespace stackheight
