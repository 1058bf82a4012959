#pragma once

// The embedded character lattice M^rig, the quotient rank b and X-functions of
// cones, in particular X_{p(Lambda)}(-p(K_X)).
//
// Quotient lattice: Z^n / sat(M). Its dual is L = {v in Z^n : M v = 0}, and
// the dual cone p(Lambda)^+ is described in coordinates t with v = L^T t.

#include "stackheight/exact.hpp"
#include "stackheight/polyhedral.hpp"
#include "stackheight/raised_heights.hpp"
#include "stackheight/stacky_fan.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace stackheight {

struct QuotientConeModel {
  std::size_t ambient_dim = 0;  // #rays + #twisted
  std::size_t b = 0;            // ambient_dim - d
  IntegerMatrix m_basis;        // rows: images of the standard basis of Hom(N^rig, Z)
  IntegerMatrix m_saturated;
  IntegerMatrix dual_lattice;   // rows: basis of L
  PolyhedralCone dual_cone;     // p(Lambda)^+ in L-coordinates
};

/// Throws InvalidFan through Fan construction; DegenerateConeError if the cone
/// fails to be pointed and full-dimensional. Without `with_dual_cone` only the
/// lattice data is filled in; the double description step can have
/// exponentially many rays.
QuotientConeModel ns_model(const Fan& fan, bool with_dual_cone = true);

/// |det(forms)| * prod_j 1/l_j(y) for square, independent forms (rows).
double x_function_simplicial(const RationalMatrix& forms, std::span<const Rational> y);
Rational x_function_simplicial_exact(const RationalMatrix& forms, std::span<const Rational> y);

struct MonteCarloEstimate {
  double value = 0;
  double ci_low = 0;
  double ci_high = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct XFunctionReport {
  Rational exact;
  double value = 0;
  std::size_t simplices = 0;
  std::size_t rays = 0;
  std::optional<MonteCarloEstimate> monte_carlo;
};

class UnboundedRegionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// X of the cone whose dual is `dual_cone` (lattice Z^b) at the functional w:
/// b! vol{t in dual_cone : <w, t> <= 1}, exact by triangulation.
XFunctionReport x_function_cone(const PolyhedralCone& dual_cone, std::span<const Rational> w,
                                std::uint64_t mc_samples = 0, std::uint64_t seed = 0x5eed);

/// The class of y in L-coordinates: w = L y.
std::vector<Rational> quotient_functional(const QuotientConeModel& model, const RaisedVector& y);

/// X_{p(Lambda)}(y) for y a raised vector (normally -K_X).
XFunctionReport x_function_quotient(const QuotientConeModel& model, const RaisedVector& y,
                                    std::uint64_t mc_samples = 0, std::uint64_t seed = 0x5eed);

}  // namespace stackheight
