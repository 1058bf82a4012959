#pragma once

// Exact double description and triangulation for pointed rational cones.

#include "stackheight/exact.hpp"

#include <stdexcept>
#include <vector>

namespace stackheight {

class DegenerateConeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

using IntegerVector = std::vector<Integer>;

/// The cone {t : W t >= 0}.
struct PolyhedralCone {
  RationalMatrix inequalities;
  std::vector<IntegerVector> rays;                // primitive extreme rays
  std::vector<std::vector<std::size_t>> facets;   // ray indices on each facet
};

/// Throws DegenerateConeError unless the cone is pointed and full-dimensional.
PolyhedralCone cone_from_inequalities(const RationalMatrix& w);

/// Simplicial cones (as ray index sets) whose union is the cone and whose
/// interiors are disjoint.
std::vector<std::vector<std::size_t>> triangulate(const PolyhedralCone& cone);

}  // namespace stackheight
