#pragma once

// Stacky fans (Sigma, N, beta) with N = N^rig (+) N_tor and their twisted
// sectors.
//
// The rigid lattice N^rig is Z^d; the torsion dual G^D is prod Z/l_i. Rays
// carry b_rho in Z^d. Torsion images of rays are parsed and kept but no
// computation in this library reads them: a_rho, q, phi and the heights only
// depend on the rigid part.

#include "stackheight/exact.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace stackheight {

using LatticePoint = std::vector<std::int64_t>;
using TorsionClass = std::vector<std::int64_t>;  // entry i lies in [0, l_i)

struct Ray {
  std::string id;
  LatticePoint b;
  std::vector<std::int64_t> torsion;  // accepted, ignored

  friend bool operator==(const Ray&, const Ray&) = default;
};

struct StackyFan {
  std::string name;
  int rig_rank = 0;
  std::vector<std::int64_t> torsion_orders;
  std::vector<Ray> rays;
  std::vector<std::vector<std::size_t>> max_cones;  // indices into rays

  friend bool operator==(const StackyFan&, const StackyFan&) = default;
};

struct Diagnostic {
  std::string check;
  bool passed = true;
  std::string detail;
  std::vector<Rational> witness;  // e.g. an uncovered direction
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;

  bool ok() const;
  const Diagnostic* find(const std::string& check) const;
};

/// Checks well-formedness, cofinite image, simpliciality, completeness and
/// proper intersection of cones. Never throws on bad input.
ValidationReport validate(const StackyFan& fan);

struct Sector {
  LatticePoint y;               // element of Box^rig(Sigma)
  TorsionClass g;               // element of G^D
  std::vector<Rational> coords; // a_rho(y), one per ray, each in [0, 1)
  Rational age;
  bool untwisted = false;
};

struct SplitQR {
  LatticePoint q;  // sum {a_rho} b_rho
  LatticePoint r;  // sum floor(a_rho) b_rho
};

class InvalidFan : public std::runtime_error {
 public:
  explicit InvalidFan(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// A validated stacky fan with its derived combinatorics. Immutable after
/// construction and safe to share between threads.
class Fan {
 public:
  /// Throws InvalidFan when validate() reports a failure.
  explicit Fan(StackyFan spec);

  const StackyFan& spec() const { return spec_; }
  std::size_t dim() const { return static_cast<std::size_t>(spec_.rig_rank); }
  std::size_t num_rays() const { return spec_.rays.size(); }
  const LatticePoint& ray(std::size_t i) const { return spec_.rays[i].b; }
  const std::vector<std::int64_t>& torsion_orders() const { return spec_.torsion_orders; }
  std::int64_t torsion_group_order() const;
  std::size_t num_even_torsion() const;

  std::size_t num_max_cones() const { return cones_.size(); }
  const std::vector<std::size_t>& cone_rays(std::size_t c) const { return cones_[c].rays; }
  const RationalMatrix& cone_inverse(std::size_t c) const { return cones_[c].inverse; }
  Rational cone_determinant(std::size_t c) const { return cones_[c].det; }

  /// Every cone of the fan (the zero cone first), each as sorted ray indices.
  const std::vector<std::vector<std::size_t>>& faces() const { return faces_; }

  /// Index of a maximal cone containing y.
  std::size_t containing_cone(std::span<const Rational> y) const;
  std::size_t containing_cone(const LatticePoint& y) const;
  /// Cone choice for real points: the cone whose smallest coordinate is largest.
  std::size_t containing_cone(std::span<const double> x) const;
  /// Coordinates of x with respect to the rays of max cone c.
  void cone_coordinates(std::size_t c, std::span<const double> x, std::span<double> out) const;

  /// a_rho(y) for every ray; zero outside the minimal cone of y.
  std::vector<Rational> barycentric(const LatticePoint& y) const;
  std::vector<Rational> barycentric(std::span<const Rational> y) const;
  SplitQR split_qr(const LatticePoint& y) const;

  /// Box(Sigma) = Box^rig(Sigma) x G^D; element 0 is the untwisted sector.
  const std::vector<Sector>& sectors() const { return sectors_; }
  std::size_t num_twisted() const { return sectors_.size() - 1; }
  std::size_t box_rig_size() const { return box_rig_size_; }

  /// Index into sectors() of (q, g); throws std::out_of_range if absent.
  std::size_t sector_index(const LatticePoint& q, const TorsionClass& g) const;
  /// Residue map on the torus: the sector (q(y), g).
  std::size_t sector_of_valuation(const LatticePoint& y, const TorsionClass& g) const;

  /// All torsion tuples in lexicographic order.
  std::vector<TorsionClass> torsion_elements() const;

 private:
  struct Cone {
    std::vector<std::size_t> rays;
    RationalMatrix inverse;          // coords = inverse * y
    std::vector<double> inverse_f64; // row-major copy
    Rational det;
  };

  void build_cones();
  void build_faces();
  void build_sectors();

  StackyFan spec_;
  std::vector<Cone> cones_;
  std::vector<std::vector<std::size_t>> faces_;
  std::vector<Sector> sectors_;
  std::map<std::pair<LatticePoint, TorsionClass>, std::size_t> sector_lookup_;
  std::size_t box_rig_size_ = 0;
};

}  // namespace stackheight
