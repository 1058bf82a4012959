#include "stackheight/stacky_fan.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace stackheight {

namespace {

RationalMatrix cone_matrix(const StackyFan& fan, const std::vector<std::size_t>& cone) {
  const std::size_t d = static_cast<std::size_t>(fan.rig_rank);
  RationalMatrix m(d, cone.size());
  for (std::size_t j = 0; j < cone.size(); ++j)
    for (std::size_t i = 0; i < d; ++i) m(i, j) = Rational(fan.rays[cone[j]].b[i]);
  return m;
}

std::vector<Rational> to_rational_vector(const LatticePoint& y) {
  std::vector<Rational> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = Rational(y[i]);
  return out;
}

std::vector<Rational> primitive_direction(std::vector<Rational> v) {
  Integer den = common_denominator(v);
  Integer g = 0;
  for (auto& x : v) {
    x *= den;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
  }
  if (g != 0)
    for (auto& x : v) x /= g;
  return v;
}

std::string format_vector(const std::vector<Rational>& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << to_string(v[i]);
  os << ')';
  return os.str();
}

// Deterministic integer points used to probe the covering degree.
class ProbeSequence {
 public:
  std::int64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<std::int64_t>((state_ >> 33) % 2001) - 1000;
  }

 private:
  std::uint64_t state_ = 0x9e3779b97f4a7c15ULL;
};

Diagnostic well_formed(const StackyFan& fan) {
  Diagnostic diag{"well_formed", true, "", {}};
  auto fail = [&](const std::string& why) {
    diag.passed = false;
    diag.detail = why;
    return diag;
  };
  if (fan.rig_rank < 1) return fail("rig_rank must be positive");
  const std::size_t d = static_cast<std::size_t>(fan.rig_rank);
  for (auto l : fan.torsion_orders)
    if (l < 2) return fail("torsion orders must be >= 2");
  if (fan.rays.empty()) return fail("no rays");
  std::set<std::string> ids;
  for (const auto& r : fan.rays) {
    if (r.id.empty()) return fail("empty ray id");
    if (!ids.insert(r.id).second) return fail("duplicate ray id '" + r.id + "'");
    if (r.b.size() != d) return fail("ray '" + r.id + "' has wrong dimension");
    if (std::all_of(r.b.begin(), r.b.end(), [](auto v) { return v == 0; }))
      return fail("ray '" + r.id + "' is zero");
    if (!r.torsion.empty() && r.torsion.size() != fan.torsion_orders.size())
      return fail("ray '" + r.id + "' torsion part has wrong length");
  }
  if (fan.max_cones.empty()) return fail("no maximal cones");
  std::set<std::vector<std::size_t>> seen;
  std::vector<bool> used(fan.rays.size(), false);
  for (const auto& cone : fan.max_cones) {
    if (cone.empty()) return fail("empty maximal cone");
    std::vector<std::size_t> sorted = cone;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      return fail("maximal cone repeats a ray");
    for (auto i : sorted) {
      if (i >= fan.rays.size()) return fail("maximal cone references unknown ray");
      used[i] = true;
    }
    if (!seen.insert(sorted).second) return fail("duplicate maximal cone");
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) return fail("ray '" + fan.rays[i].id + "' lies in no maximal cone");
  return diag;
}

bool contains(const RationalMatrix& inv, std::span<const Rational> y, bool strict) {
  const auto c = multiply(inv, y);
  return std::all_of(c.begin(), c.end(), [&](const Rational& v) { return strict ? v > 0 : v >= 0; });
}

}  // namespace

bool ValidationReport::ok() const {
  return std::all_of(diagnostics.begin(), diagnostics.end(), [](const auto& d) { return d.passed; });
}

const Diagnostic* ValidationReport::find(const std::string& check) const {
  for (const auto& d : diagnostics)
    if (d.check == check) return &d;
  return nullptr;
}

ValidationReport validate(const StackyFan& fan) {
  ValidationReport report;
  report.diagnostics.push_back(well_formed(fan));
  if (!report.diagnostics.back().passed) return report;
  const std::size_t d = static_cast<std::size_t>(fan.rig_rank);

  {
    RationalMatrix all(d, fan.rays.size());
    for (std::size_t j = 0; j < fan.rays.size(); ++j)
      for (std::size_t i = 0; i < d; ++i) all(i, j) = Rational(fan.rays[j].b[i]);
    const std::size_t rk = rank(all);
    Diagnostic diag{"spans", rk == d, "", {}};
    if (!diag.passed) diag.detail = "rays span a rank " + std::to_string(rk) + " subspace";
    report.diagnostics.push_back(diag);
  }

  {
    Diagnostic diag{"simplicial", true, "", {}};
    for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
      const auto& cone = fan.max_cones[c];
      if (rank(cone_matrix(fan, cone)) != cone.size()) {
        diag.passed = false;
        diag.detail = "maximal cone " + std::to_string(c) + " has linearly dependent rays";
        break;
      }
    }
    report.diagnostics.push_back(diag);
    if (!diag.passed) return report;
  }

  Diagnostic complete{"complete", true, "", {}};
  Diagnostic proper{"proper_intersections", true, "", {}};

  for (const auto& cone : fan.max_cones) {
    if (cone.size() != d) {
      complete.passed = false;
      complete.detail = "a maximal cone is not full-dimensional";
    }
  }

  std::vector<RationalMatrix> inverses;
  if (complete.passed) {
    for (const auto& cone : fan.max_cones) inverses.push_back(*inverse(cone_matrix(fan, cone)));

    // facet -> (cone, opposite ray)
    std::map<std::vector<std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>> facets;
    for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
      std::vector<std::size_t> sorted = fan.max_cones[c];
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t k = 0; k < sorted.size(); ++k) {
        std::vector<std::size_t> facet = sorted;
        facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(k));
        facets[facet].push_back({c, sorted[k]});
      }
    }

    for (const auto& [facet, owners] : facets) {
      if (owners.size() == 1 && complete.passed) {
        complete.passed = false;
        const auto& opp = fan.rays[owners[0].second].b;
        Rational eps(1, 1000);
        for (int attempt = 0; attempt < 64; ++attempt, eps /= 2) {
          std::vector<Rational> w(d, Rational(0));
          for (auto r : facet)
            for (std::size_t i = 0; i < d; ++i) w[i] += fan.rays[r].b[i];
          for (std::size_t i = 0; i < d; ++i) w[i] -= eps * opp[i];
          bool covered = false;
          for (const auto& inv : inverses)
            if (contains(inv, w, false)) covered = true;
          if (!covered) {
            complete.witness = primitive_direction(w);
            break;
          }
        }
        complete.detail = "a facet lies in only one maximal cone; uncovered direction " +
                          format_vector(complete.witness);
      } else if (owners.size() > 2 && proper.passed) {
        proper.passed = false;
        proper.detail = "a facet lies in " + std::to_string(owners.size()) + " maximal cones";
      } else if (owners.size() == 2 && proper.passed) {
        IntegerMatrix fm(facet.size(), d);
        for (std::size_t r = 0; r < facet.size(); ++r)
          for (std::size_t i = 0; i < d; ++i) fm(r, i) = fan.rays[facet[r]].b[i];
        const IntegerMatrix normal = integer_kernel(fm);
        auto side = [&](std::size_t ray) {
          Integer acc = 0;
          for (std::size_t i = 0; i < d; ++i) acc += normal(0, i) * fan.rays[ray].b[i];
          return sgn(acc);
        };
        if (side(owners[0].second) * side(owners[1].second) >= 0) {
          proper.passed = false;
          proper.detail = "two maximal cones sharing a facet overlap";
        }
      }
    }
  }

  if (complete.passed && proper.passed) {
    ProbeSequence probe;
    for (int sample = 0, tries = 0; sample < 8 && tries < 1000; ++tries) {
      std::vector<Rational> y(d);
      for (auto& v : y) v = Rational(probe.next());
      bool generic = true;
      for (const auto& inv : inverses)
        for (const auto& c : multiply(inv, y))
          if (c == 0) generic = false;
      if (!generic) continue;
      ++sample;
      std::size_t degree = 0;
      for (const auto& inv : inverses)
        if (contains(inv, y, true)) ++degree;
      if (degree == 0) {
        complete.passed = false;
        complete.witness = primitive_direction(y);
        complete.detail = "uncovered direction " + format_vector(complete.witness);
        break;
      }
      if (degree > 1) {
        proper.passed = false;
        proper.witness = primitive_direction(y);
        proper.detail = "direction " + format_vector(proper.witness) + " lies in " +
                        std::to_string(degree) + " maximal cones";
        break;
      }
    }
  }

  report.diagnostics.push_back(complete);
  report.diagnostics.push_back(proper);
  return report;
}

namespace {

std::string summarize(const ValidationReport& report) {
  std::string out = "invalid stacky fan:";
  for (const auto& d : report.diagnostics)
    if (!d.passed) out += " [" + d.check + "] " + d.detail;
  return out;
}

}  // namespace

InvalidFan::InvalidFan(ValidationReport report)
    : std::runtime_error(summarize(report)), report_(std::move(report)) {}

Fan::Fan(StackyFan spec) : spec_(std::move(spec)) {
  ValidationReport report = validate(spec_);
  if (!report.ok()) throw InvalidFan(std::move(report));
  build_cones();
  build_faces();
  build_sectors();
}

std::int64_t Fan::torsion_group_order() const {
  std::int64_t n = 1;
  for (auto l : spec_.torsion_orders) n *= l;
  return n;
}

std::size_t Fan::num_even_torsion() const {
  return static_cast<std::size_t>(
      std::count_if(spec_.torsion_orders.begin(), spec_.torsion_orders.end(), [](auto l) { return l % 2 == 0; }));
}

void Fan::build_cones() {
  const std::size_t d = dim();
  for (const auto& rays : spec_.max_cones) {
    Cone c;
    c.rays = rays;
    std::sort(c.rays.begin(), c.rays.end());
    const RationalMatrix m = cone_matrix(spec_, c.rays);
    c.det = determinant(m);
    c.inverse = *inverse(m);
    c.inverse_f64.resize(d * d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) c.inverse_f64[i * d + j] = c.inverse(i, j).get_d();
    cones_.push_back(std::move(c));
  }
}

void Fan::build_faces() {
  std::set<std::vector<std::size_t>> all;
  for (const auto& c : cones_) {
    const std::size_t k = c.rays.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      std::vector<std::size_t> face;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1) face.push_back(c.rays[i]);
      all.insert(face);
    }
  }
  faces_.assign(all.begin(), all.end());
  std::stable_sort(faces_.begin(), faces_.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
}

void Fan::build_sectors() {
  const std::size_t d = dim();
  std::map<LatticePoint, std::vector<Rational>> box;
  for (const auto& c : cones_) {
    LatticePoint lo(d, 0), hi(d, 0);
    for (auto r : c.rays)
      for (std::size_t i = 0; i < d; ++i) {
        const auto v = spec_.rays[r].b[i];
        (v < 0 ? lo[i] : hi[i]) += v;
      }
    LatticePoint y = lo;
    while (true) {
      std::vector<Rational> coords = multiply(c.inverse, to_rational_vector(y));
      if (std::all_of(coords.begin(), coords.end(), [](const Rational& a) { return a >= 0 && a < 1; })) {
        std::vector<Rational> full(num_rays(), Rational(0));
        for (std::size_t j = 0; j < c.rays.size(); ++j) full[c.rays[j]] = coords[j];
        box.emplace(y, std::move(full));
      }
      std::size_t i = 0;
      while (i < d && y[i] == hi[i]) y[i] = lo[i], ++i;
      if (i == d) break;
      ++y[i];
    }
  }
  box_rig_size_ = box.size();

  const auto torsion = torsion_elements();
  const LatticePoint zero(d, 0);
  for (const auto& [y, coords] : box) {
    for (const auto& g : torsion) {
      Sector s;
      s.y = y;
      s.g = g;
      s.coords = coords;
      s.age = std::accumulate(coords.begin(), coords.end(), Rational(0));
      s.untwisted = y == zero && std::all_of(g.begin(), g.end(), [](auto v) { return v == 0; });
      if (s.untwisted)
        sectors_.insert(sectors_.begin(), std::move(s));
      else
        sectors_.push_back(std::move(s));
    }
  }
  for (std::size_t i = 0; i < sectors_.size(); ++i) sector_lookup_[{sectors_[i].y, sectors_[i].g}] = i;
}

std::vector<TorsionClass> Fan::torsion_elements() const {
  std::vector<TorsionClass> out;
  const auto& ls = spec_.torsion_orders;
  TorsionClass g(ls.size(), 0);
  while (true) {
    out.push_back(g);
    std::size_t i = ls.size();
    while (i > 0 && g[i - 1] == ls[i - 1] - 1) g[i - 1] = 0, --i;
    if (i == 0) break;
    ++g[i - 1];
  }
  return out;
}

std::size_t Fan::containing_cone(std::span<const Rational> y) const {
  for (std::size_t c = 0; c < cones_.size(); ++c)
    if (contains(cones_[c].inverse, y, false)) return c;
  throw std::logic_error("no maximal cone contains the point");
}

std::size_t Fan::containing_cone(const LatticePoint& y) const {
  return containing_cone(std::span<const Rational>(to_rational_vector(y)));
}

void Fan::cone_coordinates(std::size_t c, std::span<const double> x, std::span<double> out) const {
  const std::size_t d = dim();
  const auto& inv = cones_[c].inverse_f64;
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 0;
    for (std::size_t j = 0; j < d; ++j) acc += inv[i * d + j] * x[j];
    out[i] = acc;
  }
}

std::size_t Fan::containing_cone(std::span<const double> x) const {
  std::vector<double> coords(dim());
  std::size_t best = 0;
  double best_min = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cones_.size(); ++c) {
    cone_coordinates(c, x, coords);
    const double m = *std::min_element(coords.begin(), coords.end());
    if (m > best_min) best_min = m, best = c;
  }
  return best;
}

std::vector<Rational> Fan::barycentric(std::span<const Rational> y) const {
  const std::size_t c = containing_cone(y);
  const auto coords = multiply(cones_[c].inverse, y);
  std::vector<Rational> out(num_rays(), Rational(0));
  for (std::size_t j = 0; j < coords.size(); ++j) out[cones_[c].rays[j]] = coords[j];
  return out;
}

std::vector<Rational> Fan::barycentric(const LatticePoint& y) const {
  return barycentric(std::span<const Rational>(to_rational_vector(y)));
}

SplitQR Fan::split_qr(const LatticePoint& y) const {
  const auto a = barycentric(y);
  const std::size_t d = dim();
  SplitQR out{LatticePoint(d, 0), LatticePoint(d, 0)};
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a[r] == 0) continue;
    const auto fl = floor_of(a[r]).get_si();
    for (std::size_t i = 0; i < d; ++i) out.r[i] += fl * spec_.rays[r].b[i];
  }
  for (std::size_t i = 0; i < d; ++i) out.q[i] = y[i] - out.r[i];
  return out;
}

std::size_t Fan::sector_index(const LatticePoint& q, const TorsionClass& g) const {
  auto it = sector_lookup_.find({q, g});
  if (it == sector_lookup_.end()) throw std::out_of_range("not an element of Box(Sigma)");
  return it->second;
}

std::size_t Fan::sector_of_valuation(const LatticePoint& y, const TorsionClass& g) const {
  TorsionClass reduced(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto l = spec_.torsion_orders[i];
    reduced[i] = ((g[i] % l) + l) % l;
  }
  return sector_index(split_qr(y).q, reduced);
}

}  // namespace stackheight
