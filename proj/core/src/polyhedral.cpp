#include "stackheight/polyhedral.hpp"

#include <algorithm>
#include <set>

namespace stackheight {

namespace {

IntegerVector primitive(const std::vector<Rational>& v) {
  const Integer den = common_denominator(v);
  IntegerVector out(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Rational scaled = v[i] * den;
    out[i] = scaled.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  return out;
}

std::size_t rank_of_rows(const RationalMatrix& w, const std::vector<std::size_t>& rows) {
  RationalMatrix m(rows.size(), w.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) m(i, j) = w(rows[i], j);
  return rows.empty() ? 0 : rank(m);
}

std::size_t rank_of_rays(const std::vector<IntegerVector>& rays, const std::vector<std::size_t>& idx) {
  if (idx.empty()) return 0;
  RationalMatrix m(idx.size(), rays[idx[0]].size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rays[idx[i]][j];
  return rank(m);
}

// Incidence of a ray with the processed inequalities, one bit per row.
using Bits = std::vector<std::uint64_t>;

bool subset_of(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

std::size_t popcount(const Bits& a) {
  std::size_t n = 0;
  for (auto x : a) n += static_cast<std::size_t>(__builtin_popcountll(x));
  return n;
}

struct DdRay {
  IntegerVector v;
  Bits zero;
};

Integer dot(const IntegerMatrix& w, std::size_t row, const IntegerVector& r) {
  Integer acc = 0;
  for (std::size_t j = 0; j < r.size(); ++j) acc += w(row, j) * r[j];
  return acc;
}

}  // namespace

PolyhedralCone cone_from_inequalities(const RationalMatrix& w) {
  const std::size_t b = w.cols();
  const std::size_t m = w.rows();
  if (b == 0) throw DegenerateConeError("cone in a zero-dimensional space");
  if (rank(w) != b) throw DegenerateConeError("cone contains a line");

  // Rows scaled to integers; signs are unchanged.
  IntegerMatrix wi(m, b);
  for (std::size_t i = 0; i < m; ++i) {
    const Integer den = common_denominator(w.row(i));
    for (std::size_t j = 0; j < b; ++j) wi(i, j) = Rational(w(i, j) * den).get_num();
  }

  // Initial simplicial cone from b independent inequalities.
  std::vector<std::size_t> basis;
  for (std::size_t i = 0; i < m && basis.size() < b; ++i) {
    basis.push_back(i);
    if (rank_of_rows(w, basis) != basis.size()) basis.pop_back();
  }
  RationalMatrix wb(b, b);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j) wb(i, j) = w(basis[i], j);
  const RationalMatrix inv = *inverse(wb);
  const std::size_t words = (m + 63) / 64;
  std::vector<DdRay> rays;
  for (std::size_t j = 0; j < b; ++j) {
    std::vector<Rational> col(b);
    for (std::size_t i = 0; i < b; ++i) col[i] = inv(i, j);
    DdRay ray{primitive(col), Bits(words, 0)};
    for (std::size_t i = 0; i < b; ++i)
      if (i != j) ray.zero[basis[i] / 64] |= std::uint64_t{1} << (basis[i] % 64);
    rays.push_back(std::move(ray));
  }

  // Double description with the combinatorial adjacency test: two rays are
  // adjacent when no third ray is tight on every row they share.
  for (std::size_t row = 0; row < m; ++row) {
    if (std::find(basis.begin(), basis.end(), row) != basis.end()) continue;
    std::vector<std::size_t> pos, neg;
    std::vector<Integer> values(rays.size());
    std::vector<DdRay> next;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      values[k] = dot(wi, row, rays[k].v);
      if (values[k] > 0) pos.push_back(k);
      if (values[k] < 0) neg.push_back(k);
      if (values[k] >= 0) {
        next.push_back(rays[k]);
        if (values[k] == 0) next.back().zero[row / 64] |= std::uint64_t{1} << (row % 64);
      }
    }
    Bits common(words);
    for (auto i : pos)
      for (auto j : neg) {
        for (std::size_t x = 0; x < words; ++x) common[x] = rays[i].zero[x] & rays[j].zero[x];
        if (b >= 2 && popcount(common) + 2 < b) continue;
        bool adjacent = true;
        for (std::size_t k = 0; k < rays.size() && adjacent; ++k)
          if (k != i && k != j && subset_of(common, rays[k].zero)) adjacent = false;
        if (!adjacent) continue;
        std::vector<Rational> comb(b);
        for (std::size_t c = 0; c < b; ++c) comb[c] = values[i] * rays[j].v[c] - values[j] * rays[i].v[c];
        DdRay ray{primitive(comb), common};
        ray.zero[row / 64] |= std::uint64_t{1} << (row % 64);
        next.push_back(std::move(ray));
      }
    rays = std::move(next);
  }

  PolyhedralCone cone;
  cone.inequalities = w;
  for (auto& r : rays) cone.rays.push_back(std::move(r.v));
  std::sort(cone.rays.begin(), cone.rays.end());
  cone.rays.erase(std::unique(cone.rays.begin(), cone.rays.end()), cone.rays.end());
  std::vector<std::size_t> all(cone.rays.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (cone.rays.empty() || rank_of_rays(cone.rays, all) != b) throw DegenerateConeError("cone is not full-dimensional");

  std::set<std::vector<std::size_t>> facets;
  for (std::size_t row = 0; row < m; ++row) {
    std::vector<std::size_t> tight;
    for (std::size_t k = 0; k < cone.rays.size(); ++k)
      if (dot(wi, row, cone.rays[k]) == 0) tight.push_back(k);
    if (b == 1 && tight.empty()) facets.insert(tight);
    if (tight.size() + 1 >= b && b > 1 && rank_of_rays(cone.rays, tight) + 1 == b) facets.insert(tight);
  }
  cone.facets.assign(facets.begin(), facets.end());
  return cone;
}

namespace {

void triangulate_face(const PolyhedralCone& cone, const std::vector<std::size_t>& face, std::size_t dim,
                      std::vector<std::vector<std::size_t>>& out) {
  if (face.size() == dim) {
    out.push_back(face);
    return;
  }
  const std::size_t apex = face.front();
  std::set<std::vector<std::size_t>> subfaces;
  for (const auto& facet : cone.facets) {
    std::vector<std::size_t> sub;
    std::set_intersection(face.begin(), face.end(), facet.begin(), facet.end(), std::back_inserter(sub));
    if (std::binary_search(sub.begin(), sub.end(), apex)) continue;
    if (rank_of_rays(cone.rays, sub) + 1 != dim) continue;
    subfaces.insert(sub);
  }
  for (const auto& sub : subfaces) {
    std::vector<std::vector<std::size_t>> pieces;
    triangulate_face(cone, sub, dim - 1, pieces);
    for (auto& p : pieces) {
      p.push_back(apex);
      std::sort(p.begin(), p.end());
      out.push_back(std::move(p));
    }
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> triangulate(const PolyhedralCone& cone) {
  std::vector<std::size_t> all(cone.rays.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> out;
  triangulate_face(cone, all, cone.inequalities.cols(), out);
  return out;
}

}  // namespace stackheight
