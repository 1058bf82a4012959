#include "stackheight/geometry_cones.hpp"

#include <cmath>
#include <random>

namespace stackheight {

QuotientConeModel ns_model(const Fan& fan, bool with_dual_cone) {
  const std::size_t d = fan.dim();
  QuotientConeModel model;
  model.ambient_dim = fan.num_rays() + fan.num_twisted();
  const std::size_t n = model.ambient_dim;

  model.m_basis = IntegerMatrix(d, n);
  for (std::size_t i = 0; i < d; ++i) {
    LatticePoint e(d, 0);
    e[i] = 1;
    const RaisedVector m = embed_character(fan, e);
    for (std::size_t j = 0; j < n; ++j) model.m_basis(i, j) = m[j].get_num();
  }
  const auto ks = kernel_and_saturation(model.m_basis);
  model.dual_lattice = ks.kernel;
  model.m_saturated = ks.saturation;
  model.b = n - d;
  if (model.dual_lattice.rows() != model.b) throw DegenerateConeError("embedded character lattice has wrong rank");
  if (!with_dual_cone) return model;

  // Lambda is generated by the columns of the inverse of the Xi matrix.
  const RationalMatrix gens = *inverse(xi_matrix(fan));
  const RationalMatrix l = to_rational(model.dual_lattice);
  const RationalMatrix lg = multiply(l, gens);  // b x n
  model.dual_cone = cone_from_inequalities(lg.transposed());
  return model;
}

Rational x_function_simplicial_exact(const RationalMatrix& forms, std::span<const Rational> y) {
  if (forms.rows() != forms.cols() || forms.cols() != y.size())
    throw std::invalid_argument("x_function_simplicial expects square forms matching y");
  const Rational det = determinant(forms);
  if (det == 0) throw DegenerateConeError("forms are linearly dependent");
  Rational value = abs(det);
  for (std::size_t j = 0; j < forms.rows(); ++j) {
    Rational lj = 0;
    for (std::size_t k = 0; k < y.size(); ++k) lj += forms(j, k) * y[k];
    if (lj <= 0) throw UnboundedRegionError("a form is not positive at y");
    value /= lj;
  }
  return value;
}

double x_function_simplicial(const RationalMatrix& forms, std::span<const Rational> y) {
  return x_function_simplicial_exact(forms, y).get_d();
}

XFunctionReport x_function_cone(const PolyhedralCone& dual_cone, std::span<const Rational> w,
                                std::uint64_t mc_samples, std::uint64_t seed) {
  const std::size_t b = dual_cone.inequalities.cols();
  std::vector<Rational> heights(dual_cone.rays.size());
  for (std::size_t i = 0; i < dual_cone.rays.size(); ++i) {
    Rational h = 0;
    for (std::size_t k = 0; k < b; ++k) h += w[k] * dual_cone.rays[i][k];
    if (h <= 0) throw UnboundedRegionError("y is not in the interior of the cone: truncated region is unbounded");
    heights[i] = h;
  }

  XFunctionReport report;
  report.rays = dual_cone.rays.size();
  const auto simplices = triangulate(dual_cone);
  report.simplices = simplices.size();
  Rational total = 0;
  for (const auto& simplex : simplices) {
    RationalMatrix m(b, b);
    Rational denom = 1;
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t k = 0; k < b; ++k) m(i, k) = dual_cone.rays[simplex[i]][k];
      denom *= heights[simplex[i]];
    }
    total += abs(determinant(m)) / denom;
  }
  report.exact = total;
  report.value = total.get_d();

  if (mc_samples > 0) {
    std::vector<double> lo(b, 0.0), hi(b, 0.0);
    for (std::size_t i = 0; i < dual_cone.rays.size(); ++i)
      for (std::size_t k = 0; k < b; ++k) {
        const double v = Rational(Rational(dual_cone.rays[i][k]) / heights[i]).get_d();
        lo[k] = std::min(lo[k], v);
        hi[k] = std::max(hi[k], v);
      }
    const auto& ineq = dual_cone.inequalities;
    std::vector<double> wf(b), ineqf(ineq.rows() * b);
    for (std::size_t k = 0; k < b; ++k) wf[k] = w[k].get_d();
    for (std::size_t r = 0; r < ineq.rows(); ++r)
      for (std::size_t k = 0; k < b; ++k) ineqf[r * b + k] = ineq(r, k).get_d();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> t(b);
    std::uint64_t hits = 0;
    for (std::uint64_t n = 0; n < mc_samples; ++n) {
      for (std::size_t k = 0; k < b; ++k) t[k] = lo[k] + (hi[k] - lo[k]) * unit(rng);
      double level = 0;
      for (std::size_t k = 0; k < b; ++k) level += wf[k] * t[k];
      if (level > 1) continue;
      bool inside = true;
      for (std::size_t r = 0; r < ineq.rows() && inside; ++r) {
        double v = 0;
        for (std::size_t k = 0; k < b; ++k) v += ineqf[r * b + k] * t[k];
        inside = v >= 0;
      }
      hits += inside;
    }
    double box = 1, factorial = 1;
    for (std::size_t k = 0; k < b; ++k) {
      box *= hi[k] - lo[k];
      factorial *= static_cast<double>(k + 1);
    }
    const double n = static_cast<double>(mc_samples);
    const double p = static_cast<double>(hits) / n;
    const double half = 2.5758293035489004 * std::sqrt(p * (1 - p) / n);  // 99% normal quantile
    const double scale = factorial * box;
    report.monte_carlo = MonteCarloEstimate{scale * p, scale * (p - half), scale * (p + half), mc_samples, seed};
  }
  return report;
}

std::vector<Rational> quotient_functional(const QuotientConeModel& model, const RaisedVector& y) {
  if (y.size() != model.ambient_dim) throw std::invalid_argument("raised vector does not match the model");
  std::vector<Rational> w(model.b, Rational(0));
  for (std::size_t k = 0; k < model.b; ++k)
    for (std::size_t j = 0; j < model.ambient_dim; ++j) w[k] += model.dual_lattice(k, j) * y[j];
  return w;
}

XFunctionReport x_function_quotient(const QuotientConeModel& model, const RaisedVector& y,
                                    std::uint64_t mc_samples, std::uint64_t seed) {
  const auto w = quotient_functional(model, y);
  return x_function_cone(model.dual_cone, w, mc_samples, seed);
}

}  // namespace stackheight
