#include "test_support.hpp"

#include "fan_io.hpp"

#include <numeric>

namespace stackheight::testing {

std::string fan_path(const std::string& name) { return std::string(STACKHEIGHT_FANS_DIR) + "/" + name + ".json"; }

StackyFan load_bundled_spec(const std::string& name) { return cli::load_fan(fan_path(name)); }

Fan load_bundled(const std::string& name) { return Fan(load_bundled_spec(name)); }

namespace {

LatticePoint primitive(LatticePoint v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

}  // namespace

std::vector<LatticePoint> random_unimodular(std::mt19937_64& rng, std::size_t d) {
  std::vector<LatticePoint> u(d, LatticePoint(d, 0));
  for (std::size_t i = 0; i < d; ++i) u[i][i] = 1;
  if (d < 2) {
    if (rng() & 1) u[0][0] = -1;
    return u;
  }
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  for (std::size_t step = 0; step < 2 * d; ++step) {
    const std::size_t a = pick(rng), b = pick(rng);
    if (a == b) {
      u[a].swap(u[(a + 1) % d]);
      continue;
    }
    const std::int64_t c = (rng() & 1) ? 1 : -1;
    for (std::size_t j = 0; j < d; ++j) u[a][j] += c * u[b][j];
  }
  return u;
}

StackyFan transform_fan(const StackyFan& fan, const std::vector<LatticePoint>& u) {
  StackyFan out = fan;
  for (auto& ray : out.rays) {
    LatticePoint b(ray.b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) b[i] += u[i][j] * ray.b[j];
    ray.b = b;
  }
  return out;
}

StackyFan random_fan(std::mt19937_64& rng, const RandomFanOptions& options) {
  const std::size_t d = options.dim;
  std::vector<LatticePoint> rays;
  for (std::size_t i = 0; i < d; ++i)
    for (int sign : {1, -1}) {
      LatticePoint v(d, 0);
      v[i] = sign;
      rays.push_back(v);
    }
  std::vector<std::vector<std::size_t>> cones;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    std::vector<std::size_t> cone;
    for (std::size_t i = 0; i < d; ++i) cone.push_back(2 * i + ((mask >> i) & 1));
    cones.push_back(cone);
  }

  // Stellar subdivision at an interior lattice point of a random cone.
  const int subdivisions = std::uniform_int_distribution<int>(0, options.max_subdivisions)(rng);
  for (int k = 0; k < subdivisions && d > 1; ++k) {
    const std::size_t c = std::uniform_int_distribution<std::size_t>(0, cones.size() - 1)(rng);
    LatticePoint v(d, 0);
    for (auto r : cones[c]) {
      const std::int64_t w = 1 + static_cast<std::int64_t>(rng() % 2);
      for (std::size_t j = 0; j < d; ++j) v[j] += w * rays[r][j];
    }
    rays.push_back(primitive(v));
    const std::size_t fresh = rays.size() - 1;
    const auto old = cones[c];
    cones.erase(cones.begin() + static_cast<std::ptrdiff_t>(c));
    for (std::size_t i = 0; i < d; ++i) {
      auto cone = old;
      cone[i] = fresh;
      cones.push_back(cone);
    }
  }

  StackyFan fan;
  fan.name = "random";
  fan.rig_rank = static_cast<int>(d);
  if (options.torsion && rng() % 3 == 0) fan.torsion_orders = {rng() % 2 ? 2 : 3};
  for (std::size_t i = 0; i < rays.size(); ++i) {
    Ray ray{"r" + std::to_string(i), rays[i], {}};
    if (options.multipliers) {
      const std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 3);
      if (rng() % 2 == 0)
        for (auto& x : ray.b) x *= m;
    }
    if (!fan.torsion_orders.empty()) ray.torsion = {static_cast<std::int64_t>(rng() % fan.torsion_orders[0])};
    fan.rays.push_back(ray);
  }
  fan.max_cones = cones;
  return transform_fan(fan, random_unimodular(rng, d));
}

RaisedVector random_interior(std::mt19937_64& rng, const Fan& fan, int lo4, int hi4) {
  std::uniform_int_distribution<int> draw(lo4, hi4);
  RaisedVector s(fan.num_rays(), fan.num_twisted());
  for (std::size_t r = 0; r < fan.num_rays(); ++r) s[r] = Rational(draw(rng), 4);
  for (std::size_t t = 0; t < fan.num_twisted(); ++t) {
    const Sector& sec = fan.sectors()[t + 1];
    Rational shift = 0;
    for (std::size_t r = 0; r < fan.num_rays(); ++r) shift += sec.coords[r] * s[r];
    s[fan.num_rays() + t] = Rational(draw(rng), 4) - shift;
  }
  for (std::size_t i = 0; i < s.size(); ++i) s[i].canonicalize();
  return s;
}

}  // namespace stackheight::testing
