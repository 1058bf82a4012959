#include "stackheight/counting.hpp"

#include "stackheight/primes.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <thread>
#include <unordered_map>

namespace stackheight {

void require_lambda_interior(const Fan& fan, const RaisedVector& s) {
  check_layout(fan, s);
  if (!lambda_contains(fan, s, true))
    throw std::domain_error("s must lie in the interior of Lambda (every Xi(s) > 0)");
}

namespace {

struct Growth {
  Rational alpha;  // phi(y, g) >= alpha ||y||_inf + c_min
  Rational c_min;
};

Growth growth_of(const Fan& fan, const RaisedVector& s) {
  Rational s_min = s[0];
  std::int64_t b_max = 0;
  for (std::size_t rho = 0; rho < fan.num_rays(); ++rho) {
    s_min = std::min(s_min, s[rho]);
    for (auto v : fan.ray(rho)) b_max = std::max<std::int64_t>(b_max, std::abs(v));
  }
  Rational c_min = 0;
  for (std::size_t t = 0; t < fan.num_twisted(); ++t) c_min = std::min(c_min, s.twisted(t));
  return {s_min / b_max, c_min};
}

// Calls f(y) for every y with ||y||_inf <= radius.
template <class F>
void for_each_in_ball(std::size_t d, std::int64_t radius, F&& f) {
  LatticePoint y(d, -radius);
  while (true) {
    f(y);
    std::size_t i = 0;
    while (i < d && y[i] == radius) y[i] = -radius, ++i;
    if (i == d) return;
    ++y[i];
  }
}

// phi for every torsion class at y, sharing one barycentric solve.
template <class F>
void phi_over_classes(const Fan& fan, const RaisedVector& s, const std::vector<TorsionClass>& classes,
                      const LatticePoint& y, F&& f) {
  const auto a = fan.barycentric(y);
  Rational base = 0;
  LatticePoint q = y;
  for (std::size_t rho = 0; rho < a.size(); ++rho) {
    if (a[rho] == 0) continue;
    base += a[rho] * s[rho];
    const auto fl = floor_of(a[rho]).get_si();
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= fl * fan.ray(rho)[i];
  }
  for (const auto& g : classes) {
    const std::size_t sector = fan.sector_index(q, g);
    f(g, sector, sector == 0 ? base : base + s.twisted(sector - 1));
  }
}

Rational upper_rational(double x) {
  const double scaled = std::ceil(x * 1048576.0) + 1;
  return Rational(Integer(scaled), Integer(1048576));
}

}  // namespace

Rational min_positive_phi(const Fan& fan, const RaisedVector& s) {
  require_lambda_interior(fan, s);
  // phi(b_rho, 0) = s_rho and phi(Y) = Xi_Y(s) give an upper bound.
  Rational best = s[0];
  for (const auto& v : xi_all(fan, s)) best = std::min(best, v);
  const Growth gr = growth_of(fan, s);
  const Rational r = (best - gr.c_min) / gr.alpha;
  const std::int64_t radius = floor_of(r).get_si();
  const auto classes = fan.torsion_elements();
  for_each_in_ball(fan.dim(), radius, [&](const LatticePoint& y) {
    phi_over_classes(fan, s, classes, y, [&](const TorsionClass&, std::size_t sector, const Rational& v) {
      const bool zero = sector == 0 && std::all_of(y.begin(), y.end(), [](auto c) { return c == 0; });
      if (!zero && v < best) best = v;
    });
  });
  return best;
}

std::vector<LocalEntry> local_table(const Fan& fan, const RaisedVector& s, const Rational& max_phi) {
  require_lambda_interior(fan, s);
  std::vector<LocalEntry> out;
  if (max_phi <= 0) return out;
  const Growth gr = growth_of(fan, s);
  const std::int64_t radius = floor_of((max_phi - gr.c_min) / gr.alpha).get_si();
  const auto classes = fan.torsion_elements();
  for_each_in_ball(fan.dim(), radius, [&](const LatticePoint& y) {
    const bool y_zero = std::all_of(y.begin(), y.end(), [](auto c) { return c == 0; });
    phi_over_classes(fan, s, classes, y, [&](const TorsionClass& g, std::size_t sector, const Rational& v) {
      if ((y_zero && sector == 0) || v > max_phi) return;
      out.push_back({y, g, sector, v, v.get_d()});
    });
  });
  std::sort(out.begin(), out.end(), [](const LocalEntry& a, const LocalEntry& b) {
    if (a.phi != b.phi) return a.phi < b.phi;
    if (a.y != b.y) return a.y < b.y;
    return a.g < b.g;
  });
  return out;
}

std::vector<LocalEntry> enumerate_local_data(const Fan& fan, const RaisedVector& s, std::uint64_t p,
                                             const Rational& budget) {
  std::vector<LocalEntry> out;
  if (budget < 1) return out;
  const double limit = std::log(budget.get_d()) / std::log(static_cast<double>(p));
  for (auto& e : local_table(fan, s, upper_rational(limit + 1e-9))) {
    LogCombination diff;
    diff.add(Integer(p), e.phi);
    diff.add(budget.get_num(), Rational(-1));
    diff.add(budget.get_den(), Rational(1));
    if (diff.sign() <= 0) out.push_back(std::move(e));
  }
  return out;
}

std::uint64_t unit_multiplicity(const Fan& fan) {
  return std::uint64_t{1} << (fan.dim() + fan.num_even_torsion());
}

namespace {

struct Tally {
  std::uint64_t skeletons = 0;
  std::uint64_t visited = 0;
  std::uint64_t exact = 0;
  std::vector<std::uint64_t> sectors;
};

class SkeletonSearch {
 public:
  SkeletonSearch(const Fan& fan, const RaisedVector& s, const Rational& bound, const CountOptions& options)
      : fan_(fan), s_(s), bound_(bound), d_(fan.dim()) {
    log_b_ = std::log(bound.get_d());
    tol_ = 1e-9 * (1 + std::fabs(log_b_));
    min_phi_ = min_positive_phi(fan, s).get_d();
    s_rays_.resize(fan.num_rays());
    for (std::size_t i = 0; i < s_rays_.size(); ++i) s_rays_[i] = s[i].get_d();

    const double max_prime = std::exp(log_b_ / min_phi_) * (1 + 1e-9) + 1;
    if (max_prime > static_cast<double>(options.max_prime_cap))
      throw std::domain_error("prime cutoff B^(1/min phi) exceeds the sieve cap");
    primes_ = primes_up_to(static_cast<std::uint64_t>(max_prime));
    for (auto p : primes_) log_p_.push_back(std::log(static_cast<double>(p)));

    table_ = local_table(fan, s, upper_rational(log_b_ / std::log(2.0) + 1e-6));
    for (const auto& e : table_)
      for (auto v : e.y) y_f64_.push_back(static_cast<double>(v));
  }

  std::uint64_t max_prime() const { return primes_.empty() ? 0 : primes_.back(); }

  Tally run(unsigned threads) {
    // Work items: the first (prime, entry) pair of a skeleton.
    std::vector<std::pair<std::size_t, std::size_t>> items;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      if (min_phi_ * log_p_[i] > log_b_ + tol_) break;
      for (std::size_t e = 0; e < table_.size(); ++e) {
        if (table_[e].phi_f64 * log_p_[i] > log_b_ + tol_) break;
        items.emplace_back(i, e);
      }
    }

    Tally root = fresh();
    std::vector<double> x(d_, 0.0);
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    visit(0.0, x, stack, root, false);  // children are the work items

    threads = std::max(1u, threads);
    std::vector<Tally> tallies(threads, fresh());
    std::atomic<std::size_t> next{0};
    auto worker = [&](unsigned t) {
      std::vector<double> xs(d_);
      std::vector<std::pair<std::size_t, std::size_t>> st;
      for (std::size_t k; (k = next.fetch_add(1)) < items.size();) {
        const auto [i, e] = items[k];
        std::fill(xs.begin(), xs.end(), 0.0);
        st.clear();
        descend(i, e, 0.0, xs, st, tallies[t]);
      }
    };
    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
      for (auto& th : pool) th.join();
    }
    for (const auto& t : tallies) merge(root, t);
    return root;
  }

 private:
  Tally fresh() const {
    Tally t;
    t.sectors.assign(fan_.sectors().size(), 0);
    return t;
  }

  static void merge(Tally& into, const Tally& from) {
    into.skeletons += from.skeletons;
    into.visited += from.visited;
    into.exact += from.exact;
    for (std::size_t i = 0; i < into.sectors.size(); ++i) into.sectors[i] += from.sectors[i];
  }

  // Adds entry e at prime i to the skeleton, then visits and expands it.
  void descend(std::size_t i, std::size_t e, double log_hf, std::vector<double>& x,
               std::vector<std::pair<std::size_t, std::size_t>>& stack, Tally& tally) const {
    const double lp = log_p_[i];
    const double* y = &y_f64_[e * d_];
    for (std::size_t j = 0; j < d_; ++j) x[j] += y[j] * lp;
    stack.emplace_back(i, e);
    visit(log_hf + table_[e].phi_f64 * lp, x, stack, tally);
    stack.pop_back();
    for (std::size_t j = 0; j < d_; ++j) x[j] -= y[j] * lp;
  }

  void visit(double log_hf, std::vector<double>& x, std::vector<std::pair<std::size_t, std::size_t>>& stack,
             Tally& tally, bool expand = true) const {
    ++tally.visited;
    const double total = log_hf + phi_inf(fan_, s_rays_, x);
    bool counted;
    if (total < log_b_ - tol_) {
      counted = true;
    } else if (total > log_b_ + tol_) {
      counted = false;
    } else {
      ++tally.exact;
      counted = exact_at_most(stack);
    }
    if (counted) {
      ++tally.skeletons;
      for (const auto& [i, e] : stack) ++tally.sectors[table_[e].sector];
      if (stack.empty()) ++tally.sectors[0];
    }
    if (!expand) return;

    const double remaining = log_b_ - log_hf + tol_;
    const std::size_t first = stack.empty() ? 0 : stack.back().first + 1;
    for (std::size_t i = first; i < primes_.size(); ++i) {
      const double lp = log_p_[i];
      if (min_phi_ * lp > remaining) break;
      for (std::size_t e = 0; e < table_.size(); ++e) {
        if (table_[e].phi_f64 * lp > remaining) break;
        descend(i, e, log_hf, x, stack, tally);
      }
    }
  }

  bool exact_at_most(const std::vector<std::pair<std::size_t, std::size_t>>& stack) const {
    std::vector<PrimeValuation> data;
    for (const auto& [i, e] : stack) data.push_back({Integer(primes_[i]), table_[e].y, table_[e].g});
    LogCombination diff = log_height_from_valuations(fan_, s_, data);
    diff.add(bound_.get_num(), Rational(-1));
    diff.add(bound_.get_den(), Rational(1));
    return diff.sign() <= 0;
  }

  const Fan& fan_;
  const RaisedVector& s_;
  Rational bound_;
  std::size_t d_;
  double log_b_ = 0;
  double tol_ = 0;
  double min_phi_ = 1;
  std::vector<double> s_rays_;
  std::vector<std::uint64_t> primes_;
  std::vector<double> log_p_;
  std::vector<LocalEntry> table_;
  std::vector<double> y_f64_;
};

}  // namespace

CountReport count_points(const Fan& fan, const RaisedVector& s, const Rational& bound, const CountOptions& options) {
  require_lambda_interior(fan, s);
  const auto start = std::chrono::steady_clock::now();
  CountReport report;
  report.bound = bound;
  report.unit_multiplicity = unit_multiplicity(fan);
  report.threads = std::max(1u, options.threads);
  report.sector_tally.assign(fan.sectors().size(), 0);
  if (bound >= 1) {
    SkeletonSearch search(fan, s, bound, options);
    const Tally t = search.run(report.threads);
    report.skeletons = t.skeletons;
    report.skeletons_visited = t.visited;
    report.exact_comparisons = t.exact;
    report.sector_tally = t.sectors;
    report.max_prime = search.max_prime();
  }
  report.points = report.skeletons * report.unit_multiplicity;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace {

// Signs of x_j give 2 classes each; the class of -1 modulo l-th powers is
// nontrivial exactly when l is even, since (-1)^l = -1 for odd l.
std::uint64_t sign_classes(const Fan& fan) {
  std::uint64_t n = 1;
  for (std::size_t j = 0; j < fan.dim(); ++j) n *= 2;
  for (auto l : fan.torsion_orders()) n *= (l % 2 == 0) ? 2 : 1;
  return n;
}

struct Pair {
  std::uint32_t n;
  std::uint32_t m;
  double lower;  // lower bound for H from this coordinate alone
};

struct CoordinateBounds {
  double up;    // min over rays with b_j > 0 of s_rho / b_j
  double down;  // same for b_j < 0
};

class NaiveCounter {
 public:
  NaiveCounter(const Fan& fan, const RaisedVector& s, const Rational& bound, std::uint64_t max_candidates)
      : fan_(fan), s_(s), bound_(bound), d_(fan.dim()), classes_(fan.torsion_elements()),
        zero_y_(fan.dim(), 0), logx_(fan.dim(), 0.0) {
    for (std::size_t t = 0; t < fan.num_twisted(); ++t)
      if (s.twisted(t) < 0) throw std::domain_error("naive oracle requires s_Y >= 0 on twisted sectors");
    log_b_ = std::log(bound.get_d());
    tol_ = 1e-9 * (1 + std::fabs(log_b_));
    min_phi_ = min_positive_phi(fan, s).get_d() * (1 - 1e-12);
    for (std::size_t i = 0; i < fan.num_rays(); ++i) s_rays_.push_back(s[i].get_d());

    for (std::size_t j = 0; j < d_; ++j) {
      double up = INFINITY, down = INFINITY;
      for (std::size_t rho = 0; rho < fan.num_rays(); ++rho) {
        const auto b = fan.ray(rho)[j];
        if (b > 0) up = std::min(up, s_rays_[rho] / static_cast<double>(b));
        if (b < 0) down = std::min(down, s_rays_[rho] / static_cast<double>(-b));
      }
      bounds_.push_back({up * (1 - 1e-12), down * (1 - 1e-12)});
    }

    // Largest n, m and class-radical that can occur.
    double top = 1;
    for (const auto& cb : bounds_) {
      const double b = bound.get_d() * (1 + 1e-9);
      top = std::max(top, std::pow(b, 1 / (cb.down + std::min(cb.up, cb.down))));
      top = std::max(top, std::pow(b, 1 / (cb.up + std::min(cb.up, cb.down))));
    }
    if (!classes_.empty() && classes_.size() > 1) top = std::max(top, std::pow(bound.get_d() * (1 + 1e-9), 1 / min_phi_));
    if (top > 5e8) throw OracleGuardError("naive oracle: coordinate range too large");
    limit_ = static_cast<std::uint32_t>(top) + 2;
    spf_ = smallest_prime_factors(limit_);
    for (auto p : primes_up_to(limit_)) primes_.push_back(static_cast<std::uint32_t>(p));

    // Abort as soon as the running product passes the guard.
    std::uint64_t space = 1;
    const auto guard = [&](std::uint64_t count) {
      if (count > max_candidates / space) throw OracleGuardError("naive oracle: search space exceeds guard");
    };
    for (std::size_t j = 0; j + 1 < d_; ++j) {
      lists_.push_back({});
      for_each_pair(j, [&](const Pair& p) {
        lists_.back().push_back(p);
        guard(lists_.back().size());
      });
      space *= std::max<std::size_t>(lists_.back().size(), 1);
    }
    std::uint64_t last = 0;
    for_each_pair(d_ - 1, [&](const Pair&) { guard(++last); });
  }

  Tally run() {
    Tally tally;
    tally.sectors.assign(fan_.sectors().size(), 0);
    std::vector<Pair> chosen(d_);
    recurse(0, chosen, tally);
    return tally;
  }

 private:
  double lower(std::size_t j, double n, double m) const {
    const auto& cb = bounds_[j];
    const double base = cb.up * std::log(n) + cb.down * std::log(m);
    return base + (n >= m ? cb.up * std::log(n / m) : cb.down * std::log(m / n));
  }

  // For fixed m the bound is monotone in n on each side of n = m, so each
  // side is a single interval of n.
  template <class F>
  void for_each_pair(std::size_t j, F&& f) const {
    const double cap = log_b_ + tol_;
    const auto& cb = bounds_[j];
    auto emit = [&](std::uint32_t n, std::uint32_t m) {
      const double lb = lower(j, n, m);
      if (lb <= cap && std::gcd(n, m) == 1) f(Pair{n, m, lb});
      return lb <= cap;
    };
    for (std::uint32_t m = 1; m <= limit_; ++m) {
      if ((cb.down + std::min(cb.up, cb.down)) * std::log(static_cast<double>(m)) > cap) break;
      if (cb.up >= cb.down) {
        for (std::uint32_t n = 1; n < m && emit(n, m); ++n) {
        }
      } else {
        for (std::uint32_t n = m - 1; n >= 1 && emit(n, m); --n) {
        }
      }
      for (std::uint32_t n = m; n <= limit_ && emit(n, m); ++n) {
      }
    }
  }

  void recurse(std::size_t j, std::vector<Pair>& chosen, Tally& tally) {
    if (j + 1 == d_) {
      for_each_pair(j, [&](const Pair& p) {
        chosen[j] = p;
        evaluate(chosen, tally);
      });
      return;
    }
    for (const auto& p : lists_[j]) {
      chosen[j] = p;
      recurse(j + 1, chosen, tally);
    }
  }

  // Support of x as primes with their valuation vectors, flattened d_ per prime.
  void add_factors(std::uint32_t v, std::size_t j, int sign) {
    while (v > 1) {
      const std::uint32_t p = spf_[v];
      std::size_t k = 0;
      while (k < sup_p_.size() && sup_p_[k] != p) ++k;
      if (k == sup_p_.size()) {
        sup_p_.push_back(p);
        sup_y_.resize(sup_y_.size() + d_, 0);
      }
      while (v % p == 0) v /= p, sup_y_[k * d_ + j] += sign;
    }
  }

  std::span<const std::int64_t> support_y(std::size_t k) const { return {sup_y_.data() + k * d_, d_}; }

  double phi_f64(std::span<const std::int64_t> y, std::size_t c) {
    key_.assign(y.begin(), y.end());
    key_.push_back(static_cast<std::int64_t>(c));
    auto it = phi_cache_.find(key_);
    if (it == phi_cache_.end())
      it = phi_cache_.emplace(key_, phi(fan_, s_, LatticePoint(y.begin(), y.end()), classes_[c]).get_d()).first;
    return it->second;
  }

  void evaluate(const std::vector<Pair>& chosen, Tally& tally) {
    sup_p_.clear();
    sup_y_.clear();
    double lb = 0;
    for (std::size_t j = 0; j < d_; ++j) {
      add_factors(chosen[j].n, j, 1);
      add_factors(chosen[j].m, j, -1);
      lb = std::max(lb, chosen[j].lower);
      logx_[j] = std::log(static_cast<double>(chosen[j].n)) - std::log(static_cast<double>(chosen[j].m));
    }
    const double arch = phi_inf(fan_, s_rays_, logx_);
    // Classes at primes of x are free; other primes each cost >= p^{min phi}.
    assignment_.clear();
    over_support(0, log_b_ - lb + tol_, arch, tally);
  }

  void over_support(std::size_t k, double spare, double arch, Tally& tally) {
    if (k == sup_p_.size()) {
      extra_primes(0, spare, arch, tally);
      return;
    }
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      assignment_.emplace_back(sup_p_[k], c);
      over_support(k + 1, spare, arch, tally);
      assignment_.pop_back();
    }
  }

  void extra_primes(std::size_t start, double spare, double arch, Tally& tally) {
    judge(arch, tally);
    if (classes_.size() == 1) return;
    for (std::size_t i = start; i < primes_.size(); ++i) {
      const std::uint32_t p = primes_[i];
      const double cost = min_phi_ * std::log(static_cast<double>(p));
      if (cost > spare) break;
      if (std::find(sup_p_.begin(), sup_p_.end(), p) != sup_p_.end()) continue;
      for (std::size_t c = 1; c < classes_.size(); ++c) {
        assignment_.emplace_back(p, c);
        extra_primes(i + 1, spare - cost, arch, tally);
        assignment_.pop_back();
      }
    }
  }

  // Valuation vector of prime p in the current candidate, or zero.
  std::span<const std::int64_t> y_at(std::uint32_t p) const {
    for (std::size_t k = 0; k < sup_p_.size(); ++k)
      if (sup_p_[k] == p) return support_y(k);
    return {zero_y_.data(), d_};
  }

  void judge(double arch, Tally& tally) {
    double log_h = arch;
    for (const auto& [p, c] : assignment_) {
      const auto y = y_at(p);
      if (c == 0 && std::all_of(y.begin(), y.end(), [](std::int64_t v) { return v == 0; })) continue;
      log_h += phi_f64(y, c) * std::log(static_cast<double>(p));
    }
    if (log_h > log_b_ + tol_) return;

    std::vector<PrimeValuation> data;
    for (const auto& [p, c] : assignment_) {
      const auto y = y_at(p);
      if (c == 0 && std::all_of(y.begin(), y.end(), [](std::int64_t v) { return v == 0; })) continue;
      data.push_back({Integer(p), LatticePoint(y.begin(), y.end()), classes_[c]});
    }
    if (log_h >= log_b_ - tol_) {
      ++tally.exact;
      LogCombination diff = log_height_from_valuations(fan_, s_, data);
      diff.add(bound_.get_num(), Rational(-1));
      diff.add(bound_.get_den(), Rational(1));
      if (diff.sign() > 0) return;
    }
    ++tally.skeletons;
    for (const auto& v : data) ++tally.sectors[fan_.sector_of_valuation(v.y, v.g)];
    if (data.empty()) ++tally.sectors[0];
  }

  struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
      std::size_t h = v.size();
      for (auto x : v) h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    }
  };

  const Fan& fan_;
  const RaisedVector& s_;
  Rational bound_;
  std::size_t d_;
  std::vector<TorsionClass> classes_;
  double log_b_ = 0;
  double tol_ = 0;
  double min_phi_ = 1;
  std::vector<double> s_rays_;
  std::vector<CoordinateBounds> bounds_;
  std::uint32_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
  std::vector<std::vector<Pair>> lists_;
  std::unordered_map<std::vector<std::int64_t>, double, KeyHash> phi_cache_;
  std::vector<std::int64_t> key_;
  std::vector<std::uint32_t> sup_p_;
  std::vector<std::int64_t> sup_y_;
  std::vector<std::int64_t> zero_y_;
  std::vector<double> logx_;
  std::vector<std::pair<std::uint32_t, std::size_t>> assignment_;
};

}  // namespace

CountReport count_points_naive(const Fan& fan, const RaisedVector& s, const Rational& bound,
                               std::uint64_t max_candidates) {
  require_lambda_interior(fan, s);
  const auto start = std::chrono::steady_clock::now();
  CountReport report;
  report.bound = bound;
  report.unit_multiplicity = sign_classes(fan);
  report.sector_tally.assign(fan.sectors().size(), 0);
  if (bound >= 1) {
    NaiveCounter counter(fan, s, bound, max_candidates);
    const Tally t = counter.run();
    report.skeletons = t.skeletons;
    report.exact_comparisons = t.exact;
    report.sector_tally = t.sectors;
  }
  report.points = report.skeletons * report.unit_multiplicity;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace stackheight
