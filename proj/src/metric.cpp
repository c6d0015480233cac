#include "genlab/metric.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace genlab {

Metric Metric::weighted_l2(Rat even, Rat odd) {
  if (sgn(even) <= 0 || sgn(odd) <= 0) throw MetricError("weights must be positive");
  return {Kind::kWeightedL2, std::move(even), std::move(odd)};
}

Point::Kind Metric::point_kind() const {
  switch (kind) {
    case Kind::kDiscrete:
      return Point::Kind::kAtom;
    case Kind::kAbs:
      return Point::Kind::kReal;
    default:
      return Point::Kind::kVec;
  }
}

const Rat& Metric::weight(const Int& index) const {
  return mpz_even_p(index.get_mpz_t()) ? even_weight : odd_weight;
}

Rat Metric::min_weight() const { return even_weight < odd_weight ? even_weight : odd_weight; }
Rat Metric::max_weight() const { return even_weight < odd_weight ? odd_weight : even_weight; }

std::string format_metric(const Metric& m) {
  switch (m.kind) {
    case Metric::Kind::kDiscrete:
      return "discrete";
    case Metric::Kind::kAbs:
      return "abs";
    case Metric::Kind::kL2:
      return "l2";
    case Metric::Kind::kWeightedL2:
      return "wl2 even=" + format_rat(m.even_weight) + " odd=" + format_rat(m.odd_weight);
  }
  return "";
}

Metric parse_metric(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string word;
  in >> word;
  if (word == "metric") in >> word;
  if (word == "discrete") return Metric::discrete();
  if (word == "abs") return Metric::abs();
  if (word == "l2") return Metric::l2();
  if (word == "wl2") {
    Rat even(1), odd(1);
    bool have_even = false, have_odd = false;
    std::string kv;
    while (in >> kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParseError("wl2 parameter needs '=': " + kv);
      std::string key = kv.substr(0, eq);
      Rat val = parse_rat(kv.substr(eq + 1));
      if (key == "even") {
        even = val;
        have_even = true;
      } else if (key == "odd") {
        odd = val;
        have_odd = true;
      } else {
        throw ParseError("unknown wl2 parameter " + key);
      }
    }
    if (!have_even || !have_odd) throw ParseError("wl2 needs even= and odd=");
    return Metric::weighted_l2(even, odd);
  }
  throw ParseError("unknown metric '" + word + "'");
}

namespace {

void check_kind(const Metric& m, const Point& p) {
  if (p.kind() != m.point_kind()) {
    throw MetricError("point " + format_point(p) + " does not belong to metric " +
                      format_metric(m));
  }
}

}  // namespace

QS2 dist_sq(const Metric& m, const Point& p, const Point& q) {
  check_kind(m, p);
  check_kind(m, q);
  switch (m.kind) {
    case Metric::Kind::kDiscrete:
      return QS2(Rat(p == q ? 0 : 1));
    case Metric::Kind::kAbs: {
      Rat d = p.real_value() - q.real_value();
      return QS2(Rat(d * d));
    }
    case Metric::Kind::kL2:
    case Metric::Kind::kWeightedL2: {
      const auto& x = p.vec_value().coords;
      const auto& y = q.vec_value().coords;
      bool weighted = m.kind == Metric::Kind::kWeightedL2;
      QS2 acc;
      auto add = [&](const Int& idx, const QS2& diff) {
        QS2 sq = diff * diff;
        acc = acc + (weighted ? sq * m.weight(idx) : sq);
      };
      size_t i = 0, j = 0;
      while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
          add(x[i].first, x[i].second);
          ++i;
        } else if (i == x.size() || y[j].first < x[i].first) {
          add(y[j].first, y[j].second);
          ++j;
        } else {
          add(x[i].first, x[i].second - y[j].second);
          ++i;
          ++j;
        }
      }
      return acc;
    }
  }
  return QS2();
}

Ordering dist_cmp(const Metric& m, const Point& p, const Point& q, const Rat& radius) {
  if (sgn(radius) < 0) throw MetricError("negative radius");
  QS2 d = dist_sq(m, p, q);
  int c = compare(d, QS2(Rat(radius * radius)));
  return c < 0 ? Ordering::kLess : (c == 0 ? Ordering::kEqual : Ordering::kGreater);
}

bool in_ball(const Metric& m, const Point& center, const Rat& radius, const Point& p) {
  return dist_cmp(m, center, p, radius) != Ordering::kGreater;
}

bool in_set_ball(const Metric& m, const std::vector<Point>& set, const Rat& radius,
                 const Point& p) {
  check_kind(m, p);
  for (const auto& c : set) {
    if (in_ball(m, c, radius, p)) return true;
  }
  return false;
}

namespace {

using Bits = std::vector<std::uint64_t>;

Bits make_bits(size_t n) { return Bits((n + 63) / 64, 0); }
void set_bit(Bits& b, size_t i) { b[i / 64] |= (std::uint64_t{1} << (i % 64)); }
bool test_bit(const Bits& b, size_t i) { return (b[i / 64] >> (i % 64)) & 1; }
size_t popcount(const Bits& b) {
  size_t n = 0;
  for (auto w : b) n += static_cast<size_t>(__builtin_popcountll(w));
  return n;
}
size_t and_not_count(const Bits& a, const Bits& uncovered) {
  size_t n = 0;
  for (size_t i = 0; i < a.size(); ++i) n += static_cast<size_t>(__builtin_popcountll(a[i] & uncovered[i]));
  return n;
}
bool subset_of(const Bits& a, const Bits& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] & ~b[i]) return false;
  }
  return true;
}

// Branch and bound over one connected component.
class SetCoverSolver {
 public:
  SetCoverSolver(size_t n_targets, std::vector<Bits> sets)
      : n_(n_targets), sets_(std::move(sets)) {
    by_target_.resize(n_);
    for (size_t s = 0; s < sets_.size(); ++s) {
      for (size_t t = 0; t < n_; ++t) {
        if (test_bit(sets_[s], t)) by_target_[t].push_back(s);
      }
    }
  }

  size_t solve() {
    Bits uncovered = make_bits(n_);
    for (size_t t = 0; t < n_; ++t) set_bit(uncovered, t);
    best_ = greedy(uncovered);
    recurse(uncovered, 0);
    return best_;
  }

 private:
  size_t greedy(Bits uncovered) const {
    size_t used = 0;
    while (popcount(uncovered) > 0) {
      size_t best_s = 0, best_gain = 0;
      for (size_t s = 0; s < sets_.size(); ++s) {
        size_t g = and_not_count(sets_[s], uncovered);
        if (g > best_gain) {
          best_gain = g;
          best_s = s;
        }
      }
      for (size_t i = 0; i < uncovered.size(); ++i) uncovered[i] &= ~sets_[best_s][i];
      ++used;
    }
    return used;
  }

  void recurse(const Bits& uncovered, size_t used) {
    size_t left = popcount(uncovered);
    if (left == 0) {
      best_ = std::min(best_, used);
      return;
    }
    size_t max_gain = 0;
    for (const auto& s : sets_) max_gain = std::max(max_gain, and_not_count(s, uncovered));
    size_t lb = (left + max_gain - 1) / max_gain;
    if (used + lb >= best_) return;
    // Branch on the uncovered target with the fewest covering sets.
    size_t pick = n_;
    size_t fewest = SIZE_MAX;
    for (size_t t = 0; t < n_; ++t) {
      if (!test_bit(uncovered, t)) continue;
      if (by_target_[t].size() < fewest) {
        fewest = by_target_[t].size();
        pick = t;
      }
    }
    std::vector<std::pair<size_t, size_t>> order;
    for (size_t s : by_target_[pick]) order.emplace_back(and_not_count(sets_[s], uncovered), s);
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
    for (const auto& [gain, s] : order) {
      Bits next = uncovered;
      for (size_t i = 0; i < next.size(); ++i) next[i] &= ~sets_[s][i];
      recurse(next, used + 1);
      if (used + 1 >= best_) return;
    }
  }

  size_t n_;
  std::vector<Bits> sets_;
  std::vector<std::vector<size_t>> by_target_;
  size_t best_ = 0;
};

struct CoverInstance {
  std::vector<Point> targets;
  std::vector<std::vector<size_t>> covers;  // candidate -> targets
};

CoverInstance build_instance(const Metric& m, const std::vector<Point>& targets_in,
                             const Rat& radius, const std::vector<Point>& candidates_in) {
  CoverInstance inst;
  inst.targets = dedup_points(targets_in);
  std::vector<Point> cands = dedup_points(candidates_in);
  std::vector<bool> covered(inst.targets.size(), false);
  for (const auto& c : cands) {
    std::vector<size_t> cov;
    for (size_t t = 0; t < inst.targets.size(); ++t) {
      if (in_ball(m, c, radius, inst.targets[t])) {
        cov.push_back(t);
        covered[t] = true;
      }
    }
    if (!cov.empty()) inst.covers.push_back(std::move(cov));
  }
  for (size_t t = 0; t < inst.targets.size(); ++t) {
    if (!covered[t]) throw UncoverableTarget(inst.targets[t]);
  }
  return inst;
}

size_t find_root(std::vector<size_t>& parent, size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

namespace {

// Exact set cover of targets 0..n-1 by the candidate sets `covers`.
std::size_t solve_cover(size_t n, const std::vector<std::vector<size_t>>& covers) {
  if (n == 0) return 0;
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& cov : covers) {
    for (size_t i = 1; i < cov.size(); ++i) {
      parent[find_root(parent, cov[i])] = find_root(parent, cov[0]);
    }
  }
  std::vector<std::vector<size_t>> members(n);
  for (size_t t = 0; t < n; ++t) members[find_root(parent, t)].push_back(t);
  size_t total = 0;
  for (size_t root = 0; root < n; ++root) {
    const auto& comp = members[root];
    if (comp.empty()) continue;
    std::vector<size_t> local(n, SIZE_MAX);
    for (size_t i = 0; i < comp.size(); ++i) local[comp[i]] = i;
    std::vector<Bits> sets;
    for (const auto& cov : covers) {
      if (cov.empty() || find_root(parent, cov[0]) != root) continue;
      Bits b = make_bits(comp.size());
      for (size_t t : cov) set_bit(b, local[t]);
      sets.push_back(std::move(b));
    }
    // Drop sets dominated by another set.
    std::vector<Bits> kept;
    for (size_t i = 0; i < sets.size(); ++i) {
      bool dominated = false;
      for (size_t j = 0; j < sets.size() && !dominated; ++j) {
        if (i == j) continue;
        if (subset_of(sets[i], sets[j]) && (sets[i] != sets[j] || j < i)) dominated = true;
      }
      if (!dominated) kept.push_back(sets[i]);
    }
    total += SetCoverSolver(comp.size(), std::move(kept)).solve();
  }
  return total;
}

}  // namespace

std::size_t covering_number_exact(const Metric& m, const std::vector<Point>& targets,
                                  const Rat& radius, const std::vector<Point>& candidates) {
  CoverInstance inst = build_instance(m, targets, radius, candidates);
  return solve_cover(inst.targets.size(), inst.covers);
}

std::size_t covering_number_greedy(const Metric& m, const std::vector<Point>& targets,
                                   const Rat& radius, const std::vector<Point>& candidates) {
  CoverInstance inst = build_instance(m, targets, radius, candidates);
  std::vector<bool> done(inst.targets.size(), false);
  size_t left = inst.targets.size();
  size_t used = 0;
  while (left > 0) {
    size_t best = 0, best_gain = 0;
    for (size_t s = 0; s < inst.covers.size(); ++s) {
      size_t g = 0;
      for (size_t t : inst.covers[s]) g += done[t] ? 0 : 1;
      if (g > best_gain) {
        best_gain = g;
        best = s;
      }
    }
    for (size_t t : inst.covers[best]) {
      if (!done[t]) {
        done[t] = true;
        --left;
      }
    }
    ++used;
  }
  return used;
}

std::size_t packing_greedy(const Metric& m, const std::vector<Point>& points, const Rat& radius) {
  std::vector<Point> kept;
  Rat twice = 2 * radius;
  for (const auto& p : points) {
    bool ok = true;
    for (const auto& q : kept) {
      if (dist_cmp(m, p, q, twice) != Ordering::kGreater) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(p);
  }
  return kept.size();
}

std::size_t line_cover_exact(const std::vector<Rat>& values, const Rat& radius) {
  std::vector<Rat> v = values;
  std::sort(v.begin(), v.end());
  size_t used = 0;
  size_t i = 0;
  Rat span = 2 * radius;
  while (i < v.size()) {
    Rat reach = v[i] + span;
    ++used;
    while (i < v.size() && v[i] <= reach) ++i;
  }
  return used;
}

std::size_t cover_count(const Metric& m, const std::vector<Point>& points, const Rat& radius) {
  for (const auto& p : points) check_kind(m, p);
  switch (m.kind) {
    case Metric::Kind::kAbs: {
      std::vector<Rat> vals;
      vals.reserve(points.size());
      for (const auto& p : points) vals.push_back(p.real_value());
      return line_cover_exact(vals, radius);
    }
    case Metric::Kind::kDiscrete: {
      size_t n = dedup_points(points).size();
      if (n == 0) return 0;
      return radius >= 1 ? 1 : n;
    }
    default:
      return covering_number_exact(m, points, radius, points);
  }
}

CoverTracker::CoverTracker(Metric m, Rat radius) : metric_(std::move(m)), radius_(std::move(radius)) {}

std::size_t CoverTracker::add(const Point& p) {
  check_kind(metric_, p);
  ++count_;
  for (const auto& q : distinct_) {
    if (q == p) return value_;
  }
  distinct_.push_back(p);
  switch (metric_.kind) {
    case Metric::Kind::kAbs:
      reals_.push_back(p.real_value());
      value_ = line_cover_exact(reals_, radius_);
      return value_;
    case Metric::Kind::kDiscrete:
      value_ = radius_ >= 1 ? 1 : distinct_.size();
      return value_;
    default:
      break;
  }
  // Targets interact only when within 2 radius of each other. Each component
  // keeps its radius-ball lists so a new point costs one distance per point.
  Rat twice = 2 * radius_;
  Component merged;
  std::vector<Component> rest;
  std::vector<size_t> near;  // indices into merged.points within radius of p
  for (auto& c : comps_) {
    bool touches = false;
    std::vector<size_t> local_near;
    for (size_t i = 0; i < c.points.size(); ++i) {
      Ordering o = dist_cmp(metric_, p, c.points[i], twice);
      if (o == Ordering::kGreater) continue;
      touches = true;
      if (dist_cmp(metric_, p, c.points[i], radius_) != Ordering::kGreater) local_near.push_back(i);
    }
    if (!touches) {
      rest.push_back(std::move(c));
      continue;
    }
    comp_sum_ -= c.cover;
    size_t off = merged.points.size();
    for (size_t i : local_near) near.push_back(off + i);
    for (auto& row : c.balls) {
      for (auto& t : row) t += off;
      merged.balls.push_back(std::move(row));
    }
    for (auto& q : c.points) merged.points.push_back(std::move(q));
  }
  size_t self = merged.points.size();
  merged.points.push_back(p);
  for (size_t i : near) merged.balls[i].push_back(self);
  near.push_back(self);
  merged.balls.push_back(std::move(near));
  merged.cover = solve_cover(merged.points.size(), merged.balls);
  comp_sum_ += merged.cover;
  rest.push_back(std::move(merged));
  comps_ = std::move(rest);
  value_ = std::max(value_, comp_sum_);
  return value_;
}

}  // namespace genlab
