#pragma once
// Test-side reference computations. These avoid the library's covering code.

#include <cstdint>
#include <random>
#include <vector>

#include "genlab/metric.hpp"

namespace genlab_test {

using genlab::Int;
using genlab::Metric;
using genlab::Point;
using genlab::QS2;
using genlab::Rat;

inline Rat R(const char* s) { return genlab::parse_rat(s); }

// Squared distance by direct coordinate merge.
inline QS2 ref_dist_sq(const Metric& m, const Point& p, const Point& q) {
  if (p.kind() == Point::Kind::kAtom) return QS2(Rat(p.atom_id() == q.atom_id() ? 0 : 1));
  if (p.kind() == Point::Kind::kReal) {
    Rat d = p.real_value() - q.real_value();
    return QS2(d * d);
  }
  QS2 total;
  auto add = [&](const Int& k, const QS2& diff) {
    Rat w = Int(k % 2) == 0 ? m.even_weight : m.odd_weight;
    total = total + diff * diff * w;
  };
  const auto& x = p.vec_value().coords;
  const auto& y = q.vec_value().coords;
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
  return total;
}

inline bool ref_within(const Metric& m, const Point& p, const Point& q, const Rat& r) {
  return (QS2(r * r) - ref_dist_sq(m, p, q)).sign() >= 0;
}

// Minimum subset of candidates whose closed balls cover the targets.
inline size_t brute_force_cover(const Metric& m, const std::vector<Point>& candidates,
                                const Rat& r, const std::vector<Point>& targets) {
  size_t n = candidates.size();
  std::vector<std::uint64_t> mask(n, 0);
  for (size_t c = 0; c < n; ++c)
    for (size_t t = 0; t < targets.size(); ++t)
      if (ref_within(m, candidates[c], targets[t], r)) mask[c] |= 1ull << t;
  std::uint64_t full = targets.size() == 64 ? ~0ull : (1ull << targets.size()) - 1;
  size_t best = n + 1;
  for (std::uint64_t s = 0; s < (1ull << n); ++s) {
    std::uint64_t cov = 0;
    size_t cnt = 0;
    for (size_t c = 0; c < n; ++c)
      if (s >> c & 1) {
        cov |= mask[c];
        ++cnt;
      }
    if (cov == full && cnt < best) best = cnt;
  }
  return best;
}

// External cover on R: centres x + r suffice.
inline size_t brute_force_line_cover(const std::vector<Point>& pts, const Rat& r) {
  std::vector<Point> centres;
  for (const auto& p : pts) centres.push_back(Point::real(p.real_value() + r));
  return brute_force_cover(Metric::abs(), centres, r, pts);
}

inline Rat small_rat(std::mt19937_64& rng, int span, int den) {
  long v = static_cast<long>(rng() % (2 * span + 1)) - span;
  return Rat(v, den);
}

inline Point random_point(const Metric& m, std::mt19937_64& rng, bool with_sqrt2) {
  switch (m.point_kind()) {
    case Point::Kind::kAtom:
      return Point::atom(static_cast<std::int64_t>(rng() % 6 + 1));
    case Point::Kind::kReal: {
      Rat v = small_rat(rng, 12, 4);
      v.canonicalize();
      return Point::real(v);
    }
    case Point::Kind::kVec: {
      std::vector<std::pair<Int, QS2>> coords;
      for (long k = 1; k <= 4; ++k) {
        if (rng() % 2) continue;
        Rat a = small_rat(rng, 6, 4), b = with_sqrt2 ? small_rat(rng, 4, 4) : Rat(0);
        a.canonicalize();
        b.canonicalize();
        coords.emplace_back(Int(k), QS2(a, b));
      }
      return Point::vec(coords);
    }
  }
  return Point();
}

inline std::vector<Point> random_points(const Metric& m, std::mt19937_64& rng, size_t n) {
  std::vector<Point> out;
  for (size_t i = 0; i < n; ++i) out.push_back(random_point(m, rng, false));
  return out;
}

}  // namespace genlab_test
