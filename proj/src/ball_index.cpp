#include "genlab/ball_index.hpp"

namespace genlab {

BallIndex::BallIndex(Metric m, Rat radius)
    : metric_(m), radius_(std::move(radius)), r2_(radius_ * radius_) {}

void BallIndex::add(const Point& p) {
  ++count_;
  switch (metric_.kind) {
    case Metric::Kind::kDiscrete:
      if (p.kind() != Point::Kind::kAtom) throw MetricError("discrete metric needs atoms");
      exact_.insert(p);
      return;
    case Metric::Kind::kAbs:
      if (p.kind() != Point::Kind::kReal) throw MetricError("abs metric needs reals");
      reals_.insert(p.real_value());
      return;
    default:
      if (p.kind() != Point::Kind::kVec) throw MetricError("vector metric needs vectors");
      if (!exact_.insert(p).second) return;
      by_norm_.emplace(dist_sq(metric_, Point::origin(), p), p);
      for (const auto& [k, c] : p.vec_value().coords) by_axis_[k].push_back(p);
  }
}

bool BallIndex::covers(const Point& p) const {
  if (count_ == 0) return false;
  switch (metric_.kind) {
    case Metric::Kind::kDiscrete:
      if (p.kind() != Point::Kind::kAtom) throw MetricError("discrete metric needs atoms");
      return radius_ >= 1 || exact_.count(p) > 0;
    case Metric::Kind::kAbs: {
      if (p.kind() != Point::Kind::kReal) throw MetricError("abs metric needs reals");
      const Rat& v = p.real_value();
      auto it = reals_.lower_bound(v);
      if (it != reals_.end() && *it - v <= radius_) return true;
      if (it != reals_.begin() && v - *std::prev(it) <= radius_) return true;
      return false;
    }
    default:
      break;
  }
  if (p.kind() != Point::Kind::kVec) throw MetricError("vector metric needs vectors");
  // Points sharing an axis with p: check directly.
  std::set<Point, PointLess> checked;
  for (const auto& [k, c] : p.vec_value().coords) {
    auto it = by_axis_.find(k);
    if (it == by_axis_.end()) continue;
    for (const auto& q : it->second) {
      if (!checked.insert(q).second) continue;
      if (in_ball(metric_, q, radius_, p)) return true;
    }
  }
  // Disjoint supports: d^2 = |p|^2 + |q|^2, so scan by norm up to r^2 - |p|^2.
  QS2 room = r2_ - dist_sq(metric_, Point::origin(), p);
  if (room.sign() < 0) return false;
  for (const auto& [n, q] : by_norm_) {
    if (compare(n, room) > 0) break;
    if (!checked.count(q)) return true;
  }
  return false;
}

}  // namespace genlab
