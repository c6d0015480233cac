#pragma once

#include <map>
#include <set>
#include <vector>

#include "genlab/metric.hpp"

namespace genlab {

// Answers in_set_ball(points, radius, p) for a growing point set.
class BallIndex {
 public:
  BallIndex(Metric m, Rat radius);
  void add(const Point& p);
  bool covers(const Point& p) const;
  std::size_t size() const { return count_; }

 private:
  struct NormLess {
    bool operator()(const QS2& x, const QS2& y) const { return compare(x, y) < 0; }
  };
  Metric metric_;
  Rat radius_;
  QS2 r2_;
  std::size_t count_ = 0;
  std::set<Rat> reals_;
  std::set<Point, PointLess> exact_;
  // vectors: by weighted squared norm, and by axis
  std::multimap<QS2, Point, NormLess> by_norm_;
  std::map<Int, std::vector<Point>> by_axis_;
};

}  // namespace genlab
