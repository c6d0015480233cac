#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "genlab/point.hpp"
#include "genlab/scalar.hpp"

namespace genlab {

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UncoverableTarget : public std::runtime_error {
 public:
  explicit UncoverableTarget(const Point& p)
      : std::runtime_error("uncoverable target " + format_point(p)), target(p) {}
  Point target;
};

struct Metric {
  enum class Kind { kDiscrete, kAbs, kL2, kWeightedL2 };

  Kind kind = Kind::kAbs;
  // Weighted l2: coordinate k contributes w_k (x_k - y_k)^2.
  Rat even_weight{1};
  Rat odd_weight{1};

  static Metric discrete() { return {Kind::kDiscrete, Rat(1), Rat(1)}; }
  static Metric abs() { return {Kind::kAbs, Rat(1), Rat(1)}; }
  static Metric l2() { return {Kind::kL2, Rat(1), Rat(1)}; }
  static Metric weighted_l2(Rat even, Rat odd);

  Point::Kind point_kind() const;
  const Rat& weight(const Int& index) const;
  Rat min_weight() const;
  Rat max_weight() const;
  bool operator==(const Metric& o) const {
    return kind == o.kind && even_weight == o.even_weight && odd_weight == o.odd_weight;
  }
};

enum class Ordering { kLess, kEqual, kGreater };

std::string format_metric(const Metric& m);
// "discrete", "abs", "l2" or "wl2 even=<q> odd=<q>" (optionally prefixed by "metric ").
Metric parse_metric(std::string_view text);

// Exact squared distance; throws MetricError on a kind mismatch.
QS2 dist_sq(const Metric& m, const Point& p, const Point& q);
Ordering dist_cmp(const Metric& m, const Point& p, const Point& q, const Rat& radius);
bool in_ball(const Metric& m, const Point& center, const Rat& radius, const Point& p);
bool in_set_ball(const Metric& m, const std::vector<Point>& set, const Rat& radius,
                 const Point& p);

// Minimum number of candidate-centred closed balls covering the targets.
std::size_t covering_number_exact(const Metric& m, const std::vector<Point>& targets,
                                  const Rat& radius, const std::vector<Point>& candidates);
std::size_t covering_number_greedy(const Metric& m, const std::vector<Point>& targets,
                                   const Rat& radius, const std::vector<Point>& candidates);
// Greedy subset (input order) with pairwise distance > 2 radius.
std::size_t packing_greedy(const Metric& m, const std::vector<Point>& points, const Rat& radius);

// Exact covering number on the real line with centres anywhere in R.
std::size_t line_cover_exact(const std::vector<Rat>& values, const Rat& radius);

// Covering number used for game quantities: exact external count on R and
// for the discrete metric, exact internal count on (weighted) l2.
std::size_t cover_count(const Metric& m, const std::vector<Point>& points, const Rat& radius);

// Incremental N(radius; prefix) for a growing prefix. Vector metrics report
// the running maximum of the internal count.
class CoverTracker {
 public:
  CoverTracker(Metric m, Rat radius);
  std::size_t add(const Point& p);
  std::size_t value() const { return value_; }
  std::size_t size() const { return count_; }

 private:
  struct Component {
    std::vector<Point> points;
    std::vector<std::vector<std::size_t>> balls;  // point -> points in its radius ball
    std::size_t cover = 0;
  };
  Metric metric_;
  Rat radius_;
  std::size_t count_ = 0;
  std::size_t value_ = 0;
  std::vector<Point> distinct_;
  std::vector<Rat> reals_;
  std::vector<Component> comps_;
  std::size_t comp_sum_ = 0;
};

}  // namespace genlab
