#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "genlab/scalar.hpp"

namespace genlab {

struct AtomId {
  std::int64_t id = 0;
  bool operator==(const AtomId& o) const { return id == o.id; }
};

// Sparse vector in l2: strictly increasing positive indices, no zero coords.
struct SparseVec {
  std::vector<std::pair<Int, QS2>> coords;
  bool operator==(const SparseVec& o) const { return coords == o.coords; }
};

class Point {
 public:
  enum class Kind { kAtom = 0, kReal = 1, kVec = 2 };

  Point() : v_(AtomId{}) {}
  static Point atom(std::int64_t id) { return Point(AtomId{id}); }
  static Point real(Rat value) { return Point(std::move(value)); }
  static Point origin() { return Point(SparseVec{}); }
  // scale * e_k; zero scale gives the origin.
  static Point basis(const Int& k, const QS2& scale);
  // Sorts and drops zeros; throws ParseError on duplicate or nonpositive index.
  static Point vec(std::vector<std::pair<Int, QS2>> coords);

  Kind kind() const { return static_cast<Kind>(v_.index()); }
  std::int64_t atom_id() const { return std::get<AtomId>(v_).id; }
  const Rat& real_value() const { return std::get<Rat>(v_); }
  const SparseVec& vec_value() const { return std::get<SparseVec>(v_); }

  // For single-axis vectors: the axis index and coordinate.
  bool is_axis_point() const;
  const Int& axis() const { return vec_value().coords.front().first; }
  const QS2& axis_coord() const { return vec_value().coords.front().second; }

  bool operator==(const Point& o) const { return v_ == o.v_; }
  bool operator!=(const Point& o) const { return !(v_ == o.v_); }

 private:
  explicit Point(std::variant<AtomId, Rat, SparseVec> v) : v_(std::move(v)) {}
  std::variant<AtomId, Rat, SparseVec> v_;
};

// Structural total order, for ordered containers.
struct PointLess {
  bool operator()(const Point& p, const Point& q) const;
};

// Enumeration order: atoms and reals by (|v|, positive first);
// vectors by (max index, then coordinates lexicographically).
bool canonical_less(const Point& p, const Point& q);

std::string format_point(const Point& p);
Point parse_point(std::string_view text);

std::string format_points(const std::vector<Point>& pts);

// Removes exact duplicates, keeping first occurrences.
std::vector<Point> dedup_points(const std::vector<Point>& pts);

}  // namespace genlab
