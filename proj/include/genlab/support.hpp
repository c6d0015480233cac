#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "genlab/index_set.hpp"
#include "genlab/metric.hpp"
#include "genlab/point.hpp"

namespace genlab {

// One structured piece of a support.
//   Finite:  explicit points
//   Lattice: {a + m n : n in Z} as reals or atom ids
//   IntSet:  integers from an IndexSet, as reals or atom ids
//   Basis:   {scale * e_k : k in indices}
class Atom {
 public:
  enum class Kind { kFinite, kLattice, kIntSet, kBasis };

  static Atom finite(std::vector<Point> pts);
  static Atom lattice(Point::Kind pk, Int a, Int m);
  static Atom int_set(Point::Kind pk, IndexSet values);
  static Atom basis(QS2 scale, IndexSet indices);

  Kind kind() const { return kind_; }
  Point::Kind point_kind() const { return pk_; }
  const std::vector<Point>& points() const { return points_; }
  const Int& a() const { return a_; }
  const Int& m() const { return m_; }
  const IndexSet& indices() const { return idx_; }
  const QS2& scale() const { return scale_; }

  bool contains(const Point& p) const;
  bool is_empty() const;
  std::optional<bool> is_infinite() const;
  std::string format() const;

 private:
  Atom() : idx_(IndexSet::empty()) {}
  Kind kind_ = Kind::kFinite;
  Point::Kind pk_ = Point::Kind::kAtom;
  std::vector<Point> points_;
  Int a_, m_;
  IndexSet idx_;
  QS2 scale_;
};

Atom intersect(const Atom& x, const Atom& y);

// Natural-order enumeration of one atom.
class AtomCursor {
 public:
  explicit AtomCursor(Atom atom, std::size_t budget = 100000);
  std::optional<Point> next();

 private:
  Atom atom_;
  std::size_t budget_;
  std::size_t pos_ = 0;
  std::optional<Int> cur_;
  bool started_ = false;
  // lattice: next nonnegative member and next positive w with -w a member
  Int up_, down_;
};

struct SeparationWitness {
  enum class Kind {
    kSeparated,   // pairwise distance^2 >= separation_sq > (2 radius)^2
    kSingleton,   // discrete metric, radius < 1
    kOrthogonal,  // scale * e_k over infinitely many k, weight * scale^2 > radius^2
  };
  Kind kind = Kind::kSeparated;
  Atom family = Atom::finite({});
  QS2 separation_sq;
  Rat radius;
  Rat weight{1};

  std::string describe() const;
};

// Checks the kind condition and that `samples` enumerated family points are
// pairwise at squared distance >= separation_sq.
bool verify_witness(const Metric& m, const SeparationWitness& w, std::size_t samples = 12);

struct CoverResult {
  enum class Kind { kFinite, kInfinite, kUnknown };
  Kind kind = Kind::kFinite;
  std::size_t n = 0;   // finite value, or lower bound when unknown
  bool exact = true;   // false: n is an upper bound
  std::optional<SeparationWitness> witness;
  std::size_t budget = 0;

  static CoverResult finite(std::size_t n, bool exact = true) {
    return {Kind::kFinite, n, exact, std::nullopt, 0};
  }
  static CoverResult infinite(SeparationWitness w) {
    return {Kind::kInfinite, 0, true, std::move(w), 0};
  }
  static CoverResult unknown(std::size_t lower, std::size_t budget) {
    return {Kind::kUnknown, lower, false, std::nullopt, budget};
  }
  bool is_finite() const { return kind == Kind::kFinite; }
  bool is_infinite() const { return kind == Kind::kInfinite; }
};

std::string format_cover(const CoverResult& c);

class SupportCursor;

// Finite union of atoms.
class Support {
 public:
  Support() = default;
  explicit Support(std::vector<Atom> atoms);
  static Support of_points(std::vector<Point> pts) { return Support({Atom::finite(std::move(pts))}); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool contains(const Point& p) const;
  std::optional<bool> is_finite() const;
  bool is_empty() const { return atoms_.empty(); }

  // Round robin over atoms, skipping duplicates.
  std::vector<Point> enumerate(std::size_t n, std::size_t budget = 100000) const;
  SupportCursor cursor(std::size_t budget = 100000) const;
  // All points when finite.
  std::optional<std::vector<Point>> finite_points(std::size_t budget = 100000) const;

  CoverResult cover_number(const Metric& m, const Rat& radius,
                           std::size_t budget = 100000) const;

  Support intersect(const Support& o) const;
  Support unite(const Support& o) const;

  // One line per atom: "finite: <points>" or "family: <desc>".
  std::vector<std::string> format_lines() const;

 private:
  std::vector<Atom> atoms_;
};

class SupportCursor {
 public:
  SupportCursor(const Support& s, std::size_t budget);
  std::optional<Point> next();

 private:
  std::vector<AtomCursor> cursors_;
  std::vector<bool> done_;
  std::size_t turn_ = 0;
  std::set<Point, PointLess> emitted_;
};

// Parses the text after "finite:" or "family:".
Atom parse_atom_line(std::string_view line);

}  // namespace genlab
