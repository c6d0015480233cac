#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "genlab/scalar.hpp"

namespace genlab {

// Immutable set of integers bounded below, with membership and ascending
// successor queries. Used for axis indices and for integer supports on R.
class IndexSet {
 public:
  enum class Kind {
    kAll, kResidue, kGeometric, kExplicit, kUnion, kIntersection, kAffine, kDyadic
  };

  // {n : n >= lo}
  static IndexSet all(Int lo);
  // {n >= lo : n = a mod m}, m > 0
  static IndexSet residue(Int a, Int m, Int lo);
  // {s q^n : n >= 0}, s >= 1, q >= 2
  static IndexSet geometric(Int s, Int q);
  // {k^n : n >= 1}
  static IndexSet powers(Int k) { return geometric(k, k); }
  static IndexSet explicit_set(std::vector<Int> values);
  static IndexSet empty() { return explicit_set({}); }
  static IndexSet union_of(std::vector<IndexSet> parts);
  // {mul i + add : i in inner}, mul > 0
  static IndexSet affine(Int mul, Int add, IndexSet inner);
  // {2^n o : n >= 0, o in odd_inner}; odd_inner holds positive odd numbers.
  static IndexSet dyadic(IndexSet odd_inner);
  // Normalizes the cases it can (all, residues via CRT, explicit filters).
  static IndexSet intersect(const IndexSet& x, const IndexSet& y);

  Kind kind() const;
  bool contains(const Int& n) const;
  // Least element > n. nullopt if none, or if `budget` candidate checks ran out
  // (only intersections consume budget).
  std::optional<Int> next_after(const Int& n, std::size_t budget = 100000) const;
  std::optional<Int> first(std::size_t budget = 100000) const;
  // Every element is >= lower().
  Int lower() const;
  // true / false when decidable, nullopt otherwise.
  std::optional<bool> is_infinite() const;
  // First n elements (fewer if the set runs out or the budget does).
  std::vector<Int> take(std::size_t n, std::size_t budget = 100000) const;

  // Infinite subset whose consecutive elements differ by more than `gap`,
  // paired with its least consecutive difference. nullopt when not derivable.
  std::optional<std::pair<IndexSet, Int>> thinned(const Rat& gap) const;

  std::string format() const;

  struct Node;

 private:
  explicit IndexSet(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// all[:lo] | evens | odds | residue:a/m[:lo] | powers:k | geom:s*q | explicit:1,2,3
// | union(x;y) | affine:mul,add(x) | dyadic(x)
IndexSet parse_index_set(std::string_view text);

// Solution x = a (mod m) of x = a1 (mod m1), x = a2 (mod m2); nullopt if incompatible.
std::optional<std::pair<Int, Int>> crt(const Int& a1, const Int& m1, const Int& a2, const Int& m2);

}  // namespace genlab
