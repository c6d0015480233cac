#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "genlab/game.hpp"

namespace genlab {

class FixtureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---- number helpers ----

// First `count` odd primes: 3, 5, 7, ...
std::vector<Int> odd_primes(std::size_t count);
// (p, n) with x = p^n, p an odd prime, n >= 1.
std::optional<std::pair<Int, unsigned long>> odd_prime_power(const Int& x);
// Every k >= 2 with k^n = x for some n >= 1 (x itself included when x >= 2).
std::vector<Int> integer_roots(const Int& x);

// ---- players and regimes ----

struct AdversaryPlan {
  std::unique_ptr<Adversary> adversary;
  CommitPolicy commit;
  // Set for obligated adversaries: the hypothesis whose support they enumerate.
  std::optional<Hypothesis> target;
};

using GeneratorFactory = std::function<std::unique_ptr<Generator>(const GameConfig&)>;
using AdversaryFactory = std::function<AdversaryPlan(const GameConfig&, std::uint64_t seed)>;

struct RegimeRow {
  std::string label;
  Rat gamma, gamma_prime;
  // eventually_correct | fails_within_horizon | no_valid_move | uniform_pass
  // | uniform_fail_nonuniform_pass | forced_errors | dimension_lower_bound | ...
  std::string expected;
  std::string note;
};

struct RegimeOutcome {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::size_t seeds = 20;
  std::size_t budget = 2000;
  // Every transcript produced while checking rows is appended here when set.
  std::vector<Transcript>* sink = nullptr;
};

struct FixtureSpec {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<RegimeRow> regimes;
};

struct Fixture {
  FixtureSpec spec;
  std::shared_ptr<const HypothesisClass> cls;
  Rat r;
  // Games on this fixture skip the r-UUS gate (recorded per fixture).
  bool uus_override = false;
  std::vector<std::pair<std::string, GeneratorFactory>> generators;
  std::vector<std::pair<std::string, AdversaryFactory>> adversaries;
  std::function<RegimeOutcome(const Fixture&, const RegimeRow&, const VerifyOptions&)> check;

  const GeneratorFactory& generator(const std::string& name) const;
  const AdversaryFactory& adversary(const std::string& name) const;
  GameConfig config(const Rat& eps, const Rat& eps_prime, std::size_t horizon,
                    std::size_t budget = 2000) const;
};

std::vector<RegimeOutcome> verify_fixture(const Fixture& f, const VerifyOptions& opts = {});

// One game with the named players.
Transcript play_fixture(const Fixture& f, const std::string& generator,
                        const std::string& adversary, const GameConfig& config,
                        std::uint64_t seed);

// ---- prime reals: supports A_p ∪ B on R ----

// A_p = {p^n} ∪ {p^n - 1} (n >= 1), B any set of positive even integers.
// With `fixed_prime` only hypotheses for that p belong to the class.
class PrimeRealsClass : public HypothesisClass {
 public:
  explicit PrimeRealsClass(std::optional<Int> fixed_prime = std::nullopt);
  std::string name() const override;
  const Metric& metric() const override { return metric_; }
  bool consistent(const Sample& s) const override;
  std::optional<Support> closure(const Sample& s) const override;
  std::size_t erm(const LabeledSample& s) const override;
  UusResult uus_check(const Rat& r) const override;

  static Support a_p(const Int& p);
  static bool in_a_p(const Int& p, const Point& x);
  // Members A_p ∪ B for p in `primes` and B ranging over subsets of `even_pool`.
  static ExplicitClass truncation(const std::vector<Int>& primes, const std::vector<Int>& even_pool);

 private:
  // Prime p with v in A_p, memoized.
  const std::optional<Int>& hint(const Int& v) const;

  struct IntHash {
    std::size_t operator()(const Int& v) const {
      return mpz_get_ui(v.get_mpz_t()) ^ (mpz_size(v.get_mpz_t()) << 56);
    }
  };
  std::optional<Int> fixed_;
  Metric metric_ = Metric::abs();
  mutable std::unordered_map<Int, std::optional<Int>, IntHash> hints_;
};

Fixture fixture_prime_reals(std::size_t prime_count = 40);

// ---- two hypotheses in l2 ----

Fixture fixture_two_hypotheses(const Rat& eps, const Rat& eps_prime, const Rat& r);
// The two-member class itself (h1: a_k and g_{2k}; h2: a_k and g_{2k+1}).
ExplicitClass two_hypotheses_class(const Rat& eps_prime, const Rat& r);

// ---- l2, first construction: {0} ∪ U_{I1} ∪ O_{I2} ∪ D_{I3} ----

struct Case1Params {
  Rat r{1}, eps{1, 2}, eps_prime{1, 2};
};

// u_k = 2r e_k, a_k = eps e_k, g_k = eps' e_k. I1, I3 range over infinite subsets
// of {1, 2, ...}; I2 over infinite subsets of {2, 3, ...}.
class Case1Class : public HypothesisClass {
 public:
  explicit Case1Class(Case1Params p);
  std::string name() const override { return "l2_case1"; }
  const Metric& metric() const override { return metric_; }
  bool consistent(const Sample& s) const override;
  std::optional<Support> closure(const Sample& s) const override;
  std::size_t erm(const LabeledSample& s) const override;
  UusResult uus_check(const Rat& r) const override;

  const Case1Params& params() const { return p_; }
  Point u(const Int& k) const;
  Point a(const Int& k) const;
  Point g(const Int& k) const;
  // I2 must be closed under positive powers so that {k^n : k in I2} = I2.
  Support target(const IndexSet& i1, const IndexSet& i2, const IndexSet& i3) const;
  // Members with I1 = {k >= 1} \ E1, I2 = {k >= 2} \ E2, I3 = {k >= 1} \ E3 for
  // every combination of exclusion sets from the pools (I2 need not be power-closed).
  ExplicitClass truncation(const std::vector<std::vector<Int>>& e1,
                           const std::vector<std::vector<Int>>& e2,
                           const std::vector<std::vector<Int>>& e3) const;

  enum class Role { kOrigin, kU, kA, kG, kInvalid };
  // For kU: k; kA: the j of a_{2j}; kG: the m of g_{2m+1}.
  std::pair<Role, Int> classify(const Point& x) const;

 private:
  Case1Params p_;
  QS2 su_, sa_, sg_;
  Metric metric_ = Metric::l2();
};

Fixture fixture_l2_case1(const Case1Params& p = {});

// ---- l2, second construction: O_{I1} ∪ D_{I2,J} ----

struct Case2Params {
  Rat r{1}, eps1{3, 10}, eps2{3, 5}, eps_prime{1, 2};
};

// u_k = 2r e_k, a_{k,i} = (sqrt2/2) eps_i e_k, g_k = (sqrt2/2) eps' e_k.
// I1 over infinite subsets of {2, 3, ...}, I2 infinite and J finite subsets of {1, 2, ...}.
class Case2Class : public HypothesisClass {
 public:
  explicit Case2Class(Case2Params p);
  std::string name() const override { return "l2_case2"; }
  const Metric& metric() const override { return metric_; }
  bool consistent(const Sample& s) const override;
  std::optional<Support> closure(const Sample& s) const override;
  std::size_t erm(const LabeledSample& s) const override;
  UusResult uus_check(const Rat& r) const override;

  const Case2Params& params() const { return p_; }
  Point u(const Int& k) const;
  Point a1(const Int& k) const;
  Point a2(const Int& k) const;
  Point g(const Int& k) const;
  // I1 must be closed under positive powers.
  Support target(const IndexSet& i1, const IndexSet& i2, const std::vector<Int>& j) const;
  // Members with I1 = {k >= 2} \ E1, I2 = {k >= 1} \ E2 and J from the pools.
  ExplicitClass truncation(const std::vector<std::vector<Int>>& e1,
                           const std::vector<std::vector<Int>>& e2,
                           const std::vector<std::vector<Int>>& j_pool) const;

  struct Roles {
    bool u = false, a = false, g = false;
    Int k;
  };
  Roles classify(const Point& x) const;

 private:
  Case2Params p_;
  Metric metric_ = Metric::l2();
};

Fixture fixture_l2_case2(const Case2Params& p = {});

// ---- weighted l2: supports ∪_m A_{m,I_m} ----

// a_{m,k} = (sqrt2 / 2^m) e_k for levels m = 1..levels;
// A_{m,I} = {a_{m, 2^n (2k+1)} : k in I, n >= 0}.
class WeightedClass : public HypothesisClass {
 public:
  WeightedClass(Metric metric, std::size_t levels);
  std::string name() const override;
  const Metric& metric() const override { return metric_; }
  bool consistent(const Sample& s) const override;
  std::optional<Support> closure(const Sample& s) const override;
  std::size_t erm(const LabeledSample& s) const override;
  UusResult uus_check(const Rat& r) const override;

  std::size_t levels() const { return levels_; }
  static Point a(std::size_t m, const Int& k);
  // (level, j) with the point a_{m, 2^n (2j+1)}, j >= 1.
  std::optional<std::pair<std::size_t, Int>> classify(const Point& x) const;
  Atom level_family(std::size_t m, const IndexSet& odd_index_set) const;

 private:
  Metric metric_;
  std::size_t levels_;
};

// rho: plain l2; rho': weight 1/4 on even coordinates, 1 on odd ones.
Metric weighted_rho_prime();
Fixture fixture_weighted_metric(std::size_t levels = 3);

// ---- countable-model embedding ----

struct EmbeddingSpec {
  // Discrete: x_j = atom j. Abs: x_j = spacing * j (spacing a positive integer).
  Metric target = Metric::discrete();
  Int spacing{1};
  Rat r{1, 2};
};

Point embed_point(const EmbeddingSpec& e, const Int& j);
std::optional<Int> embed_index(const EmbeddingSpec& e, const Point& x);
// Source supports use atom points, lattices or integer sets over Z.
// Throws PreconditionError for a finite source support and FixtureError when
// the family is not pairwise > r apart.
ExplicitClass embed_countable_class(const std::string& name, const std::vector<Hypothesis>& source,
                                    const EmbeddingSpec& e);

// {k >= lo} minus a finite set.
IndexSet cofinite(const Int& lo, const std::vector<Int>& excluded);
// {k^n : k in I, n >= 1} for I = {k >= 2} \ excluded.
IndexSet cofinite_power_closure(const std::vector<Int>& excluded);

// ---- registry ----

std::vector<std::string> fixture_names();
// Default parameters; throws FixtureError for an unknown name.
Fixture make_fixture(const std::string& name);
std::string describe_fixture(const Fixture& f);

}  // namespace genlab
