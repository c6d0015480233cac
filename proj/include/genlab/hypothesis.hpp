#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "genlab/support.hpp"

namespace genlab {

using Sample = std::vector<Point>;

struct Labeled {
  Point point;
  bool label = true;
};
using LabeledSample = std::vector<Labeled>;

struct Hypothesis {
  std::string id;
  Support support;
};

class BotClosure : public std::runtime_error {
 public:
  BotClosure() : std::runtime_error("closure of an inconsistent sample") {}
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UndecidableIntersection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UusResult {
  enum class Kind { kSatisfied, kViolated, kUnknown };
  Kind kind = Kind::kUnknown;
  std::vector<std::pair<std::string, SeparationWitness>> witnesses;
  std::string violator;
};

class HypothesisClass {
 public:
  virtual ~HypothesisClass() = default;
  virtual std::string name() const = 0;
  virtual const Metric& metric() const = 0;
  // Version space nonempty.
  virtual bool consistent(const Sample& s) const = 0;
  // Intersection of consistent supports; nullopt is the bottom closure.
  virtual std::optional<Support> closure(const Sample& s) const = 0;
  // min over h of sum 1{h(x) != y}
  virtual std::size_t erm(const LabeledSample& s) const = 0;
  virtual UusResult uus_check(const Rat& r) const = 0;
  // True when every support is finite and contained in `ground`, so a search
  // over subsets of `ground` sees every generatable sequence.
  virtual bool supports_within(const std::vector<Point>& /*ground*/) const { return false; }
};

class ExplicitClass : public HypothesisClass {
 public:
  ExplicitClass(std::string name, Metric metric, std::vector<Hypothesis> members);

  std::string name() const override { return name_; }
  const Metric& metric() const override { return metric_; }
  bool consistent(const Sample& s) const override;
  std::optional<Support> closure(const Sample& s) const override;
  std::size_t erm(const LabeledSample& s) const override;
  UusResult uus_check(const Rat& r) const override;
  bool supports_within(const std::vector<Point>& ground) const override;

  const std::vector<Hypothesis>& members() const { return members_; }
  const Hypothesis& member(const std::string& id) const;
  std::vector<std::size_t> version_space(const Sample& s) const;

 private:
  std::string name_;
  Metric metric_;
  std::vector<Hypothesis> members_;
};

// Text format: "metric <m>", then blocks "hypothesis <id>" with support lines.
ExplicitClass parse_class(std::string_view text, const std::string& name = "class");
std::string format_class(const ExplicitClass& c);

bool version_space_nonempty(const HypothesisClass& c, const Sample& s);
// nullopt is Bot.
std::optional<bool> closure_contains(const HypothesisClass& c, const Sample& s, const Point& p);
std::vector<Point> closure_enumerate(const HypothesisClass& c, const Sample& s, std::size_t n,
                                     std::size_t budget = 100000);
std::optional<CoverResult> closure_cover(const HypothesisClass& c, const Sample& s,
                                         const Rat& radius, std::size_t budget = 100000);
std::size_t erm_oracle(const HypothesisClass& c, const LabeledSample& s);
bool closure_via_erm(const HypothesisClass& c, const Sample& positives, const Point& p);
UusResult uus_check(const HypothesisClass& c, const Rat& r);

struct DimResult {
  enum class Kind { kFinite, kInfinite, kLowerBound };
  Kind kind = Kind::kFinite;
  std::size_t d = 0;
  std::vector<Point> witness;
  // Infinite: sequences with covering numbers 1, 2, ...
  std::vector<std::vector<Point>> escalating;
  std::size_t budget = 0;
  // Brute force: every covering value met by a qualifying sequence.
  std::set<std::size_t> achieved;
  // Brute force: sequences whose closure cover could not be decided.
  std::size_t undecided = 0;
};

std::string format_dim(const DimResult& d);

// Finite-class formula: max over member subsets A with finite eps'-cover of
// the intersection of the eps-cover of that intersection.
DimResult closure_dimension_finite(const ExplicitClass& c, const Rat& eps, const Rat& eps_prime,
                                   std::size_t escalate_to = 8);

// Search over subsets of `ground` of size <= max_len.
DimResult closure_dimension_bruteforce(const HypothesisClass& c, const Rat& eps,
                                       const Rat& eps_prime, const std::vector<Point>& ground,
                                       std::size_t max_len);

}  // namespace genlab
