#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "genlab/ball_index.hpp"
#include "genlab/hypothesis.hpp"

namespace genlab {

struct Move {
  enum class Kind { kEmit, kAbstain };
  Kind kind = Kind::kAbstain;
  Point point;
  // Why an abstain happened: "threshold", "bot", "budget", or empty.
  std::string note;

  static Move emit(Point p) { return {Kind::kEmit, std::move(p), ""}; }
  static Move abstain(std::string why = "") { return {Kind::kAbstain, Point(), std::move(why)}; }
  bool is_emit() const { return kind == Kind::kEmit; }
};

std::string format_move(const Move& m);
Move parse_move(std::string_view text);

// ---- generators ----

class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::string name() const = 0;
  // Called once per round with every reveal so far (never anything later).
  virtual Move step(const Sample& seen) = 0;
};

// Incremental N(eps; seen) over a growing reveal list.
class SeenCover {
 public:
  SeenCover(Metric m, Rat eps) : tracker_(m, std::move(eps)) {}
  std::size_t update(const Sample& seen);

 private:
  CoverTracker tracker_;
  std::size_t consumed_ = 0;
};

// Incremental B(seen, radius).
class SeenBall {
 public:
  SeenBall(Metric m, Rat radius) : index_(m, std::move(radius)) {}
  const BallIndex& update(const Sample& seen);

 private:
  BallIndex index_;
  std::size_t consumed_ = 0;
};

// Abstains until N(eps; seen) >= d_star, then emits the first closure point
// outside B(seen, eps').
class UniformGenerator : public Generator {
 public:
  UniformGenerator(std::shared_ptr<const HypothesisClass> cls, Rat eps, Rat eps_prime,
                   std::size_t d_star, std::size_t budget);
  std::string name() const override;
  Move step(const Sample& seen) override;

 private:
  std::shared_ptr<const HypothesisClass> cls_;
  std::size_t d_star_, budget_;
  SeenCover cover_;
  SeenBall ball_;
};

// Ladder H_1 ⊆ H_2 ⊆ ...; level n_t = max{n <= t : thresholds[n-1] <= N(eps; seen)}.
class NonUniformGenerator : public Generator {
 public:
  NonUniformGenerator(std::vector<std::shared_ptr<const HypothesisClass>> ladder,
                      std::vector<std::size_t> thresholds, Rat eps, Rat eps_prime,
                      std::size_t budget);
  std::string name() const override { return "nonuniform"; }
  Move step(const Sample& seen) override;
  std::size_t last_level() const { return last_level_; }

 private:
  std::vector<std::shared_ptr<const HypothesisClass>> ladder_;
  std::vector<std::size_t> thresholds_;
  std::size_t budget_;
  std::size_t last_level_ = 0;
  SeenCover cover_;
  SeenBall ball_;
};

// thresholds[n] = closure_dimension_finite(H_{n+1}) + 1
std::vector<std::size_t> ladder_thresholds(const std::vector<std::shared_ptr<const ExplicitClass>>& ladder,
                                           const Rat& eps, const Rat& eps_prime);

// Generation in the limit over classes H_1..H_n with c = max closure dimension.
class LimitGenerator : public Generator {
 public:
  LimitGenerator(std::vector<std::shared_ptr<const HypothesisClass>> classes, Rat eps,
                 Rat eps_prime, std::size_t c, std::size_t budget);
  std::string name() const override { return "limit"; }
  Move step(const Sample& seen) override;

  std::optional<std::size_t> t_star() const { return t_star_; }
  const std::vector<std::size_t>& survivors() const { return survivors_; }
  // counter for class i (0 when not a survivor)
  std::size_t counter(std::size_t i) const;
  std::optional<std::size_t> chosen() const { return chosen_; }

 private:
  struct Enum {
    std::size_t index;
    SupportCursor cursor;
    std::vector<Point> cache;
    bool exhausted = false;
    std::size_t count = 0;
  };
  const Point* fetch(Enum& e, std::size_t j);

  std::vector<std::shared_ptr<const HypothesisClass>> classes_;
  Rat eps_;
  std::size_t c_, budget_;
  std::optional<std::size_t> t_star_;
  std::vector<std::size_t> survivors_;
  std::vector<Enum> enums_;
  std::optional<std::size_t> chosen_;
  SeenCover cover_;
  SeenBall near_;   // eps
  SeenBall novel_;  // eps'
};

// Scans the dense sequence; emits the first point outside B(seen, eps') whose
// negative label forces an ERM error. Abstains below d_star or on budget.
class ErmSearchGenerator : public Generator {
 public:
  ErmSearchGenerator(std::shared_ptr<const HypothesisClass> cls, Rat eps, Rat eps_prime,
                     Support dense, std::size_t budget, std::size_t d_star = 0);
  std::string name() const override { return "erm_search"; }
  Move step(const Sample& seen) override;
  std::size_t erm_calls() const { return erm_calls_; }

 private:
  std::shared_ptr<const HypothesisClass> cls_;
  Support dense_;
  std::size_t budget_, d_star_;
  std::size_t erm_calls_ = 0;
  SeenCover cover_;
  SeenBall ball_;
};

class AbstainGenerator : public Generator {
 public:
  std::string name() const override { return "abstain"; }
  Move step(const Sample&) override { return Move::abstain("threshold"); }
};

// Generator from a plain function of the reveals.
class FunctionGenerator : public Generator {
 public:
  FunctionGenerator(std::string name, std::function<Move(const Sample&)> f)
      : name_(std::move(name)), f_(std::move(f)) {}
  std::string name() const override { return name_; }
  Move step(const Sample& seen) override { return f_(seen); }

 private:
  std::string name_;
  std::function<Move(const Sample&)> f_;
};

// ---- adversaries ----

class BaseExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string name() const = 0;
  // Reveal for round t (1-based); `moves` holds the generator's moves of rounds < t.
  virtual Point reveal(std::size_t t, const Sample& reveals, const std::vector<Move>& moves) = 0;
};

// Support enumeration, optionally shuffled inside blocks, after an injected prefix.
// A finite support is replayed from the start once exhausted.
class EnumerationAdversary : public Adversary {
 public:
  EnumerationAdversary(Support support, std::uint64_t seed = 0, std::size_t block = 1,
                       Sample prefix = {}, std::size_t budget = 100000);
  std::string name() const override { return "enumeration"; }
  Point reveal(std::size_t t, const Sample& reveals, const std::vector<Move>& moves) override;

 private:
  void refill();
  Support support_;
  std::mt19937_64 rng_;
  std::size_t block_, budget_;
  Sample prefix_;
  std::size_t prefix_pos_ = 0;
  std::optional<SupportCursor> cursor_;
  std::vector<Point> pending_;
  std::size_t pending_pos_ = 0;
};

class ScriptedAdversary : public Adversary {
 public:
  // After the script ends the last point repeats.
  explicit ScriptedAdversary(Sample script) : script_(std::move(script)) {}
  std::string name() const override { return "scripted"; }
  Point reveal(std::size_t t, const Sample&, const std::vector<Move>&) override;

 private:
  Sample script_;
};

// Replays the first m base points, then reveals the least-index later base
// point outside B(previous reveals and all generator outputs, eps').
class TrapAdversary : public Adversary {
 public:
  TrapAdversary(Metric m, std::function<Point(std::size_t)> base, std::size_t prefix_m,
                Rat eps_prime, std::size_t budget);
  std::string name() const override { return "trap"; }
  Point reveal(std::size_t t, const Sample& reveals, const std::vector<Move>& moves) override;
  // 1-based base indices revealed so far.
  const std::vector<std::size_t>& picks() const { return picks_; }

 private:
  Metric metric_;
  std::function<Point(std::size_t)> base_;
  std::size_t m_, budget_;
  std::vector<std::size_t> picks_;
  BallIndex picked_ball_;
  BallIndex output_ball_;
  std::size_t moves_seen_ = 0;
};

struct StagedRows {
  Sample anchors;                                              // y_1..y_k
  std::function<Point(std::size_t m)> stage_head;              // x_{0m}
  std::function<Point(std::size_t m, std::size_t j)> row;      // x_{mj}, j >= 1
  std::function<bool(std::size_t m, const Point& p)> in_protected;  // p in A_m
};

// Anchors first; at stage m reveals x_{0m}, then x_{m1}, x_{m2}, ... until the
// generator's last output lands in A_m, then moves to stage m+1.
class StagedTrapAdversary : public Adversary {
 public:
  StagedTrapAdversary(StagedRows rows, std::size_t stage_budget);
  std::string name() const override { return "staged_trap"; }
  Point reveal(std::size_t t, const Sample& reveals, const std::vector<Move>& moves) override;
  std::size_t stage() const { return stage_; }
  // Set once some stage ran past its budget without a hit.
  bool stalled() const { return stalled_; }

 private:
  StagedRows rows_;
  std::size_t budget_;
  std::size_t anchor_pos_ = 0;
  std::size_t stage_ = 1;
  std::size_t j_ = 0;
  bool stalled_ = false;
};

}  // namespace genlab
