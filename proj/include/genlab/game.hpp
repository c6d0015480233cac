#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "genlab/players.hpp"

namespace genlab {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class AdversaryIllegalReveal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScaleBoundViolation : public std::runtime_error {
 public:
  ScaleBoundViolation(const Point& p, const Point& q)
      : std::runtime_error("scale bound fails on " + format_point(p) + " " + format_point(q)),
        first(p),
        second(q) {}
  Point first, second;
};

struct GameConfig {
  Rat eps{1};
  Rat eps_prime{1};
  Rat r{1};
  std::size_t horizon = 10;
  std::uint64_t seed = 0;
  std::size_t budget = 2000;
  // Abstains at rounds >= this are scored as errors.
  std::size_t abstain_scored_from = 1;
  bool uus_override = false;
};

void validate(const GameConfig& c);

struct Round {
  std::size_t t = 0;
  Point revealed;
  Move move;
  std::optional<bool> member_ok;
  std::optional<bool> novel_ok;
  bool scored = false;

  bool passes() const { return move.is_emit() && *member_ok && *novel_ok; }
  bool is_error() const { return scored && !passes(); }
};

struct Transcript {
  GameConfig config;
  Metric metric;
  std::string class_name, adversary, generator;
  std::string committed;
  std::vector<Round> rounds;
  std::vector<std::size_t> cover_profile;  // N(eps; x_1..x_t), running max

  Sample reveals() const;
  std::vector<Move> moves() const;
};

// Upfront: fixed hypothesis. Deferred: candidates offered at the horizon from
// the reveals; the engine keeps those containing every reveal and picks the one
// with the shortest clean suffix, then most errors, then lowest index.
struct CommitPolicy {
  std::optional<Hypothesis> upfront;
  std::function<std::vector<Hypothesis>(const Sample&)> candidates;

  static CommitPolicy fixed(Hypothesis h) { return {std::move(h), nullptr}; }
  static CommitPolicy deferred(std::function<std::vector<Hypothesis>(const Sample&)> f) {
    return {std::nullopt, std::move(f)};
  }
};

Transcript run_game(const GameConfig& config, const HypothesisClass& cls, Adversary& adversary,
                    Generator& generator, const CommitPolicy& policy);

struct Verdict {
  enum class Kind { kEventuallyCorrect, kFailsWithinHorizon, kInconclusive };
  Kind kind = Kind::kInconclusive;
  std::size_t t_star = 0;
  std::vector<std::size_t> error_rounds;
  std::string reason;
};

std::string format_verdict(const Verdict& v);

struct LimitPolicy {
  // errors after fail_after * T count as persisting
  Rat fail_after{3, 4};
  // a clean suffix of at least clean_suffix * T rounds
  Rat clean_suffix{1, 2};
};

Verdict judge_limit(const Transcript& tr, const LimitPolicy& policy = {});
Verdict judge_uniform(const Transcript& tr, std::size_t d_star);
Verdict judge_nonuniform(const Transcript& tr, std::size_t d_h);

// Longest run of passing rounds at the end of the transcript (abstains break it).
std::size_t clean_suffix(const Transcript& tr);

bool check_cover_obligation(const Transcript& tr, const Support& h, const Rat& eps,
                            std::size_t truncation_budget);

// Novelty recomputed at delta' <= eps'. nullopt for abstains.
std::vector<std::optional<bool>> replay_novelty(const Transcript& tr, const Rat& delta_prime);

// Running-max cover profile at another radius.
std::vector<std::size_t> cover_profile_at(const Transcript& tr, const Rat& radius);

struct TransferReplay {
  std::vector<std::optional<bool>> flags;  // novelty at eps'/M under rho1
  std::size_t violations = 0;              // rounds novel under rho2 but not under rho1
};

// The transcript's metric is rho2; checks rho2 <= M rho1 on every pair of
// transcript points (throws ScaleBoundViolation) before recomputing novelty.
TransferReplay replay_metric_transfer(const Transcript& tr, const Metric& rho1, const Rat& M);

// Line records: header, one per round, summary.
std::string write_transcript(const Transcript& tr,
                             const std::vector<std::pair<std::string, Verdict>>& verdicts = {});
Transcript read_transcript(std::string_view text);

}  // namespace genlab
