#pragma once

// Helpers shared by the fixture sources; not installed.

#include <functional>
#include <string>
#include <vector>

#include "genlab/fixtures.hpp"

namespace genlab::detail {

using TranscriptCheck = std::function<bool(const Transcript&)>;

// Plays each generator against `adversary` for seeds 0..seeds-1 and requires
// `ok` on every transcript. Fills detail with counts and the first miss.
RegimeOutcome sweep(const Fixture& f, const std::vector<std::string>& generators,
                    const std::string& adversary, const GameConfig& config, std::size_t seeds,
                    const VerifyOptions& opts, const TranscriptCheck& ok);

bool is_eventually_correct(const Transcript& tr);
bool fails_within_horizon(const Transcript& tr);

// Scans `budget` points of `candidates` for one inside the closure of
// `sample` and outside B(sample, radius). Returns the first such point.
std::optional<Point> find_valid_move(const HypothesisClass& cls, const Sample& sample,
                                     const Support& candidates, const Rat& radius,
                                     std::size_t budget);

Hypothesis make_hypothesis(std::string id, std::vector<Atom> atoms);

// A labeled point whose membership is decided by a set of index switches: it is
// in the support when any switch in `reach` is on. Unreached points cost
// min(pos, neg) when the class can still add them freely, else pos.
struct SwitchPoint {
  std::vector<Int> reach;
  std::size_t pos = 0, neg = 0;
  bool unreached_free = false;
};

// Minimum labeling cost over switch settings. Switches that only reach points
// preferring membership are turned on; the rest are searched exhaustively.
// Throws std::length_error past `cap` contested switches.
std::size_t min_switch_cost(const std::vector<SwitchPoint>& pts, std::size_t cap = 20);

}  // namespace genlab::detail
