#include "genlab/game.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace genlab {

void validate(const GameConfig& c) {
  if (c.eps <= 0 || c.eps > c.r) throw ConfigError("need 0 < eps <= r");
  if (c.eps_prime <= 0 || c.eps_prime > c.r) throw ConfigError("need 0 < eps' <= r");
}

Sample Transcript::reveals() const {
  Sample out;
  for (const auto& r : rounds) out.push_back(r.revealed);
  return out;
}

std::vector<Move> Transcript::moves() const {
  std::vector<Move> out;
  for (const auto& r : rounds) out.push_back(r.move);
  return out;
}

namespace {

// Fills member_ok for a candidate commitment; returns (clean suffix, errors).
std::pair<std::size_t, std::size_t> score_against(std::vector<Round>& rounds, const Support& h) {
  std::size_t errors = 0;
  for (auto& r : rounds) {
    if (r.move.is_emit()) r.member_ok = h.contains(r.move.point);
    if (r.is_error()) ++errors;
  }
  std::size_t suffix = 0;
  for (auto it = rounds.rbegin(); it != rounds.rend() && !it->is_error(); ++it) ++suffix;
  return {suffix, errors};
}

bool contains_all(const Support& h, const Sample& xs) {
  return std::all_of(xs.begin(), xs.end(), [&](const Point& p) { return h.contains(p); });
}

}  // namespace

Transcript run_game(const GameConfig& config, const HypothesisClass& cls, Adversary& adversary,
                    Generator& generator, const CommitPolicy& policy) {
  validate(config);
  if (!config.uus_override) {
    auto u = cls.uus_check(config.r);
    if (u.kind != UusResult::Kind::kSatisfied) {
      throw ConfigError("class " + cls.name() + " is not shown r-UUS at r=" + format_rat(config.r));
    }
  }
  Transcript tr;
  tr.config = config;
  tr.metric = cls.metric();
  tr.class_name = cls.name();
  tr.adversary = adversary.name();
  tr.generator = generator.name();
  Sample reveals;
  std::vector<Move> moves;
  CoverTracker cover(cls.metric(), config.eps);
  BallIndex novelty(cls.metric(), config.eps_prime);
  for (std::size_t t = 1; t <= config.horizon; ++t) {
    Point x = adversary.reveal(t, reveals, moves);
    reveals.push_back(x);
    tr.cover_profile.push_back(cover.add(x));
    novelty.add(x);
    Move mv = generator.step(reveals);
    moves.push_back(mv);
    Round r;
    r.t = t;
    r.revealed = x;
    r.move = mv;
    if (mv.is_emit()) r.novel_ok = !novelty.covers(mv.point);
    r.scored = mv.is_emit() || t >= config.abstain_scored_from;
    tr.rounds.push_back(std::move(r));
  }
  if (policy.upfront) {
    if (!contains_all(policy.upfront->support, reveals)) {
      throw AdversaryIllegalReveal("reveals leave the committed hypothesis " + policy.upfront->id);
    }
    tr.committed = policy.upfront->id;
    score_against(tr.rounds, policy.upfront->support);
    return tr;
  }
  if (!policy.candidates) throw ConfigError("commit policy has neither a hypothesis nor candidates");
  auto cands = policy.candidates(reveals);
  std::optional<std::size_t> best;
  std::pair<std::size_t, std::size_t> best_score{0, 0};
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!contains_all(cands[i].support, reveals)) continue;
    auto sc = score_against(tr.rounds, cands[i].support);
    bool better = !best || sc.first < best_score.first ||
                  (sc.first == best_score.first && sc.second > best_score.second);
    if (better) {
      best = i;
      best_score = sc;
    }
  }
  if (!best) throw AdversaryIllegalReveal("no offered hypothesis contains every reveal");
  tr.committed = cands[*best].id;
  score_against(tr.rounds, cands[*best].support);
  return tr;
}

std::string format_verdict(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::kEventuallyCorrect:
      return "eventually_correct t_star=" + std::to_string(v.t_star);
    case Verdict::Kind::kFailsWithinHorizon: {
      std::string s = "fails_within_horizon errors=" + std::to_string(v.error_rounds.size());
      if (!v.error_rounds.empty()) s += " last_error=" + std::to_string(v.error_rounds.back());
      return s;
    }
    case Verdict::Kind::kInconclusive:
      return "inconclusive reason=" + v.reason;
  }
  return "";
}

std::size_t clean_suffix(const Transcript& tr) {
  std::size_t n = 0;
  for (auto it = tr.rounds.rbegin(); it != tr.rounds.rend() && !it->is_error(); ++it) ++n;
  return n;
}

Verdict judge_limit(const Transcript& tr, const LimitPolicy& policy) {
  Verdict v;
  std::size_t T = tr.rounds.size();
  if (T == 0) {
    v.reason = "empty_transcript";
    return v;
  }
  for (const auto& r : tr.rounds)
    if (r.is_error()) v.error_rounds.push_back(r.t);
  std::size_t last = v.error_rounds.empty() ? 0 : v.error_rounds.back();
  if (last > 0 && Rat(last) > policy.fail_after * Rat(T)) {
    v.kind = Verdict::Kind::kFailsWithinHorizon;
    return v;
  }
  bool scored_after = std::any_of(tr.rounds.begin() + static_cast<long>(last), tr.rounds.end(),
                                  [](const Round& r) { return r.scored; });
  if (!scored_after) {
    v.reason = "no_scored_rounds";
    return v;
  }
  if (Rat(T - last) < policy.clean_suffix * Rat(T)) {
    v.reason = "short_clean_suffix";
    return v;
  }
  v.kind = Verdict::Kind::kEventuallyCorrect;
  v.t_star = last + 1;
  return v;
}

Verdict judge_uniform(const Transcript& tr, std::size_t d_star) {
  Verdict v;
  auto it = std::find_if(tr.cover_profile.begin(), tr.cover_profile.end(),
                         [&](std::size_t c) { return c >= d_star; });
  if (it == tr.cover_profile.end()) {
    v.reason = "threshold_not_reached";
    return v;
  }
  std::size_t t0 = static_cast<std::size_t>(it - tr.cover_profile.begin()) + 1;
  for (const auto& r : tr.rounds)
    if (r.t >= t0 && !r.passes()) v.error_rounds.push_back(r.t);
  if (!v.error_rounds.empty()) {
    v.kind = Verdict::Kind::kFailsWithinHorizon;
    return v;
  }
  v.kind = Verdict::Kind::kEventuallyCorrect;
  v.t_star = t0;
  return v;
}

Verdict judge_nonuniform(const Transcript& tr, std::size_t d_h) { return judge_uniform(tr, d_h); }

bool check_cover_obligation(const Transcript& tr, const Support& h, const Rat& eps,
                            std::size_t truncation_budget) {
  BallIndex ball(tr.metric, eps);
  for (const auto& r : tr.rounds) ball.add(r.revealed);
  for (const auto& p : h.enumerate(truncation_budget))
    if (!ball.covers(p)) return false;
  return true;
}

std::vector<std::optional<bool>> replay_novelty(const Transcript& tr, const Rat& delta_prime) {
  if (delta_prime > tr.config.eps_prime) throw ConfigError("replay radius exceeds eps'");
  BallIndex ball(tr.metric, delta_prime);
  std::vector<std::optional<bool>> out;
  for (const auto& r : tr.rounds) {
    ball.add(r.revealed);
    if (r.move.is_emit()) out.emplace_back(!ball.covers(r.move.point));
    else out.emplace_back(std::nullopt);
  }
  return out;
}

std::vector<std::size_t> cover_profile_at(const Transcript& tr, const Rat& radius) {
  CoverTracker cover(tr.metric, radius);
  std::vector<std::size_t> out;
  for (const auto& r : tr.rounds) out.push_back(cover.add(r.revealed));
  return out;
}

TransferReplay replay_metric_transfer(const Transcript& tr, const Metric& rho1, const Rat& M) {
  if (M <= 0) throw ConfigError("scale bound must be positive");
  Sample pts;
  for (const auto& r : tr.rounds) {
    pts.push_back(r.revealed);
    if (r.move.is_emit()) pts.push_back(r.move.point);
  }
  pts = dedup_points(pts);
  Rat m2 = M * M;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      QS2 d2 = dist_sq(tr.metric, pts[i], pts[j]);
      QS2 d1 = dist_sq(rho1, pts[i], pts[j]);
      if (compare(d2, d1 * m2) > 0) throw ScaleBoundViolation(pts[i], pts[j]);
    }
  }
  TransferReplay out;
  BallIndex ball(rho1, tr.config.eps_prime / M);
  for (const auto& r : tr.rounds) {
    ball.add(r.revealed);
    if (!r.move.is_emit()) {
      out.flags.emplace_back(std::nullopt);
      continue;
    }
    bool novel = !ball.covers(r.move.point);
    out.flags.emplace_back(novel);
    if (*r.novel_ok && !novel) ++out.violations;
  }
  return out;
}

namespace {

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '%') out += "%25";
    else if (c == ' ') out += "%20";
    else out += c;
  }
  return out;
}

std::string unesc(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.compare(i, 3, "%20") == 0) {
      out += ' ';
      i += 2;
    } else if (s.compare(i, 3, "%25") == 0) {
      out += '%';
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string flag(const std::optional<bool>& b) { return !b ? "-" : (*b ? "1" : "0"); }

std::optional<bool> parse_flag(const std::string& s) {
  if (s == "-") return std::nullopt;
  if (s == "1") return true;
  if (s == "0") return false;
  throw ParseError("bad flag '" + s + "'");
}

std::map<std::string, std::string> fields(const std::string& line) {
  std::map<std::string, std::string> out;
  std::istringstream in(line);
  std::string tok;
  in >> tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value, got '" + tok + "'");
    out[tok.substr(0, eq)] = unesc(tok.substr(eq + 1));
  }
  return out;
}

const std::string& need(const std::map<std::string, std::string>& f, const std::string& k) {
  auto it = f.find(k);
  if (it == f.end()) throw ParseError("missing field '" + k + "'");
  return it->second;
}

std::size_t to_size(const std::string& s) {
  Int v = parse_int(s);
  if (v < 0 || !v.fits_ulong_p()) throw ParseError("bad count '" + s + "'");
  return v.get_ui();
}

}  // namespace

std::string write_transcript(const Transcript& tr,
                             const std::vector<std::pair<std::string, Verdict>>& verdicts) {
  std::ostringstream out;
  const auto& c = tr.config;
  out << "header format=1 class=" << esc(tr.class_name) << " adversary=" << esc(tr.adversary)
      << " generator=" << esc(tr.generator) << " metric=" << esc(format_metric(tr.metric))
      << " eps=" << format_rat(c.eps) << " eps_prime=" << format_rat(c.eps_prime)
      << " r=" << format_rat(c.r) << " horizon=" << c.horizon << " seed=" << c.seed
      << " budget=" << c.budget << " abstain_scored_from=" << c.abstain_scored_from
      << " uus_override=" << (c.uus_override ? 1 : 0) << "\n";
  for (std::size_t i = 0; i < tr.rounds.size(); ++i) {
    const auto& r = tr.rounds[i];
    out << "round t=" << r.t << " revealed=" << format_point(r.revealed)
        << " move=" << esc(format_move(r.move)) << " member=" << flag(r.member_ok)
        << " novel=" << flag(r.novel_ok) << " scored=" << (r.scored ? 1 : 0)
        << " cover=" << tr.cover_profile[i] << "\n";
  }
  std::size_t errors = 0;
  for (const auto& r : tr.rounds) errors += r.is_error();
  out << "summary committed=" << esc(tr.committed) << " rounds=" << tr.rounds.size()
      << " errors=" << errors << " clean_suffix=" << clean_suffix(tr);
  for (const auto& [name, v] : verdicts) out << " " << name << "=" << esc(format_verdict(v));
  out << "\n";
  return out.str();
}

Transcript read_transcript(std::string_view text) {
  Transcript tr;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto f = fields(line);
      if (line.rfind("header", 0) == 0) {
        header = true;
        tr.class_name = need(f, "class");
        tr.adversary = need(f, "adversary");
        tr.generator = need(f, "generator");
        tr.metric = parse_metric(need(f, "metric"));
        tr.config.eps = parse_rat(need(f, "eps"));
        tr.config.eps_prime = parse_rat(need(f, "eps_prime"));
        tr.config.r = parse_rat(need(f, "r"));
        tr.config.horizon = to_size(need(f, "horizon"));
        tr.config.seed = to_size(need(f, "seed"));
        tr.config.budget = to_size(need(f, "budget"));
        tr.config.abstain_scored_from = to_size(need(f, "abstain_scored_from"));
        tr.config.uus_override = need(f, "uus_override") == "1";
      } else if (line.rfind("round", 0) == 0) {
        Round r;
        r.t = to_size(need(f, "t"));
        r.revealed = parse_point(need(f, "revealed"));
        r.move = parse_move(need(f, "move"));
        r.member_ok = parse_flag(need(f, "member"));
        r.novel_ok = parse_flag(need(f, "novel"));
        r.scored = need(f, "scored") == "1";
        tr.rounds.push_back(std::move(r));
        tr.cover_profile.push_back(to_size(need(f, "cover")));
      } else if (line.rfind("summary", 0) == 0) {
        tr.committed = need(f, "committed");
      } else {
        throw ParseError("unknown record");
      }
    } catch (const std::exception& e) {
      throw ParseError("transcript line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!header) throw ParseError("transcript has no header");
  return tr;
}

}  // namespace genlab
