#include "genlab/hypothesis.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace genlab {

ExplicitClass::ExplicitClass(std::string name, Metric metric, std::vector<Hypothesis> members)
    : name_(std::move(name)), metric_(metric), members_(std::move(members)) {
  std::set<std::string> ids;
  for (const auto& h : members_) {
    if (!ids.insert(h.id).second) throw std::invalid_argument("duplicate hypothesis id " + h.id);
  }
}

const Hypothesis& ExplicitClass::member(const std::string& id) const {
  for (const auto& h : members_)
    if (h.id == id) return h;
  throw std::out_of_range("no hypothesis " + id);
}

std::vector<std::size_t> ExplicitClass::version_space(const Sample& s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const auto& sup = members_[i].support;
    if (std::all_of(s.begin(), s.end(), [&](const Point& p) { return sup.contains(p); })) {
      out.push_back(i);
    }
  }
  return out;
}

bool ExplicitClass::consistent(const Sample& s) const { return !version_space(s).empty(); }

std::optional<Support> ExplicitClass::closure(const Sample& s) const {
  auto vs = version_space(s);
  if (vs.empty()) return std::nullopt;
  Support acc = members_[vs[0]].support;
  for (std::size_t i = 1; i < vs.size(); ++i) acc = acc.intersect(members_[vs[i]].support);
  return acc;
}

std::size_t ExplicitClass::erm(const LabeledSample& s) const {
  std::size_t best = s.size();
  for (const auto& h : members_) {
    std::size_t errs = 0;
    for (const auto& [p, y] : s)
      if (h.support.contains(p) != y) ++errs;
    best = std::min(best, errs);
  }
  return best;
}

UusResult ExplicitClass::uus_check(const Rat& r) const {
  UusResult res;
  bool unknown = false;
  for (const auto& h : members_) {
    auto c = h.support.cover_number(metric_, r);
    if (c.is_infinite()) {
      res.witnesses.emplace_back(h.id, *c.witness);
    } else if (c.is_finite()) {
      res.kind = UusResult::Kind::kViolated;
      res.violator = h.id;
      return res;
    } else {
      unknown = true;
    }
  }
  res.kind = unknown ? UusResult::Kind::kUnknown : UusResult::Kind::kSatisfied;
  return res;
}

bool ExplicitClass::supports_within(const std::vector<Point>& ground) const {
  std::set<Point, PointLess> g(ground.begin(), ground.end());
  for (const auto& h : members_) {
    auto pts = h.support.finite_points();
    if (!pts) return false;
    for (const auto& p : *pts)
      if (!g.count(p)) return false;
  }
  return true;
}

ExplicitClass parse_class(std::string_view text, const std::string& name) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::optional<Metric> metric;
  std::vector<Hypothesis> members;
  std::vector<Atom> atoms;
  auto flush = [&]() {
    if (!members.empty()) members.back().support = Support(std::move(atoms));
    atoms.clear();
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::string body = line.substr(start);
    while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) body.pop_back();
    try {
      if (body.rfind("metric", 0) == 0) {
        metric = parse_metric(body);
      } else if (body.rfind("hypothesis ", 0) == 0) {
        flush();
        members.push_back({body.substr(11), Support()});
      } else if (body.rfind("finite:", 0) == 0 || body.rfind("family:", 0) == 0) {
        if (members.empty()) throw ParseError("support line before any hypothesis");
        atoms.push_back(parse_atom_line(body));
      } else {
        throw ParseError("unrecognised line '" + body + "'");
      }
    } catch (const std::exception& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  flush();
  if (!metric) throw ParseError("class file has no metric line");
  try {
    return ExplicitClass(name, *metric, std::move(members));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string format_class(const ExplicitClass& c) {
  std::string out = "metric " + format_metric(c.metric()) + "\n";
  for (const auto& h : c.members()) {
    out += "hypothesis " + h.id + "\n";
    for (const auto& l : h.support.format_lines()) out += l + "\n";
  }
  return out;
}

bool version_space_nonempty(const HypothesisClass& c, const Sample& s) { return c.consistent(s); }

std::optional<bool> closure_contains(const HypothesisClass& c, const Sample& s, const Point& p) {
  auto cl = c.closure(s);
  if (!cl) return std::nullopt;
  return cl->contains(p);
}

std::vector<Point> closure_enumerate(const HypothesisClass& c, const Sample& s, std::size_t n,
                                     std::size_t budget) {
  auto cl = c.closure(s);
  if (!cl) throw BotClosure();
  return cl->enumerate(n, budget);
}

std::optional<CoverResult> closure_cover(const HypothesisClass& c, const Sample& s,
                                         const Rat& radius, std::size_t budget) {
  auto cl = c.closure(s);
  if (!cl) return std::nullopt;
  return cl->cover_number(c.metric(), radius, budget);
}

std::size_t erm_oracle(const HypothesisClass& c, const LabeledSample& s) { return c.erm(s); }

bool closure_via_erm(const HypothesisClass& c, const Sample& positives, const Point& p) {
  if (!c.consistent(positives)) {
    throw PreconditionError("closure_via_erm needs a consistent positive sample");
  }
  LabeledSample s;
  for (const auto& x : positives) s.push_back({x, true});
  s.push_back({p, false});
  return c.erm(s) >= 1;
}

UusResult uus_check(const HypothesisClass& c, const Rat& r) { return c.uus_check(r); }

std::string format_dim(const DimResult& d) {
  switch (d.kind) {
    case DimResult::Kind::kFinite:
      return "finite d=" + std::to_string(d.d);
    case DimResult::Kind::kInfinite:
      return "infinite escalating=" + std::to_string(d.escalating.size());
    case DimResult::Kind::kLowerBound:
      return "lower_bound d=" + std::to_string(d.d) + " budget=" + std::to_string(d.budget);
  }
  return "";
}

namespace {

// Sequences of witness-family points with covering numbers 1..k.
std::vector<std::vector<Point>> escalate(const Metric& m, const SeparationWitness& w,
                                         const Rat& eps, std::size_t k) {
  auto pts = Support({w.family}).enumerate(k);
  std::vector<std::vector<Point>> out;
  for (std::size_t i = 1; i <= pts.size(); ++i) {
    std::vector<Point> seq(pts.begin(), pts.begin() + static_cast<long>(i));
    if (cover_count(m, seq, eps) != i) break;
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace

DimResult closure_dimension_finite(const ExplicitClass& c, const Rat& eps, const Rat& eps_prime,
                                   std::size_t escalate_to) {
  const auto& mem = c.members();
  if (mem.size() > 20) throw PreconditionError("finite formula takes at most 20 hypotheses");
  DimResult res;
  std::optional<DimResult> infinite;
  // Scores one member-subset intersection.
  auto consider = [&](const Support& cur) {
    auto wide = cur.cover_number(c.metric(), eps_prime);
    if (wide.kind == CoverResult::Kind::kUnknown) {
      throw UndecidableIntersection("eps' cover undecided for an intersection");
    }
    if (!wide.is_finite()) return;
    auto narrow = cur.cover_number(c.metric(), eps);
    if (narrow.is_infinite()) {
      DimResult inf;
      inf.kind = DimResult::Kind::kInfinite;
      inf.escalating = escalate(c.metric(), *narrow.witness, eps, escalate_to);
      infinite = inf;
      return;
    }
    if (!narrow.is_finite() || !narrow.exact) {
      throw UndecidableIntersection("eps cover undecided for an intersection");
    }
    if (narrow.n > res.d || res.witness.empty()) {
      res.d = std::max(res.d, narrow.n);
      res.witness = cur.enumerate(64);
    }
  };
  std::function<void(std::size_t, const Support&)> rec = [&](std::size_t start,
                                                             const Support& acc) {
    for (std::size_t i = start; i < mem.size() && !infinite; ++i) {
      Support cur = acc.intersect(mem[i].support);
      consider(cur);
      rec(i + 1, cur);
    }
  };
  for (std::size_t i = 0; i < mem.size() && !infinite; ++i) {
    consider(mem[i].support);
    rec(i + 1, mem[i].support);
  }
  if (infinite) return *infinite;
  return res;
}

DimResult closure_dimension_bruteforce(const HypothesisClass& c, const Rat& eps,
                                       const Rat& eps_prime, const std::vector<Point>& ground_in,
                                       std::size_t max_len) {
  auto ground = dedup_points(ground_in);
  DimResult res;
  res.kind = DimResult::Kind::kLowerBound;
  std::size_t evaluated = 0;
  bool have = false;
  auto evaluate = [&](const Sample& x) {
    ++evaluated;
    auto cov = closure_cover(c, x, eps_prime);
    if (!cov) return;
    if (cov->kind == CoverResult::Kind::kUnknown) {
      ++res.undecided;
      return;
    }
    if (!cov->is_finite()) return;
    std::size_t d = cover_count(c.metric(), x, eps);
    res.achieved.insert(d);
    if (!have || d > res.d) {
      res.d = d;
      res.witness = x;
      have = true;
    }
  };
  Sample cur;
  if (c.consistent(cur)) evaluate(cur);
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() >= max_len) return;
    for (std::size_t i = start; i < ground.size(); ++i) {
      cur.push_back(ground[i]);
      if (c.consistent(cur)) {
        evaluate(cur);
        rec(i + 1);
      }
      cur.pop_back();
    }
  };
  rec(0);
  res.budget = evaluated;
  bool exhaustive = max_len >= ground.size();
  if (exhaustive && res.undecided == 0 && c.supports_within(ground)) {
    res.kind = DimResult::Kind::kFinite;
  }
  return res;
}

}  // namespace genlab
