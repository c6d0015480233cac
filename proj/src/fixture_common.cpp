#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "genlab/fixtures.hpp"
#include "fixture_util.hpp"

namespace genlab {

std::vector<Int> odd_primes(std::size_t count) {
  std::vector<Int> out;
  Int p = 3;
  while (out.size() < count) {
    if (mpz_probab_prime_p(p.get_mpz_t(), 30) > 0) out.push_back(p);
    p += 2;
  }
  return out;
}

std::optional<std::pair<Int, unsigned long>> odd_prime_power(const Int& x) {
  if (x < 3 || mpz_even_p(x.get_mpz_t())) return std::nullopt;
  unsigned long bits = mpz_sizeinbase(x.get_mpz_t(), 2);
  for (unsigned long n = 1; n <= bits; ++n) {
    Int root;
    if (mpz_root(root.get_mpz_t(), x.get_mpz_t(), n) == 0) continue;
    if (mpz_probab_prime_p(root.get_mpz_t(), 30) > 0) return std::make_pair(root, n);
  }
  return std::nullopt;
}

std::vector<Int> integer_roots(const Int& x) {
  static std::mutex mu;
  static std::map<Int, std::vector<Int>> memo;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = memo.find(x); it != memo.end()) return it->second;
  std::vector<Int>& out = memo[x];
  if (x < 2) return out;
  unsigned long bits = mpz_sizeinbase(x.get_mpz_t(), 2);
  for (unsigned long n = 1; n <= bits; ++n) {
    Int root;
    if (mpz_root(root.get_mpz_t(), x.get_mpz_t(), n) != 0 && root >= 2) out.push_back(root);
  }
  return out;
}

const GeneratorFactory& Fixture::generator(const std::string& name) const {
  for (const auto& [n, f] : generators)
    if (n == name) return f;
  throw FixtureError("fixture " + spec.name + " has no generator '" + name + "'");
}

const AdversaryFactory& Fixture::adversary(const std::string& name) const {
  for (const auto& [n, f] : adversaries)
    if (n == name) return f;
  throw FixtureError("fixture " + spec.name + " has no adversary '" + name + "'");
}

GameConfig Fixture::config(const Rat& eps, const Rat& eps_prime, std::size_t horizon,
                           std::size_t budget) const {
  GameConfig c;
  c.eps = eps;
  c.eps_prime = eps_prime;
  c.r = r;
  c.horizon = horizon;
  c.budget = budget;
  c.uus_override = uus_override;
  return c;
}

Transcript play_fixture(const Fixture& f, const std::string& generator,
                        const std::string& adversary, const GameConfig& config,
                        std::uint64_t seed) {
  GameConfig c = config;
  c.seed = seed;
  auto gen = f.generator(generator)(c);
  auto plan = f.adversary(adversary)(c, seed);
  return run_game(c, *f.cls, *plan.adversary, *gen, plan.commit);
}

std::vector<RegimeOutcome> verify_fixture(const Fixture& f, const VerifyOptions& opts) {
  std::vector<RegimeOutcome> out;
  for (const auto& row : f.spec.regimes) {
    RegimeOutcome o = f.check(f, row, opts);
    o.label = row.label;
    out.push_back(std::move(o));
  }
  return out;
}

namespace detail {

bool is_eventually_correct(const Transcript& tr) {
  return judge_limit(tr).kind == Verdict::Kind::kEventuallyCorrect;
}

bool fails_within_horizon(const Transcript& tr) {
  return judge_limit(tr).kind == Verdict::Kind::kFailsWithinHorizon;
}

RegimeOutcome sweep(const Fixture& f, const std::vector<std::string>& generators,
                    const std::string& adversary, const GameConfig& config, std::size_t seeds,
                    const VerifyOptions& opts, const TranscriptCheck& ok) {
  RegimeOutcome out;
  std::size_t games = 0, matched = 0;
  std::string miss;
  for (const auto& g : generators) {
    for (std::uint64_t seed = 0; seed < seeds; ++seed) {
      Transcript tr = play_fixture(f, g, adversary, config, seed);
      ++games;
      if (ok(tr)) {
        ++matched;
      } else if (miss.empty()) {
        miss = " first_miss=" + g + "/seed" + std::to_string(seed) + ":" +
               format_verdict(judge_limit(tr));
      }
      if (opts.sink) opts.sink->push_back(std::move(tr));
    }
  }
  out.pass = games > 0 && matched == games;
  out.detail = "adversary=" + adversary + " games=" + std::to_string(games) +
               " matched=" + std::to_string(matched) + miss;
  return out;
}

std::optional<Point> find_valid_move(const HypothesisClass& cls, const Sample& sample,
                                     const Support& candidates, const Rat& radius,
                                     std::size_t budget) {
  auto cl = cls.closure(sample);
  if (!cl) return std::nullopt;
  auto cur = candidates.cursor(budget);
  for (std::size_t i = 0; i < budget; ++i) {
    auto p = cur.next();
    if (!p) break;
    if (cl->contains(*p) && !in_set_ball(cls.metric(), sample, radius, *p)) return p;
  }
  return std::nullopt;
}

Hypothesis make_hypothesis(std::string id, std::vector<Atom> atoms) {
  return Hypothesis{std::move(id), Support(std::move(atoms))};
}

std::size_t min_switch_cost(const std::vector<SwitchPoint>& pts, std::size_t cap) {
  auto out_cost = [](const SwitchPoint& p) {
    return p.unreached_free ? std::min(p.pos, p.neg) : p.pos;
  };
  std::set<Int> contested, all;
  for (const auto& p : pts) {
    all.insert(p.reach.begin(), p.reach.end());
    if (p.neg > out_cost(p)) contested.insert(p.reach.begin(), p.reach.end());
  }
  std::vector<Int> amb(contested.begin(), contested.end());
  if (amb.size() > cap) throw std::length_error("too many contested switches");
  std::set<Int> on;
  for (const auto& k : all)
    if (!contested.count(k)) on.insert(k);
  std::size_t best = SIZE_MAX;
  for (std::size_t mask = 0; mask < (std::size_t{1} << amb.size()); ++mask) {
    std::set<Int> x = on;
    for (std::size_t i = 0; i < amb.size(); ++i)
      if (mask >> i & 1) x.insert(amb[i]);
    std::size_t cost = 0;
    for (const auto& p : pts) {
      bool in = std::any_of(p.reach.begin(), p.reach.end(), [&](const Int& k) { return x.count(k); });
      cost += in ? p.neg : out_cost(p);
    }
    best = std::min(best, cost);
  }
  return best;
}

}  // namespace detail

IndexSet cofinite(const Int& lo, const std::vector<Int>& excluded) {
  Int hi = lo - 1;
  for (const auto& e : excluded) hi = std::max(hi, e);
  std::vector<Int> keep;
  for (Int k = lo; k <= hi; ++k)
    if (std::find(excluded.begin(), excluded.end(), k) == excluded.end()) keep.push_back(k);
  return IndexSet::union_of({IndexSet::explicit_set(std::move(keep)), IndexSet::all(hi + 1)});
}

IndexSet cofinite_power_closure(const std::vector<Int>& excluded) {
  // x stays out only when none of its roots is in I.
  std::vector<Int> kept;
  for (const auto& x : excluded) {
    auto roots = integer_roots(x);
    bool all_out = std::all_of(roots.begin(), roots.end(), [&](const Int& k) {
      return std::find(excluded.begin(), excluded.end(), k) != excluded.end();
    });
    if (x >= 2 && all_out) kept.push_back(x);
  }
  return cofinite(2, kept);
}

std::vector<std::string> fixture_names() {
  return {"prime_reals", "two_hypotheses", "l2_case1", "l2_case2", "weighted_metric"};
}

Fixture make_fixture(const std::string& name) {
  if (name == "prime_reals") return fixture_prime_reals();
  if (name == "two_hypotheses") return fixture_two_hypotheses(Rat(3, 10), Rat(3, 5), Rat(1));
  if (name == "l2_case1") return fixture_l2_case1();
  if (name == "l2_case2") return fixture_l2_case2();
  if (name == "weighted_metric") return fixture_weighted_metric();
  throw FixtureError("unknown fixture '" + name + "'");
}

std::string describe_fixture(const Fixture& f) {
  std::ostringstream os;
  os << "fixture name=" << f.spec.name << " class=" << f.cls->name()
     << " metric=" << format_metric(f.cls->metric()) << " r=" << format_rat(f.r)
     << " uus_override=" << (f.uus_override ? "true" : "false") << "\n";
  for (const auto& [k, v] : f.spec.params) os << "param " << k << "=" << v << "\n";
  for (const auto& [n, g] : f.generators) os << "generator " << n << "\n";
  for (const auto& [n, a] : f.adversaries) os << "adversary " << n << "\n";
  for (const auto& row : f.spec.regimes) {
    os << "regime label=" << row.label << " gamma=" << format_rat(row.gamma)
       << " gamma_prime=" << format_rat(row.gamma_prime) << " expected=" << row.expected;
    if (!row.note.empty()) os << " note=" << row.note;
    os << "\n";
  }
  return os.str();
}

}  // namespace genlab
