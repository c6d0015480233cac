// Acceptance run: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "genlab/fixtures.hpp"
#include "oracles.hpp"
#include "random_classes.hpp"

using namespace genlab;
using genlab_test::R;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Transcripts from criteria 3-9, replayed by criterion 11.
std::vector<Transcript> g_transcripts;

std::string sz(std::size_t v) { return std::to_string(v); }

// ---- 1: covering chain ----

Outcome covering_chain() {
  std::mt19937_64 rng(1);
  std::size_t bad_chain = 0, bad_min = 0;
  Metric l2 = Metric::l2();
  for (int inst = 0; inst < 200; ++inst) {
    std::size_t n = 1 + rng() % 12;
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) {
      Rat x = genlab_test::small_rat(rng, 8, 2), y = genlab_test::small_rat(rng, 8, 2);
      x.canonicalize();
      y.canonicalize();
      pts.push_back(Point::vec({{Int(1), QS2(x)}, {Int(2), QS2(y)}}));
    }
    Rat radius(static_cast<long>(1 + rng() % 4), 2);
    std::size_t pack = packing_greedy(l2, pts, radius);
    std::size_t exact = covering_number_exact(l2, pts, radius, pts);
    std::size_t greedy = covering_number_greedy(l2, pts, radius, pts);
    if (!(pack <= exact && exact <= greedy)) ++bad_chain;
    if (exact != genlab_test::brute_force_cover(l2, pts, radius, pts)) ++bad_min;
  }
  return {bad_chain == 0 && bad_min == 0,
          "instances=200 chain_violations=" + sz(bad_chain) + " minimality_mismatches=" + sz(bad_min)};
}

// ---- 2, 3: random explicit classes ----

// Members: a finite subset of {0..9} plus a lattice a + mZ with m in 3..5.
struct LatticeClass {
  std::vector<genlab_test::RefHyp> ref;
  std::shared_ptr<const ExplicitClass> cls;
  std::vector<Point> ground;
  Rat eps, eps_prime;
};

std::vector<LatticeClass> make_lattice_classes() {
  std::mt19937_64 rng(2);
  std::vector<LatticeClass> out;
  for (int inst = 0; inst < 100; ++inst) {
    LatticeClass lc;
    std::size_t k = 1 + rng() % 4;
    std::vector<Hypothesis> members;
    for (std::size_t i = 0; i < k; ++i) {
      genlab_test::RefHyp h;
      std::vector<Point> pts;
      for (long v = 0; v < 10; ++v)
        if (rng() % 3 == 0) {
          h.finite.insert(v);
          pts.push_back(Point::real(Rat(v)));
        }
      long m = 3 + static_cast<long>(rng() % 3), a = static_cast<long>(rng() % m);
      h.lattice = std::make_pair(a, m);
      lc.ref.push_back(h);
      members.push_back({"h" + sz(i), Support({Atom::finite(pts), Atom::lattice(Point::Kind::kReal, a, m)})});
    }
    lc.cls = std::make_shared<const ExplicitClass>("lattice" + sz(inst), Metric::abs(), members);
    for (long v = 0; v < 10; ++v) lc.ground.push_back(Point::real(Rat(v)));
    lc.eps = Rat(static_cast<long>(1 + rng() % 2), 2);
    lc.eps_prime = rng() % 2 ? lc.eps : lc.eps / 2;
    out.push_back(std::move(lc));
  }
  return out;
}

// Largest external eps-cover of a consistent subset of the ground set whose
// members' common points are all in the ground set (a finite closure).
std::size_t reference_dimension(const LatticeClass& lc) {
  std::size_t best = 0;
  for (unsigned mask = 1; mask < (1u << lc.ground.size()); ++mask) {
    std::vector<Point> x;
    std::vector<long> xs;
    for (std::size_t i = 0; i < lc.ground.size(); ++i)
      if (mask >> i & 1) {
        x.push_back(lc.ground[i]);
        xs.push_back(static_cast<long>(i));
      }
    std::vector<const genlab_test::RefHyp*> vs;
    for (const auto& h : lc.ref) {
      bool all = true;
      for (long v : xs) all = all && h.contains(v);
      if (all) vs.push_back(&h);
    }
    if (vs.empty()) continue;
    // The common lattice part is infinite unless two residues are incompatible.
    bool lattice_meet = true;
    for (std::size_t i = 0; i < vs.size() && lattice_meet; ++i)
      for (std::size_t j = i + 1; j < vs.size() && lattice_meet; ++j) {
        auto [a1, m1] = *vs[i]->lattice;
        auto [a2, m2] = *vs[j]->lattice;
        long g = std::gcd(m1, m2);
        lattice_meet = (a1 - a2) % g == 0;
      }
    if (lattice_meet) continue;
    best = std::max(best, genlab_test::brute_force_line_cover(x, lc.eps));
  }
  return best;
}

Outcome formula_vs_bruteforce(const std::vector<LatticeClass>& classes, std::vector<std::size_t>& dims) {
  std::size_t mismatches = 0, ref_mismatches = 0, errors = 0;
  std::set<std::size_t> seen_d;
  for (const auto& lc : classes) {
    try {
      auto f = closure_dimension_finite(*lc.cls, lc.eps, lc.eps_prime);
      auto b = closure_dimension_bruteforce(*lc.cls, lc.eps, lc.eps_prime, lc.ground, lc.ground.size());
      if (f.kind != DimResult::Kind::kFinite || f.d != b.d || b.undecided != 0) ++mismatches;
      if (f.d != reference_dimension(lc)) ++ref_mismatches;
      dims.push_back(f.d);
      seen_d.insert(f.d);
    } catch (const std::exception&) {
      ++errors;
      dims.push_back(0);
    }
  }
  std::string ds;
  for (auto d : seen_d) ds += (ds.empty() ? "" : ",") + sz(d);
  return {mismatches == 0 && ref_mismatches == 0 && errors == 0,
          "classes=" + sz(classes.size()) + " formula_vs_brute=" + sz(mismatches) + " formula_vs_reference=" +
              sz(ref_mismatches) + " errors=" + sz(errors) + " values=" + ds};
}

Outcome uniform_soundness(const std::vector<LatticeClass>& classes, const std::vector<std::size_t>& dims) {
  std::size_t games = 0, violations = 0, oracle_violations = 0, reached = 0, errors = 0;
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    const auto& lc = classes[ci];
    std::mt19937_64 rng(300 + ci);
    for (int a = 0; a < 20; ++a) {
      std::size_t ti = rng() % lc.ref.size();
      const Hypothesis& h = lc.cls->members()[ti];
      GameConfig c;
      c.eps = lc.eps;
      c.eps_prime = lc.eps_prime;
      c.r = Rat(1);
      c.horizon = 30;
      c.seed = rng();
      try {
        UniformGenerator gen(lc.cls, c.eps, c.eps_prime, dims[ci] + 1, c.budget);
        EnumerationAdversary adv(h.support, c.seed, 4);
        Transcript tr = run_game(c, *lc.cls, adv, gen, CommitPolicy::fixed(h));
        ++games;
        Verdict v = judge_uniform(tr, dims[ci] + 1);
        if (v.kind == Verdict::Kind::kFailsWithinHorizon) violations += v.error_rounds.size();
        if (v.kind == Verdict::Kind::kEventuallyCorrect) ++reached;
        // Oracle: emitted points lie in the target and are eps'-far from every reveal.
        for (std::size_t t = 0; t < tr.rounds.size(); ++t) {
          const auto& rd = tr.rounds[t];
          if (!rd.move.is_emit() || rd.t < v.t_star || v.kind != Verdict::Kind::kEventuallyCorrect) continue;
          const Rat& y = rd.move.point.real_value();
          bool ok = y.get_den() == 1 && lc.ref[ti].contains(y.get_num().get_si());
          for (std::size_t s = 0; s <= t; ++s)
            ok = ok && !genlab_test::ref_within(Metric::abs(), tr.rounds[s].revealed, rd.move.point, c.eps_prime);
          if (!ok) ++oracle_violations;
        }
        g_transcripts.push_back(std::move(tr));
      } catch (const std::exception&) {
        ++errors;
      }
    }
  }
  return {violations == 0 && oracle_violations == 0 && errors == 0 && games == 2000,
          "games=" + sz(games) + " threshold_reached=" + sz(reached) + " violations=" + sz(violations) +
              " oracle_violations=" + sz(oracle_violations) + " errors=" + sz(errors)};
}

// ---- fixture rows ----

std::string rows_detail(const std::vector<RegimeOutcome>& rows, bool& all) {
  std::string d;
  all = !rows.empty();
  for (const auto& r : rows) {
    all = all && r.pass;
    d += " [" + r.label + (r.pass ? " pass " : " FAIL ") + r.detail + "]";
  }
  return d;
}

std::vector<RegimeOutcome> run_rows(const Fixture& f, std::vector<Transcript>& sink) {
  VerifyOptions opts;
  opts.seeds = 20;
  opts.sink = &sink;
  return verify_fixture(f, opts);
}

Outcome two_hypotheses_rows() {
  Fixture f = make_fixture("two_hypotheses");
  std::vector<Transcript> sink;
  auto rows = run_rows(f, sink);
  bool all = false;
  std::string d = rows_detail(rows, all);
  // a_1..a_d are pairwise 3/5 apart, so the prefix covers at 3/10 are exactly d.
  auto cls = two_hypotheses_class(R("3/5"), Rat(1));
  std::vector<Point> prefix;
  std::size_t cover_ok = 0;
  for (long k = 1; k <= 8; ++k) {
    prefix.push_back(Point::basis(Int(k), QS2(Rat(0), R("3/10"))));
    bool in_both = true;
    for (const auto& h : cls.members()) in_both = in_both && h.support.contains(prefix.back());
    if (in_both && genlab_test::brute_force_cover(Metric::l2(), prefix, R("3/10"), prefix) == prefix.size())
      ++cover_ok;
  }
  std::size_t long_suffix = 0;
  for (const auto& tr : sink) {
    if (tr.adversary != "trap") continue;
    std::size_t suffix = 0;
    for (auto it = tr.rounds.rbegin(); it != tr.rounds.rend() && it->passes(); ++it) ++suffix;
    if (tr.rounds.size() != 40 || 2 * suffix > tr.rounds.size()) ++long_suffix;
  }
  for (auto& tr : sink) g_transcripts.push_back(std::move(tr));
  return {all && cover_ok == 8 && long_suffix == 0,
          "prefix_covers=" + sz(cover_ok) + "/8 trap_long_suffix=" + sz(long_suffix) + d};
}

Outcome prime_rows() {
  auto t0 = std::chrono::steady_clock::now();
  Fixture f = make_fixture("prime_reals");
  std::vector<Transcript> sink;
  auto rows = run_rows(f, sink);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool all = false;
  std::string d = rows_detail(rows, all);
  // eps = 1 games: some error after round 150 in every transcript.
  std::size_t trap_games = 0, late = 0;
  for (const auto& tr : sink) {
    if (tr.config.eps != 1) continue;
    ++trap_games;
    std::size_t last = 0;
    for (const auto& rd : tr.rounds)
      if (!rd.passes()) last = rd.t;
    if (last > 150) ++late;
  }
  for (auto& tr : sink) g_transcripts.push_back(std::move(tr));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", secs);
  return {all && trap_games > 0 && late == trap_games && secs < 20,
          "seconds=" + std::string(buf) + " trap_games=" + sz(trap_games) + " error_after_150=" + sz(late) + d};
}

Outcome fixture_rows(const std::string& name) {
  Fixture f = make_fixture(name);
  std::vector<Transcript> sink;
  auto rows = run_rows(f, sink);
  bool all = false;
  std::string d = rows_detail(rows, all);
  for (auto& tr : sink) g_transcripts.push_back(std::move(tr));
  return {all && rows.size() == f.spec.regimes.size(), "rows=" + sz(rows.size()) + d};
}

Outcome weighted_rows() {
  Outcome o = fixture_rows("weighted_metric");
  // Independent check of rho'(a_{m,k}, a_{m,k'}) = 1/2^m through the test-side distance.
  Metric rp = weighted_rho_prime();
  std::size_t bad = 0;
  for (std::size_t m = 1; m <= 3; ++m)
    for (long k : {2, 4, 6})
      for (long k2 : {8, 10, 12}) {
        Rat want(1, 1ul << m);
        QS2 d = genlab_test::ref_dist_sq(rp, WeightedClass::a(m, Int(k)), WeightedClass::a(m, Int(k2)));
        if ((d - QS2(want * want)).sign() != 0) ++bad;
      }
  o.pass = o.pass && bad == 0;
  o.detail = "rho_prime_ref_mismatch=" + sz(bad) + " " + o.detail;
  return o;
}

// ---- 8: discrete embedding vs distinctness semantics ----

struct RefMember {
  std::vector<std::pair<long, long>> lattices;
  std::set<long> finite;
  bool contains(long j) const {
    if (finite.count(j)) return true;
    for (auto [a, m] : lattices)
      if (((j - a) % m + m) % m == 0) return true;
    return false;
  }
};

// 0, 1, -1, 2, -2, ...
long zigzag(long i) { return i % 2 ? (i + 1) / 2 : -(i / 2); }

struct RefRound {
  long revealed;
  std::optional<long> move;
  bool member = false, novel = false;
  std::size_t cover = 0;
};

std::vector<RefRound> reference_game(const std::vector<RefMember>& cls, std::size_t target,
                                     const std::vector<long>& script) {
  std::vector<RefRound> out;
  std::vector<long> seen;
  for (long x : script) {
    seen.push_back(x);
    RefRound r;
    r.revealed = x;
    std::vector<const RefMember*> vs;
    for (const auto& h : cls) {
      bool ok = true;
      for (long s : seen) ok = ok && h.contains(s);
      if (ok) vs.push_back(&h);
    }
    if (!vs.empty()) {
      for (long i = 0; i < 400 && !r.move; ++i) {
        long j = zigzag(i);
        bool all = std::all_of(vs.begin(), vs.end(), [&](const RefMember* h) { return h->contains(j); });
        if (all && std::find(seen.begin(), seen.end(), j) == seen.end()) r.move = j;
      }
    }
    if (r.move) {
      r.member = cls[target].contains(*r.move);
      r.novel = std::find(seen.begin(), seen.end(), *r.move) == seen.end();
    }
    r.cover = std::set<long>(seen.begin(), seen.end()).size();
    out.push_back(r);
  }
  return out;
}

// Last error after 3T/4 fails; a clean suffix of at least T/2 is eventually correct.
std::string reference_verdict(const std::vector<RefRound>& rounds) {
  std::size_t T = rounds.size(), last = 0;
  if (T == 0) return "inconclusive";
  for (std::size_t t = 0; t < T; ++t)
    if (!(rounds[t].move && rounds[t].member && rounds[t].novel)) last = t + 1;
  if (4 * last > 3 * T) return "fails_within_horizon";
  if (last == T) return "inconclusive";
  return 2 * (T - last) >= T ? "eventually_correct" : "inconclusive";
}

std::string verdict_name(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::kEventuallyCorrect: return "eventually_correct";
    case Verdict::Kind::kFailsWithinHorizon: return "fails_within_horizon";
    case Verdict::Kind::kInconclusive: return "inconclusive";
  }
  return "";
}

Outcome discrete_embedding() {
  std::mt19937_64 rng(8);
  std::size_t games = 0, round_mismatch = 0, verdict_mismatch = 0, errors = 0;
  std::map<std::string, std::size_t> verdicts;
  EmbeddingSpec spec;
  spec.target = Metric::discrete();
  spec.r = R("1/2");
  for (int inst = 0; inst < 100; ++inst) {
    std::size_t k = 1 + rng() % 4;
    std::vector<RefMember> ref;
    std::vector<Hypothesis> source;
    for (std::size_t i = 0; i < k; ++i) {
      RefMember h;
      std::vector<Atom> atoms;
      std::size_t nl = 1 + rng() % 2;
      for (std::size_t l = 0; l < nl; ++l) {
        long m = 2 + static_cast<long>(rng() % 5), a = static_cast<long>(rng() % m);
        h.lattices.emplace_back(a, m);
        atoms.push_back(Atom::lattice(Point::Kind::kAtom, a, m));
      }
      std::vector<Point> pts;
      for (long j = -6; j <= 6; ++j)
        if (rng() % 6 == 0) {
          h.finite.insert(j);
          pts.push_back(Point::atom(j));
        }
      if (!pts.empty()) atoms.push_back(Atom::finite(pts));
      ref.push_back(h);
      source.push_back({"h" + sz(i), Support(atoms)});
    }
    try {
      auto cls = std::make_shared<const ExplicitClass>(embed_countable_class("c" + sz(inst), source, spec));
      std::size_t target = rng() % k;
      std::vector<long> pool;
      for (long i = 0; pool.size() < 12; ++i)
        if (ref[target].contains(zigzag(i))) pool.push_back(zigzag(i));
      std::vector<long> script;
      for (int t = 0; t < 16; ++t) script.push_back(pool[rng() % pool.size()]);

      Sample pts;
      for (long x : script) pts.push_back(embed_point(spec, Int(x)));
      ScriptedAdversary adv(pts);
      FunctionGenerator gen("smallest_novel", [cls](const Sample& seen) {
        auto cl = cls->closure(seen);
        if (!cl) return Move::abstain("bot");
        std::optional<Point> best;
        auto key = [](const Point& p) { return std::make_pair(std::abs(p.atom_id()), p.atom_id() < 0); };
        for (const auto& p : cl->enumerate(400)) {
          if (in_set_ball(cls->metric(), seen, R("1/2"), p)) continue;
          if (!best || key(p) < key(*best)) best = p;
        }
        return best ? Move::emit(*best) : Move::abstain("budget");
      });
      GameConfig c;
      c.eps = c.eps_prime = c.r = R("1/2");
      c.horizon = script.size();
      Transcript tr = run_game(c, *cls, adv, gen, CommitPolicy::fixed(cls->members()[target]));
      auto ref_rounds = reference_game(ref, target, script);
      ++games;
      bool same = tr.rounds.size() == ref_rounds.size();
      for (std::size_t t = 0; same && t < ref_rounds.size(); ++t) {
        const auto& a = tr.rounds[t];
        const auto& b = ref_rounds[t];
        same = embed_index(spec, a.revealed) == Int(b.revealed) && a.move.is_emit() == b.move.has_value() &&
               tr.cover_profile[t] == b.cover;
        if (same && b.move)
          same = embed_index(spec, a.move.point) == Int(*b.move) && *a.member_ok == b.member &&
                 *a.novel_ok == b.novel;
      }
      if (!same) ++round_mismatch;
      std::string v = verdict_name(judge_limit(tr));
      if (v != reference_verdict(ref_rounds)) ++verdict_mismatch;
      ++verdicts[v];
      g_transcripts.push_back(std::move(tr));
    } catch (const std::exception&) {
      ++errors;
    }
  }
  std::string vs;
  for (const auto& [k, n] : verdicts) vs += " " + k + "=" + sz(n);
  return {games == 100 && round_mismatch == 0 && verdict_mismatch == 0 && errors == 0,
          "games=" + sz(games) + " round_mismatches=" + sz(round_mismatch) + " verdict_mismatches=" +
              sz(verdict_mismatch) + " errors=" + sz(errors) + vs};
}

// ---- 10: ERM equivalences ----

Outcome erm_equivalences() {
  std::mt19937_64 rng(10);
  std::size_t instances = 0, mismatch = 0, ref_mismatch = 0;
  while (instances < 500) {
    auto rc = genlab_test::random_class(rng, 4, 8, true);
    std::vector<long> xs;
    Sample s;
    std::size_t len = rng() % 4;
    for (std::size_t i = 0; i < len; ++i) {
      xs.push_back(static_cast<long>(rng() % 8));
      s.push_back(Point::real(Rat(xs.back())));
    }
    long q = static_cast<long>(rng() % 14) - 3;
    auto ref = genlab_test::ref_closure_contains(rc.ref, xs, q);
    if (!ref) continue;
    ++instances;
    Point qp = Point::real(Rat(q));
    auto direct = closure_contains(rc.cls, s, qp);
    bool via = closure_via_erm(rc.cls, s, qp);
    if (!direct || *direct != via) ++mismatch;
    if (via != *ref) ++ref_mismatch;
  }
  std::size_t outputs = 0, bad = 0;
  for (int inst = 0; inst < 200; ++inst) {
    auto rc = genlab_test::random_class(rng, 4, 8, true);
    auto cls = std::make_shared<const ExplicitClass>(rc.cls);
    std::size_t ti = rng() % rc.ref.size();
    std::vector<long> xs;
    for (long v = -4; v < 12 && xs.size() < 3; ++v)
      if (rc.ref[ti].contains(v) && rng() % 2) xs.push_back(v);
    Sample s;
    for (long v : xs) s.push_back(Point::real(Rat(v)));
    Rat eps_prime(static_cast<long>(1 + rng() % 3), 2);
    ErmSearchGenerator gen(cls, eps_prime, eps_prime, Support({Atom::lattice(Point::Kind::kReal, 0, 1)}), 200);
    Move m = gen.step(s);
    if (!m.is_emit()) continue;
    ++outputs;
    const Rat& y = m.point.real_value();
    bool ok = y.get_den() == 1 && genlab_test::ref_closure_contains(rc.ref, xs, y.get_num().get_si()) == true;
    for (const auto& p : s) ok = ok && !genlab_test::ref_within(Metric::abs(), p, m.point, eps_prime);
    if (!ok) ++bad;
  }
  return {mismatch == 0 && ref_mismatch == 0 && bad == 0 && outputs > 0,
          "instances=" + sz(instances) + " erm_vs_closure=" + sz(mismatch) + " erm_vs_reference=" + sz(ref_mismatch) +
              " erm_search_outputs=" + sz(outputs) + " bad_outputs=" + sz(bad)};
}

// ---- 11: replays ----

Outcome replays() {
  std::size_t novelty = 0, profile = 0, transfer = 0, weighted = 0, scale = 0;
  for (const auto& tr : g_transcripts) {
    const auto& c = tr.config;
    auto flags = replay_novelty(tr, c.eps_prime / 2);
    for (std::size_t t = 0; t < tr.rounds.size(); ++t)
      if (tr.rounds[t].novel_ok == true && flags[t] != true) ++novelty;
    // A larger radius never needs more balls, so it reaches any threshold no earlier.
    auto wide = cover_profile_at(tr, c.r);
    for (std::size_t t = 0; t < wide.size(); ++t)
      if (wide[t] > tr.cover_profile[t]) ++profile;
    if (tr.metric == weighted_rho_prime()) {
      ++weighted;
      try {
        transfer += replay_metric_transfer(tr, Metric::l2(), Rat(1)).violations;
      } catch (const ScaleBoundViolation&) {
        ++scale;
      }
    }
  }
  return {novelty == 0 && profile == 0 && transfer == 0 && scale == 0 && weighted > 0,
          "transcripts=" + sz(g_transcripts.size()) + " novelty_violations=" + sz(novelty) +
              " profile_violations=" + sz(profile) + " weighted_transcripts=" + sz(weighted) +
              " transfer_violations=" + sz(transfer) + " scale_violations=" + sz(scale)};
}

}  // namespace

int main() {
  std::vector<LatticeClass> classes;
  std::vector<std::size_t> dims;
  struct Criterion {
    int id;
    const char* name;
    double limit;  // seconds, 0 for none
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {1, "covering chain", 10, covering_chain},
      {2, "closure dimension formula vs brute force", 30,
       [&] {
         classes = make_lattice_classes();
         return formula_vs_bruteforce(classes, dims);
       }},
      {3, "uniform generator soundness", 0, [&] { return uniform_soundness(classes, dims); }},
      {4, "two hypotheses", 0, two_hypotheses_rows},
      {5, "prime reals regimes", 0, prime_rows},
      {6, "l2 case 1 regimes", 0, [] { return fixture_rows("l2_case1"); }},
      {7, "l2 case 2 regimes", 0, [] { return fixture_rows("l2_case2"); }},
      {8, "discrete embedding equivalence", 0, discrete_embedding},
      {9, "weighted metric", 0, weighted_rows},
      {10, "erm equivalences", 0, erm_equivalences},
      {11, "monotonicity replays", 0, replays},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit > 0 && secs >= c.limit) {
      o.pass = false;
      o.detail += " over_time_limit";
    }
    std::printf("criterion %2d %s: %s (%.1fs) %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("acceptance: %d/%zu passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
