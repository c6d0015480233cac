#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "fixture_util.hpp"
#include "genlab/fixtures.hpp"

namespace genlab {

namespace {

QS2 half_sqrt2(const Rat& c) { return QS2(Rat(0), c / 2); }

Int ipow(const Int& p, unsigned long n) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), p.get_mpz_t(), n);
  return out;
}

Int idx(std::size_t k) { return Int(static_cast<unsigned long>(k)); }

bool is_power_of(Int v, const Int& p) {
  if (v < p) return false;
  while (v % p == 0) v /= p;
  return v == 1;
}

using Counts = std::map<Point, std::pair<std::size_t, std::size_t>, PointLess>;

Counts group(const LabeledSample& s) {
  Counts out;
  for (const auto& l : s) {
    auto& c = out[l.point];
    (l.label ? c.first : c.second) += 1;
  }
  return out;
}

UusResult orthogonal_uus(const QS2& scale, const IndexSet& indices, const Rat& r) {
  UusResult out;
  if (compare(scale * scale, QS2(r * r)) <= 0) return out;
  SeparationWitness w;
  w.kind = SeparationWitness::Kind::kOrthogonal;
  w.family = Atom::basis(scale, indices);
  w.separation_sq = scale * scale * Rat(2);
  w.radius = r;
  out.kind = UusResult::Kind::kSatisfied;
  out.witnesses.emplace_back("u_k", w);
  return out;
}

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& xs) {
  return xs[rng() % xs.size()];
}

std::vector<IndexSet> free_pool() {
  return {IndexSet::all(1), IndexSet::residue(0, 2, 2), IndexSet::residue(1, 2, 1),
          IndexSet::residue(1, 3, 1), IndexSet::powers(2)};
}

// Power-closed subsets of {2, 3, ...}.
std::vector<IndexSet> power_closed_pool() {
  return {IndexSet::all(2), IndexSet::powers(2), IndexSet::powers(3), IndexSet::residue(1, 2, 3),
          IndexSet::residue(1, 4, 5)};
}

// Odd primes p_1 = 3, p_2 = 5, ... extended on demand.
class PrimeList {
 public:
  const Int& at(std::size_t i) {
    if (i >= primes_.size()) primes_ = odd_primes(std::max(i + 1, 2 * primes_.size()));
    return primes_[i];
  }

 private:
  std::vector<Int> primes_ = odd_primes(8);
};

}  // namespace

// ---------------------------------------------------------------------------
// first construction

Case1Class::Case1Class(Case1Params p) : p_(std::move(p)) {
  if (!(p_.r > 0 && p_.eps > 0 && p_.eps <= p_.r && p_.eps_prime > 0 && p_.eps_prime <= p_.r)) {
    throw FixtureError("l2_case1 needs 0 < eps, eps' <= r");
  }
  su_ = QS2(2 * p_.r);
  sa_ = QS2(p_.eps);
  sg_ = QS2(p_.eps_prime);
}

Point Case1Class::u(const Int& k) const { return Point::basis(k, su_); }
Point Case1Class::a(const Int& k) const { return Point::basis(k, sa_); }
Point Case1Class::g(const Int& k) const { return Point::basis(k, sg_); }

std::pair<Case1Class::Role, Int> Case1Class::classify(const Point& x) const {
  if (x.kind() != Point::Kind::kVec) return {Role::kInvalid, 0};
  if (x.vec_value().coords.empty()) return {Role::kOrigin, 0};
  if (!x.is_axis_point()) return {Role::kInvalid, 0};
  const Int& k = x.axis();
  const QS2& c = x.axis_coord();
  if (c == su_) return {Role::kU, k};
  bool even = mpz_even_p(k.get_mpz_t());
  if (c == sa_ && even && k >= 4) return {Role::kA, k / 2};
  if (c == sg_ && !even && k >= 3) return {Role::kG, (k - 1) / 2};
  return {Role::kInvalid, 0};
}

bool Case1Class::consistent(const Sample& s) const {
  return std::none_of(s.begin(), s.end(),
                      [&](const Point& x) { return classify(x).first == Role::kInvalid; });
}

std::optional<Support> Case1Class::closure(const Sample& s) const {
  if (!consistent(s)) return std::nullopt;
  Sample pts{Point::origin()};
  pts.insert(pts.end(), s.begin(), s.end());
  std::vector<Atom> atoms{Atom::finite(dedup_points(pts))};
  std::set<Int> ks;
  for (const auto& x : s) {
    auto [role, k] = classify(x);
    if (role == Role::kA && ks.insert(k).second) {
      atoms.push_back(
          Atom::basis(QS2(p_.eps_prime), IndexSet::affine(2, 1, IndexSet::powers(k))));
    }
  }
  return Support(std::move(atoms));
}

std::size_t Case1Class::erm(const LabeledSample& s) const {
  std::size_t fixed = 0;
  std::vector<detail::SwitchPoint> sw;
  // (role, index) names a point exactly, except that all invalid points share one key.
  std::map<std::pair<Role, Int>, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& l : s) {
    auto& c = counts[classify(l.point)];
    (l.label ? c.first : c.second) += 1;
  }
  for (const auto& [key, c] : counts) {
    const auto& [role, k] = key;
    switch (role) {
      case Role::kOrigin:
        fixed += c.second;
        break;
      case Role::kInvalid:
        fixed += c.first;
        break;
      case Role::kU:
        fixed += std::min(c.first, c.second);
        break;
      case Role::kA:
        sw.push_back({{k}, c.first, c.second, false});
        break;
      case Role::kG:
        sw.push_back({integer_roots(k), c.first, c.second, true});
        break;
    }
  }
  return fixed + detail::min_switch_cost(sw);
}

UusResult Case1Class::uus_check(const Rat& r) const {
  return orthogonal_uus(QS2(2 * p_.r), IndexSet::all(1), r);
}

Support Case1Class::target(const IndexSet& i1, const IndexSet& i2, const IndexSet& i3) const {
  if (i2.lower() < 2) throw FixtureError("l2_case1 needs I2 inside {2, 3, ...}");
  return Support({Atom::finite({Point::origin()}), Atom::basis(QS2(2 * p_.r), i1),
                  Atom::basis(QS2(p_.eps), IndexSet::affine(2, 0, i2)),
                  Atom::basis(QS2(p_.eps_prime), IndexSet::affine(2, 1, i2)),
                  Atom::basis(QS2(p_.eps_prime), IndexSet::affine(2, 1, i3))});
}

ExplicitClass Case1Class::truncation(const std::vector<std::vector<Int>>& e1,
                                     const std::vector<std::vector<Int>>& e2,
                                     const std::vector<std::vector<Int>>& e3) const {
  std::vector<Hypothesis> members;
  for (std::size_t i = 0; i < e1.size(); ++i) {
    for (std::size_t j = 0; j < e2.size(); ++j) {
      for (std::size_t l = 0; l < e3.size(); ++l) {
        std::vector<Atom> atoms{
            Atom::finite({Point::origin()}),
            Atom::basis(QS2(2 * p_.r), cofinite(1, e1[i])),
            Atom::basis(QS2(p_.eps), IndexSet::affine(2, 0, cofinite(2, e2[j]))),
            Atom::basis(QS2(p_.eps_prime), IndexSet::affine(2, 1, cofinite_power_closure(e2[j]))),
            Atom::basis(QS2(p_.eps_prime), IndexSet::affine(2, 1, cofinite(1, e3[l])))};
        members.push_back(detail::make_hypothesis(
            "h" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(l),
            std::move(atoms)));
      }
    }
  }
  return ExplicitClass("l2_case1_truncation", Metric::l2(), std::move(members));
}

namespace {

// Waits for some a_{2K}, then emits the least g_{2K^n+1} outside B(seen, eps').
class Case1Rule : public Generator {
 public:
  Case1Rule(std::shared_ptr<const Case1Class> cls, Rat eps_prime, std::size_t budget)
      : cls_(std::move(cls)), ball_(Metric::l2(), std::move(eps_prime)), budget_(budget) {}
  std::string name() const override { return "g_rule"; }

  Move step(const Sample& seen) override {
    const BallIndex& ball = ball_.update(seen);
    for (; !k_ && scanned_ < seen.size(); ++scanned_) {
      auto [role, k] = cls_->classify(seen[scanned_]);
      if (role == Case1Class::Role::kA) k_ = k;
    }
    if (!k_) return Move::abstain("threshold");
    Int kn = *k_;
    for (std::size_t n = 1; n <= budget_; ++n, kn *= *k_) {
      Point x = cls_->g(2 * kn + 1);
      if (!ball.covers(x)) return Move::emit(x);
    }
    return Move::abstain("budget");
  }

 private:
  std::shared_ptr<const Case1Class> cls_;
  SeenBall ball_;
  std::size_t budget_;
  std::size_t scanned_ = 0;
  std::optional<Int> k_;
};

Support case1_dense(const Case1Params& p) {
  return Support({Atom::finite({Point::origin()}), Atom::basis(QS2(2 * p.r), IndexSet::all(1)),
                  Atom::basis(QS2(p.eps), IndexSet::affine(2, 0, IndexSet::all(2))),
                  Atom::basis(QS2(p.eps_prime), IndexSet::affine(2, 1, IndexSet::all(1)))});
}

}  // namespace

Fixture fixture_l2_case1(const Case1Params& p) {
  auto cls = std::make_shared<Case1Class>(p);
  Fixture f;
  f.spec.name = "l2_case1";
  f.spec.params = {{"r", format_rat(p.r)}, {"eps", format_rat(p.eps)},
                   {"eps_prime", format_rat(p.eps_prime)}, {"index_map", "g_{2k^n+1}=g at 2*(k^n)+1"}};
  Rat lo = p.eps * Rat(4, 5), lo_prime = p.eps_prime * Rat(4, 5);
  f.spec.regimes = {
      {"below_both", lo, lo_prime, "eventually_correct", "g_rule vs obligated adversaries, horizon 200"},
      {"gamma_at_eps", p.eps, lo_prime, "fails_within_horizon",
       "staged trap vs every generator, horizon 200"},
      {"gamma_prime_at_eps_prime", lo, p.eps_prime, "no_valid_move",
       "scan 500 candidates after {0} and {0, a_4}; gamma' > eps' untested"},
  };
  f.cls = cls;
  f.r = p.r;

  f.generators.emplace_back("g_rule", [cls](const GameConfig& c) -> std::unique_ptr<Generator> {
    return std::make_unique<Case1Rule>(cls, c.eps_prime, c.budget);
  });
  f.generators.emplace_back("limit", [cls](const GameConfig& c) -> std::unique_ptr<Generator> {
    return std::make_unique<LimitGenerator>(std::vector<std::shared_ptr<const HypothesisClass>>{cls},
                                            c.eps, c.eps_prime, 0, c.budget);
  });
  f.generators.emplace_back("erm_search", [cls, p](const GameConfig& c) -> std::unique_ptr<Generator> {
    return std::make_unique<ErmSearchGenerator>(cls, c.eps, c.eps_prime, case1_dense(p), c.budget);
  });
  f.generators.emplace_back("abstain", [](const GameConfig&) -> std::unique_ptr<Generator> {
    return std::make_unique<AbstainGenerator>();
  });

  f.adversaries.emplace_back("obligated", [cls](const GameConfig&, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto i1 = pick(rng, free_pool());
    auto i2 = pick(rng, power_closed_pool());
    auto i3 = pick(rng, free_pool());
    Hypothesis h{"I1=" + i1.format() + " I2=" + i2.format() + " I3=" + i3.format(),
                 cls->target(i1, i2, i3)};
    AdversaryPlan plan{std::make_unique<EnumerationAdversary>(h.support, seed, 4),
                       CommitPolicy::fixed(h), h};
    return plan;
  });

  // Anchor 0; heads alternate u_{2^i} and g_{2*2^i+1}; row m uses the prime p_m.
  f.adversaries.emplace_back("staged_trap", [cls](const GameConfig& c, std::uint64_t) {
    auto primes = std::make_shared<PrimeList>();
    auto cell = [cls](const Int& base, std::size_t j) {
      if (j % 2 == 1) return cls->u(ipow(base, static_cast<unsigned long>((j + 1) / 2)));
      return cls->g(2 * ipow(base, static_cast<unsigned long>(j / 2)) + 1);
    };
    StagedRows rows;
    rows.anchors = {Point::origin()};
    rows.stage_head = [cell](std::size_t m) { return cell(2, m); };
    rows.row = [cell, primes](std::size_t m, std::size_t j) { return cell(primes->at(m - 1), j); };
    rows.in_protected = [cls, primes](std::size_t m, const Point& x) {
      auto [role, k] = cls->classify(x);
      const Int& q = primes->at(m - 1);
      return (role == Case1Class::Role::kU || role == Case1Class::Role::kA ||
              role == Case1Class::Role::kG) &&
             is_power_of(k, q);
    };
    auto candidates = [cls](const Sample& reveals) {
      std::vector<Int> us, gs, bases{2};
      for (const auto& x : reveals) {
        auto [role, k] = cls->classify(x);
        if (role != Case1Class::Role::kU && role != Case1Class::Role::kG) continue;
        (role == Case1Class::Role::kU ? us : gs).push_back(k);
        auto q = odd_prime_power(k);
        if (q && std::find(bases.begin(), bases.end(), q->first) == bases.end())
          bases.push_back(q->first);
      }
      std::vector<Hypothesis> out;
      for (const auto& b : bases) {
        auto i2 = IndexSet::powers(b);
        auto i1 = IndexSet::union_of({i2, IndexSet::explicit_set(us)});
        auto i3 = IndexSet::union_of({i2, IndexSet::explicit_set(gs)});
        out.push_back({"I2=powers:" + b.get_str(), cls->target(i1, i2, i3)});
      }
      return out;
    };
    AdversaryPlan plan{std::make_unique<StagedTrapAdversary>(std::move(rows), c.horizon),
                       CommitPolicy::deferred(candidates), std::nullopt};
    return plan;
  });

  f.check = [cls, p](const Fixture& fx, const RegimeRow& row, const VerifyOptions& opts) {
    if (row.label == "below_both") {
      auto c = fx.config(row.gamma, row.gamma_prime, 200, opts.budget);
      return detail::sweep(fx, {"g_rule"}, "obligated", c, opts.seeds, opts,
                           detail::is_eventually_correct);
    }
    if (row.label == "gamma_at_eps") {
      auto c = fx.config(row.gamma, row.gamma_prime, 200, opts.budget);
      return detail::sweep(fx, {"g_rule", "limit", "erm_search", "abstain"}, "staged_trap", c, 1,
                           opts, detail::fails_within_horizon);
    }
    RegimeOutcome out;
    std::vector<Sample> samples = {{Point::origin()}, {Point::origin(), cls->a(4)}};
    std::size_t found = 0;
    for (const auto& s : samples)
      if (detail::find_valid_move(*cls, s, case1_dense(p), row.gamma_prime, 500)) ++found;
    out.pass = found == 0;
    out.detail = "samples=2 budget=500 valid_moves=" + std::to_string(found);
    return out;
  };
  return f;
}

// ---------------------------------------------------------------------------
// second construction

Case2Class::Case2Class(Case2Params p) : p_(std::move(p)) {
  if (!(p_.r > 0 && p_.eps1 > 0 && p_.eps1 <= p_.eps2 && p_.eps2 <= p_.r && p_.eps_prime > 0 &&
        p_.eps_prime <= p_.r)) {
    throw FixtureError("l2_case2 needs 0 < eps1 <= eps2 <= r and 0 < eps' <= r");
  }
}

Point Case2Class::u(const Int& k) const { return Point::basis(k, QS2(2 * p_.r)); }
Point Case2Class::a1(const Int& k) const { return Point::basis(k, half_sqrt2(p_.eps1)); }
Point Case2Class::a2(const Int& k) const { return Point::basis(k, half_sqrt2(p_.eps2)); }
Point Case2Class::g(const Int& k) const { return Point::basis(k, half_sqrt2(p_.eps_prime)); }

Case2Class::Roles Case2Class::classify(const Point& x) const {
  Roles out;
  if (x.kind() != Point::Kind::kVec || !x.is_axis_point()) return out;
  out.k = x.axis();
  const QS2& c = x.axis_coord();
  out.u = c == QS2(2 * p_.r) && out.k >= 2;
  out.a = c == half_sqrt2(p_.eps1) || c == half_sqrt2(p_.eps2);
  out.g = c == half_sqrt2(p_.eps_prime) && out.k >= 2;
  return out;
}

bool Case2Class::consistent(const Sample& s) const {
  return std::all_of(s.begin(), s.end(), [&](const Point& x) {
    auto r = classify(x);
    return r.u || r.a || r.g;
  });
}

std::optional<Support> Case2Class::closure(const Sample& s) const {
  if (!consistent(s)) return std::nullopt;
  if (s.empty()) return Support();
  Sample pts = s;
  std::vector<Atom> atoms;
  std::set<Int> ks;
  for (const auto& x : s) {
    auto r = classify(x);
    // A point that could also be an a_{k,i} forces nothing.
    if (!(r.u || (r.g && !r.a)) || !ks.insert(r.k).second) continue;
    atoms.push_back(Atom::basis(half_sqrt2(p_.eps_prime), IndexSet::powers(r.k)));
    // g_k with k not a perfect power has k as its only root, so k is in I1.
    if (r.g && integer_roots(r.k).size() == 1) pts.push_back(u(r.k));
  }
  atoms.insert(atoms.begin(), Atom::finite(dedup_points(pts)));
  return Support(std::move(atoms));
}

std::size_t Case2Class::erm(const LabeledSample& s) const {
  std::size_t fixed = 0;
  std::vector<detail::SwitchPoint> sw;
  for (const auto& [x, c] : group(s)) {
    auto r = classify(x);
    if (r.a) fixed += std::min(c.first, c.second);
    else if (r.u) sw.push_back({{r.k}, c.first, c.second, false});
    else if (r.g) sw.push_back({integer_roots(r.k), c.first, c.second, false});
    else fixed += c.first;
  }
  return fixed + detail::min_switch_cost(sw);
}

UusResult Case2Class::uus_check(const Rat& r) const {
  return orthogonal_uus(QS2(2 * p_.r), IndexSet::all(2), r);
}

Support Case2Class::target(const IndexSet& i1, const IndexSet& i2, const std::vector<Int>& j) const {
  if (i1.lower() < 2) throw FixtureError("l2_case2 needs I1 inside {2, 3, ...}");
  std::vector<Atom> atoms{Atom::basis(half_sqrt2(p_.eps_prime), i1), Atom::basis(QS2(2 * p_.r), i1),
                          Atom::basis(half_sqrt2(p_.eps1), i2)};
  if (!j.empty()) atoms.push_back(Atom::basis(half_sqrt2(p_.eps2), IndexSet::explicit_set(j)));
  return Support(std::move(atoms));
}

ExplicitClass Case2Class::truncation(const std::vector<std::vector<Int>>& e1,
                                     const std::vector<std::vector<Int>>& e2,
                                     const std::vector<std::vector<Int>>& j_pool) const {
  std::vector<Hypothesis> members;
  for (std::size_t i = 0; i < e1.size(); ++i) {
    for (std::size_t l = 0; l < e2.size(); ++l) {
      for (std::size_t q = 0; q < j_pool.size(); ++q) {
        std::vector<Atom> atoms{
            Atom::basis(half_sqrt2(p_.eps_prime), cofinite_power_closure(e1[i])),
            Atom::basis(QS2(2 * p_.r), cofinite(2, e1[i])),
            Atom::basis(half_sqrt2(p_.eps1), cofinite(1, e2[l]))};
        if (!j_pool[q].empty())
          atoms.push_back(Atom::basis(half_sqrt2(p_.eps2), IndexSet::explicit_set(j_pool[q])));
        members.push_back(detail::make_hypothesis(
            "h" + std::to_string(i) + "_" + std::to_string(l) + "_" + std::to_string(q),
            std::move(atoms)));
      }
    }
  }
  return ExplicitClass("l2_case2_truncation", Metric::l2(), std::move(members));
}

namespace {

// Waits for some u_K or g_K (K >= 2), then emits the least g_{K^n} outside B(seen, eps').
class Case2Rule : public Generator {
 public:
  Case2Rule(std::shared_ptr<const Case2Class> cls, Rat eps_prime, std::size_t budget)
      : cls_(std::move(cls)), ball_(Metric::l2(), std::move(eps_prime)), budget_(budget) {}
  std::string name() const override { return "g_rule"; }

  Move step(const Sample& seen) override {
    const BallIndex& ball = ball_.update(seen);
    for (; !k_ && scanned_ < seen.size(); ++scanned_) {
      auto r = cls_->classify(seen[scanned_]);
      if (r.u || (r.g && !r.a)) k_ = r.k;
    }
    if (!k_) return Move::abstain("threshold");
    Int kn = *k_;
    for (std::size_t n = 1; n <= budget_; ++n, kn *= *k_) {
      Point x = cls_->g(kn);
      if (!ball.covers(x)) return Move::emit(x);
    }
    return Move::abstain("budget");
  }

 private:
  std::shared_ptr<const Case2Class> cls_;
  SeenBall ball_;
  std::size_t budget_;
  std::size_t scanned_ = 0;
  std::optional<Int> k_;
};

Support case2_dense(const Case2Params& p) {
  return Support({Atom::basis(QS2(2 * p.r), IndexSet::all(2)),
                  Atom::basis(half_sqrt2(p.eps1), IndexSet::all(1)),
                  Atom::basis(half_sqrt2(p.eps2), IndexSet::all(1)),
                  Atom::basis(half_sqrt2(p.eps_prime), IndexSet::all(2))});
}

constexpr std::size_t kPrefixD = 3;

std::vector<Int> one_to(std::size_t d) {
  std::vector<Int> out;
  for (std::size_t k = 1; k <= d; ++k) out.push_back(idx(k));
  return out;
}

}  // namespace

Fixture fixture_l2_case2(const Case2Params& p) {
  auto cls = std::make_shared<Case2Class>(p);
  Fixture f;
  f.spec.name = "l2_case2";
  f.spec.params = {{"r", format_rat(p.r)}, {"eps1", format_rat(p.eps1)}, {"eps2", format_rat(p.eps2)},
                   {"eps_prime", format_rat(p.eps_prime)}, {"prefix_d", std::to_string(kPrefixD)}};
  Rat gp = p.eps_prime * Rat(4, 5);
  Rat ga = p.eps2 + (p.r - p.eps2) / 4;
  Rat gb = p.eps1 + (p.eps2 - p.eps1) / 3;
  Rat gc = p.eps1 * Rat(2, 3);
  f.spec.regimes = {
      {"a_uniform", ga, gp, "uniform_pass", "judge_uniform d*=2 vs obligated adversaries"},
      {"b_nonuniform", gb, gp, "uniform_fail_nonuniform_pass",
       "a_{k,2} prefix, J={1..d}: uniform d*=2 fails, nonuniform d_h=|J|+2 passes"},
      {"c_limit", gc, gp, "forced_errors",
       "obligated -> eventually correct; a_{k,1} prefix of length d forces an error at profile >= d, d<=6"},
      {"d_boundary", gc, p.eps_prime, "no_valid_move", "scan 500 candidates after g_k, k=2..9 (u_k first unless k is a perfect power)"},
  };
  f.cls = cls;
  f.r = p.r;

  f.generators.emplace_back("g_rule", [cls](const GameConfig& c) -> std::unique_ptr<Generator> {
    return std::make_unique<Case2Rule>(cls, c.eps_prime, c.budget);
  });
  f.generators.emplace_back("uniform", [cls](const GameConfig& c) -> std::unique_ptr<Generator> {
    return std::make_unique<UniformGenerator>(cls, c.eps, c.eps_prime, 2, c.budget);
  });
  f.generators.emplace_back("erm_search", [cls, p](const GameConfig& c) -> std::unique_ptr<Generator> {
    return std::make_unique<ErmSearchGenerator>(cls, c.eps, c.eps_prime, case2_dense(p), c.budget);
  });
  f.generators.emplace_back("abstain", [](const GameConfig&) -> std::unique_ptr<Generator> {
    return std::make_unique<AbstainGenerator>();
  });

  auto seeded = [cls](std::uint64_t seed, Sample prefix, std::optional<IndexSet> i2,
                      std::vector<Int> j) {
    std::mt19937_64 rng(seed);
    auto i1 = pick(rng, power_closed_pool());
    auto i2v = i2 ? *i2 : pick(rng, free_pool());
    if (j.empty() && prefix.empty()) {
      static const std::vector<std::vector<Int>> js = {{}, {1}, {2, 5}, {1, 2, 3}};
      j = pick(rng, js);
    }
    std::string jtxt;
    for (const auto& v : j) jtxt += (jtxt.empty() ? "" : ",") + v.get_str();
    Hypothesis h{"I1=" + i1.format() + " I2=" + i2v.format() + " J={" + jtxt + "}",
                 cls->target(i1, i2v, j)};
    AdversaryPlan plan{
        std::make_unique<EnumerationAdversary>(h.support, seed, 4, std::move(prefix)),
        CommitPolicy::fixed(h), h};
    return plan;
  };
  f.adversaries.emplace_back("obligated", [seeded](const GameConfig&, std::uint64_t seed) {
    return seeded(seed, {}, std::nullopt, {});
  });
  f.adversaries.emplace_back("a2_prefix", [seeded, cls](const GameConfig&, std::uint64_t seed) {
    Sample prefix;
    for (std::size_t k = 1; k <= kPrefixD; ++k) prefix.push_back(cls->a2(idx(k)));
    return seeded(seed, prefix, std::nullopt, one_to(kPrefixD));
  });
  for (std::size_t d = 1; d <= 6; ++d) {
    f.adversaries.emplace_back(
        "a1_prefix_" + std::to_string(d), [seeded, cls, d](const GameConfig&, std::uint64_t seed) {
          Sample prefix;
          for (std::size_t k = 1; k <= d; ++k) prefix.push_back(cls->a1(idx(k)));
          return seeded(seed, prefix, IndexSet::all(1), {});
        });
  }

  f.check = [cls, p](const Fixture& fx, const RegimeRow& row, const VerifyOptions& opts) {
    auto c = fx.config(row.gamma, row.gamma_prime, 100, opts.budget);
    if (row.label == "a_uniform") {
      return detail::sweep(fx, {"g_rule"}, "obligated", c, opts.seeds, opts, [](const Transcript& tr) {
        return judge_uniform(tr, 2).kind == Verdict::Kind::kEventuallyCorrect;
      });
    }
    if (row.label == "b_nonuniform") {
      return detail::sweep(fx, {"g_rule"}, "a2_prefix", c, opts.seeds, opts, [](const Transcript& tr) {
        return judge_uniform(tr, 2).kind == Verdict::Kind::kFailsWithinHorizon &&
               judge_nonuniform(tr, kPrefixD + 2).kind == Verdict::Kind::kEventuallyCorrect;
      });
    }
    if (row.label == "c_limit") {
      auto lc = fx.config(row.gamma, row.gamma_prime, 200, opts.budget);
      RegimeOutcome out = detail::sweep(fx, {"g_rule"}, "obligated", lc, opts.seeds, opts,
                                        detail::is_eventually_correct);
      std::size_t forced = 0;
      for (std::size_t d = 1; d <= 6; ++d) {
        Transcript tr = play_fixture(fx, "g_rule", "a1_prefix_" + std::to_string(d), c, d);
        bool hit = std::any_of(tr.rounds.begin(), tr.rounds.end(), [&](const Round& r) {
          return r.is_error() && tr.cover_profile[r.t - 1] >= d;
        });
        if (hit) ++forced;
        if (opts.sink) opts.sink->push_back(std::move(tr));
      }
      out.pass = out.pass && forced == 6;
      out.detail += " forced_d=" + std::to_string(forced) + "/6";
      return out;
    }
    RegimeOutcome out;
    std::size_t found = 0;
    // g_k alone forces u_k when k is not a perfect power, so u_k is revealed first there.
    for (unsigned long k = 2; k <= 9; ++k) {
      Sample s{cls->g(Int(k))};
      if (integer_roots(Int(k)).size() == 1) s.insert(s.begin(), cls->u(Int(k)));
      if (detail::find_valid_move(*cls, s, case2_dense(p), row.gamma_prime, 500)) ++found;
    }
    out.pass = found == 0;
    out.detail = "samples=8 budget=500 valid_moves=" + std::to_string(found);
    return out;
  };
  return f;
}

}  // namespace genlab
