#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "fixture_util.hpp"
#include "genlab/fixtures.hpp"

namespace genlab {

namespace {

QS2 level_scale(std::size_t m) {
  Rat s(1);
  for (std::size_t i = 0; i < m; ++i) s /= 2;
  return QS2(Rat(0), s);
}

Int odd_part(Int k) {
  while (k > 0 && mpz_even_p(k.get_mpz_t())) k /= 2;
  return k;
}

Int idx(std::size_t k) { return Int(static_cast<unsigned long>(k)); }

}  // namespace

Metric weighted_rho_prime() { return Metric::weighted_l2(Rat(1, 4), Rat(1)); }

WeightedClass::WeightedClass(Metric metric, std::size_t levels)
    : metric_(std::move(metric)), levels_(levels) {
  if (levels_ == 0) throw FixtureError("weighted_metric needs at least one level");
  if (metric_.point_kind() != Point::Kind::kVec) throw FixtureError("weighted_metric lives in l2");
}

std::string WeightedClass::name() const { return "weighted_metric " + format_metric(metric_); }

Point WeightedClass::a(std::size_t m, const Int& k) { return Point::basis(k, level_scale(m)); }

std::optional<std::pair<std::size_t, Int>> WeightedClass::classify(const Point& x) const {
  if (x.kind() != Point::Kind::kVec || !x.is_axis_point()) return std::nullopt;
  for (std::size_t m = 1; m <= levels_; ++m) {
    if (x.axis_coord() != level_scale(m)) continue;
    Int o = odd_part(x.axis());
    if (o < 3) return std::nullopt;
    return std::make_pair(m, Int((o - 1) / 2));
  }
  return std::nullopt;
}

Atom WeightedClass::level_family(std::size_t m, const IndexSet& odd_index_set) const {
  return Atom::basis(level_scale(m), IndexSet::dyadic(odd_index_set));
}

bool WeightedClass::consistent(const Sample& s) const {
  return std::all_of(s.begin(), s.end(), [&](const Point& x) { return classify(x).has_value(); });
}

std::optional<Support> WeightedClass::closure(const Sample& s) const {
  if (!consistent(s)) return std::nullopt;
  std::set<std::pair<std::size_t, Int>> groups;
  for (const auto& x : s) groups.insert(*classify(x));
  std::vector<Atom> atoms;
  for (const auto& [m, j] : groups)
    atoms.push_back(Atom::basis(level_scale(m), IndexSet::geometric(2 * j + 1, 2)));
  return Support(std::move(atoms));
}

std::size_t WeightedClass::erm(const LabeledSample& s) const {
  // Every (level, j) group is in or out as a whole and is otherwise unconstrained.
  std::map<std::pair<std::size_t, Int>, std::pair<std::size_t, std::size_t>> groups;
  std::size_t cost = 0;
  for (const auto& l : s) {
    auto c = classify(l.point);
    if (!c) {
      cost += l.label ? 1 : 0;
      continue;
    }
    auto& g = groups[*c];
    (l.label ? g.first : g.second) += 1;
  }
  for (const auto& [key, g] : groups) cost += std::min(g.first, g.second);
  return cost;
}

UusResult WeightedClass::uus_check(const Rat& r) const {
  // Every support holds a_{1,2j+1} for infinitely many j: odd axes, coordinate^2 = 1/2.
  UusResult out;
  QS2 c = level_scale(1);
  Rat w = metric_.kind == Metric::Kind::kWeightedL2 ? metric_.odd_weight : Rat(1);
  if (compare(c * c * w, QS2(r * r)) <= 0) return out;
  SeparationWitness wit;
  wit.kind = SeparationWitness::Kind::kOrthogonal;
  wit.family = Atom::basis(c, IndexSet::residue(1, 2, 3));
  wit.separation_sq = c * c * (2 * w);
  wit.radius = r;
  wit.weight = w;
  out.kind = UusResult::Kind::kSatisfied;
  out.witnesses.emplace_back("a_{1,2j+1}", wit);
  return out;
}

Fixture fixture_weighted_metric(std::size_t levels) {
  auto cls = std::make_shared<WeightedClass>(weighted_rho_prime(), levels);
  Rat tau(3, 5);
  Fixture f;
  f.spec.name = "weighted_metric";
  f.spec.params = {{"levels", std::to_string(levels)}, {"tau", format_rat(tau)}, {"r", format_rat(tau)},
                   {"rho", "l2"}, {"rho_prime", format_metric(weighted_rho_prime())},
                   {"ground", "a_{m,k} m<=levels k in 3,5,6,7,10,12"}, {"max_len", "3"}};
  f.spec.regimes = {
      {"rho_dimension", tau, tau, "dimension_at_most_2", "brute force under plain l2"},
      {"rho_prime_trap", tau, tau, "fails_within_horizon",
       "trap base a_{1,3}, a_{1,6}, a_{1,2i-1} vs every generator, horizon 200"},
  };
  f.cls = cls;
  f.r = tau;

  auto dense = [levels]() {
    std::vector<Atom> atoms;
    for (std::size_t m = 1; m <= levels; ++m) atoms.push_back(Atom::basis(level_scale(m), IndexSet::all(1)));
    return Support(std::move(atoms));
  };
  f.generators.emplace_back("uniform", [cls](const GameConfig& c) -> std::unique_ptr<Generator> {
    return std::make_unique<UniformGenerator>(cls, c.eps, c.eps_prime, 2, c.budget);
  });
  f.generators.emplace_back("erm_search", [cls, dense](const GameConfig& c) -> std::unique_ptr<Generator> {
    return std::make_unique<ErmSearchGenerator>(cls, c.eps, c.eps_prime, dense(), c.budget);
  });
  f.generators.emplace_back("limit", [cls](const GameConfig& c) -> std::unique_ptr<Generator> {
    return std::make_unique<LimitGenerator>(std::vector<std::shared_ptr<const HypothesisClass>>{cls},
                                            c.eps, c.eps_prime, 0, c.budget);
  });
  f.generators.emplace_back("abstain", [](const GameConfig&) -> std::unique_ptr<Generator> {
    return std::make_unique<AbstainGenerator>();
  });

  // Level 1 is the trapped level; levels >= 2 commit to powers of 3 or of 5.
  f.adversaries.emplace_back("trap", [cls, levels](const GameConfig& c, std::uint64_t) {
    auto base = [](std::size_t i) {
      if (i == 1) return WeightedClass::a(1, 3);
      if (i == 2) return WeightedClass::a(1, 6);
      return WeightedClass::a(1, idx(2 * i - 1));
    };
    auto candidates = [cls, levels](const Sample& reveals) {
      std::vector<Int> odd;
      for (const auto& x : reveals) {
        auto g = cls->classify(x);
        if (g && g->first == 1) odd.push_back(2 * g->second + 1);
      }
      std::vector<Hypothesis> out;
      for (int q : {3, 5}) {
        std::vector<Atom> atoms{cls->level_family(1, IndexSet::explicit_set(odd))};
        for (std::size_t m = 2; m <= levels; ++m)
          atoms.push_back(cls->level_family(m, IndexSet::affine(2, 1, IndexSet::powers(q))));
        out.push_back(detail::make_hypothesis("levels>=2 I=powers:" + std::to_string(q), std::move(atoms)));
      }
      return out;
    };
    AdversaryPlan plan{std::make_unique<TrapAdversary>(cls->metric(), base, 2, c.eps_prime, c.budget),
                       CommitPolicy::deferred(candidates), std::nullopt};
    return plan;
  });
  f.adversaries.emplace_back("obligated", [cls, levels](const GameConfig&, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    static const std::vector<IndexSet> pool = {IndexSet::all(1), IndexSet::residue(0, 2, 2),
                                               IndexSet::residue(1, 2, 1), IndexSet::powers(3)};
    std::vector<Atom> atoms;
    std::string id;
    for (std::size_t m = 1; m <= levels; ++m) {
      const IndexSet& i = pool[rng() % pool.size()];
      atoms.push_back(cls->level_family(m, IndexSet::affine(2, 1, i)));
      id += (id.empty() ? "" : " ") + ("I" + std::to_string(m) + "=" + i.format());
    }
    Hypothesis h = detail::make_hypothesis(id, std::move(atoms));
    AdversaryPlan plan{std::make_unique<EnumerationAdversary>(h.support, seed, 4),
                       CommitPolicy::fixed(h), h};
    return plan;
  });

  f.check = [levels](const Fixture& fx, const RegimeRow& row, const VerifyOptions& opts) {
    if (row.label == "rho_dimension") {
      WeightedClass plain(Metric::l2(), levels);
      std::vector<Point> ground;
      for (std::size_t m = 1; m <= levels; ++m)
        for (int k : {3, 5, 6, 7, 10, 12}) ground.push_back(WeightedClass::a(m, k));
      auto d = closure_dimension_bruteforce(plain, row.gamma, row.gamma_prime, ground, 3);
      RegimeOutcome out;
      out.pass = d.d <= 2 && d.undecided == 0;
      out.detail = format_dim(d);
      return out;
    }
    // rho'(a_{m,k}, a_{m,k'}) = 1/2^m for distinct even k, k'.
    std::size_t exact = 0, checked = 0;
    for (std::size_t m = 1; m <= levels; ++m) {
      Rat want(1);
      for (std::size_t i = 0; i < m; ++i) want /= 2;
      for (int k : {2, 4, 6})
        for (int k2 : {8, 10, 12}) {
          ++checked;
          auto cmp = dist_cmp(fx.cls->metric(), WeightedClass::a(m, k), WeightedClass::a(m, k2), want);
          if (cmp == Ordering::kEqual) ++exact;
        }
    }
    std::vector<std::string> names;
    for (const auto& [n, g] : fx.generators) names.push_back(n);
    auto c = fx.config(row.gamma, row.gamma_prime, 200, opts.budget);
    auto out = detail::sweep(fx, names, "trap", c, 1, opts, detail::fails_within_horizon);
    out.pass = out.pass && exact == checked;
    out.detail += " rho_prime_exact=" + std::to_string(exact) + "/" + std::to_string(checked);
    return out;
  };
  return f;
}

}  // namespace genlab
