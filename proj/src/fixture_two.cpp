#include "fixture_util.hpp"
#include "genlab/fixtures.hpp"

namespace genlab {

namespace {

QS2 half_sqrt2(const Rat& c) { return QS2(Rat(0), c / 2); }

// Emits the least g_k with k in `parity` (0 even, 1 odd, 2 by round) outside B(seen, eps').
class ParityGenerator : public Generator {
 public:
  ParityGenerator(std::string name, int parity, QS2 g_scale, Rat eps_prime, std::size_t budget)
      : name_(std::move(name)),
        parity_(parity),
        scale_(std::move(g_scale)),
        ball_(Metric::l2(), std::move(eps_prime)),
        budget_(budget) {}
  std::string name() const override { return name_; }

  Move step(const Sample& seen) override {
    const BallIndex& ball = ball_.update(seen);
    int want = parity_ == 2 ? static_cast<int>(seen.size() % 2) : parity_;
    for (std::size_t k = want == 0 ? 2 : 1; k <= budget_; k += 2) {
      Point x = Point::basis(Int(static_cast<unsigned long>(k)), scale_);
      if (!ball.covers(x)) return Move::emit(x);
    }
    return Move::abstain("budget");
  }

 private:
  std::string name_;
  int parity_;
  QS2 scale_;
  SeenBall ball_;
  std::size_t budget_;
};

}  // namespace

ExplicitClass two_hypotheses_class(const Rat& eps_prime, const Rat& r) {
  Atom a = Atom::basis(half_sqrt2(eps_prime), IndexSet::all(1));
  return ExplicitClass(
      "two_hypotheses", Metric::l2(),
      {detail::make_hypothesis("h1", {a, Atom::basis(half_sqrt2(r), IndexSet::residue(0, 2, 2))}),
       detail::make_hypothesis("h2", {a, Atom::basis(half_sqrt2(r), IndexSet::residue(1, 2, 3))})});
}

Fixture fixture_two_hypotheses(const Rat& eps, const Rat& eps_prime, const Rat& r) {
  if (!(eps > 0 && eps < eps_prime && eps_prime <= r)) {
    throw FixtureError("two_hypotheses needs 0 < eps < eps' <= r");
  }
  Fixture f;
  f.spec.name = "two_hypotheses";
  f.spec.params = {{"eps", format_rat(eps)}, {"eps_prime", format_rat(eps_prime)},
                   {"r", format_rat(r)}, {"ground", "a_1..a_8,g_1,g_2"}, {"max_len", "8"}};
  f.spec.regimes = {
      {"dimension", eps, eps_prime, "dimension_lower_bound", "brute force reaches every d <= 8"},
      {"trap", eps, eps_prime, "no_long_clean_suffix",
       "deferred trap vs every generator, horizon 40, clean suffix <= 20"},
  };
  auto cls = std::make_shared<ExplicitClass>(two_hypotheses_class(eps_prime, r));
  f.cls = cls;
  f.r = r;
  // Each support has covering number 1 at radius r under closed balls.
  f.uus_override = true;

  QS2 g_scale = half_sqrt2(r);
  QS2 a_scale = half_sqrt2(eps_prime);
  f.generators.emplace_back("uniform", [cls](const GameConfig& c) -> std::unique_ptr<Generator> {
    return std::make_unique<UniformGenerator>(cls, c.eps, c.eps_prime, 1, c.budget);
  });
  f.generators.emplace_back("erm_search", [cls](const GameConfig& c) -> std::unique_ptr<Generator> {
    Support dense;
    for (const auto& h : cls->members()) dense = dense.unite(h.support);
    return std::make_unique<ErmSearchGenerator>(cls, c.eps, c.eps_prime, dense, c.budget);
  });
  f.generators.emplace_back("limit", [cls](const GameConfig& c) -> std::unique_ptr<Generator> {
    std::vector<std::shared_ptr<const HypothesisClass>> parts;
    for (const auto& h : cls->members())
      parts.push_back(std::make_shared<ExplicitClass>(h.id, cls->metric(), std::vector{h}));
    return std::make_unique<LimitGenerator>(std::move(parts), c.eps, c.eps_prime, 0, c.budget);
  });
  f.generators.emplace_back("abstain", [](const GameConfig&) -> std::unique_ptr<Generator> {
    return std::make_unique<AbstainGenerator>();
  });
  const std::pair<const char*, int> parities[] = {{"even_g", 0}, {"odd_g", 1}, {"alternating", 2}};
  for (const auto& [name, parity] : parities) {
    std::string n = name;
    int par = parity;
    f.generators.emplace_back(n, [n, par, g_scale](const GameConfig& c) -> std::unique_ptr<Generator> {
      return std::make_unique<ParityGenerator>(n, par, g_scale, c.eps_prime, c.budget);
    });
  }

  // Reveals a_1, a_2, ...: every a_k sits in the closed eps'-ball of any other.
  f.adversaries.emplace_back("trap", [cls, a_scale](const GameConfig& c, std::uint64_t) {
    auto base = [a_scale](std::size_t k) {
      return Point::basis(Int(static_cast<unsigned long>(k)), a_scale);
    };
    auto members = cls->members();
    AdversaryPlan plan{
        std::make_unique<TrapAdversary>(Metric::l2(), base, c.horizon, c.eps_prime, c.budget),
        CommitPolicy::deferred([members](const Sample&) { return members; }), std::nullopt};
    return plan;
  });
  f.adversaries.emplace_back("obligated", [cls](const GameConfig&, std::uint64_t seed) {
    const Hypothesis& h = cls->members()[seed % 2];
    AdversaryPlan plan{std::make_unique<EnumerationAdversary>(h.support, seed, 4),
                       CommitPolicy::fixed(h), h};
    return plan;
  });

  f.check = [a_scale, g_scale](const Fixture& fx, const RegimeRow& row, const VerifyOptions& opts) {
    RegimeOutcome out;
    if (row.label == "dimension") {
      std::vector<Point> ground;
      for (unsigned long k = 1; k <= 8; ++k) ground.push_back(Point::basis(Int(k), a_scale));
      ground.push_back(Point::basis(Int(1), g_scale));
      ground.push_back(Point::basis(Int(2), g_scale));
      auto d = closure_dimension_bruteforce(*fx.cls, row.gamma, row.gamma_prime, ground, 8);
      out.pass = true;
      for (std::size_t v = 1; v <= 8; ++v) out.pass = out.pass && d.achieved.count(v) > 0;
      out.detail = format_dim(d);
      return out;
    }
    std::vector<std::string> names;
    for (const auto& [n, g] : fx.generators) names.push_back(n);
    auto c = fx.config(row.gamma, row.gamma_prime, 40, opts.budget);
    return detail::sweep(fx, names, "trap", c, 1, opts,
                         [](const Transcript& tr) { return 2 * clean_suffix(tr) <= tr.rounds.size(); });
  };
  return f;
}

}  // namespace genlab
