#include <algorithm>
#include <map>
#include <random>
#include <unordered_map>

#include "fixture_util.hpp"
#include "genlab/fixtures.hpp"

namespace genlab {

namespace {

std::optional<Int> positive_int(const Point& x) {
  if (x.kind() != Point::Kind::kReal) return std::nullopt;
  const Rat& v = x.real_value();
  if (v.get_den() != 1 || v <= 0) return std::nullopt;
  return v.get_num();
}

bool is_power_of(Int v, const Int& p) {
  if (v < p) return false;
  while (v % p == 0) v /= p;
  return v == 1;
}

// Prime whose A_p could contain the positive integer v.
std::optional<Int> prime_hint(const Int& v) {
  auto q = odd_prime_power(mpz_odd_p(v.get_mpz_t()) ? v : Int(v + 1));
  if (!q) return std::nullopt;
  return q->first;
}

Int ipow(const Int& p, unsigned long n) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), p.get_mpz_t(), n);
  return out;
}

Atom evens_atom(std::vector<Int> values) {
  std::vector<Point> pts;
  for (auto& v : values) pts.push_back(Point::real(Rat(v)));
  return Atom::finite(std::move(pts));
}

// Emits x_1 until an odd prime power p^k shows up, then the least p^n outside
// the eps' balls of the reveals.
class PrimeRuleGenerator : public Generator {
 public:
  PrimeRuleGenerator(Rat eps_prime, std::size_t budget)
      : ball_(Metric::abs(), std::move(eps_prime)), budget_(budget) {}
  std::string name() const override { return "prime_rule"; }

  Move step(const Sample& seen) override {
    const BallIndex& ball = ball_.update(seen);
    for (; !prime_ && scanned_ < seen.size(); ++scanned_) {
      auto v = positive_int(seen[scanned_]);
      if (!v || mpz_even_p(v->get_mpz_t())) continue;
      if (auto q = odd_prime_power(*v)) prime_ = q->first;
    }
    if (seen.empty()) return Move::abstain("threshold");
    if (!prime_) return Move::emit(seen.front());
    Int pn = *prime_;
    for (std::size_t n = 1; n <= budget_; ++n, pn *= *prime_) {
      Point x = Point::real(Rat(pn));
      if (!ball.covers(x)) return Move::emit(x);
    }
    return Move::abstain("budget");
  }

 private:
  SeenBall ball_;
  std::size_t budget_;
  std::size_t scanned_ = 0;
  std::optional<Int> prime_;
};

// Odd primes p_0 = 3, p_1 = 5, ... extended on demand.
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

PrimeRealsClass::PrimeRealsClass(std::optional<Int> fixed_prime) : fixed_(std::move(fixed_prime)) {}

std::string PrimeRealsClass::name() const {
  return fixed_ ? "prime_reals p=" + fixed_->get_str() : "prime_reals";
}

Support PrimeRealsClass::a_p(const Int& p) {
  return Support({Atom::int_set(Point::Kind::kReal, IndexSet::powers(p)),
                  Atom::int_set(Point::Kind::kReal, IndexSet::affine(1, -1, IndexSet::powers(p)))});
}

bool PrimeRealsClass::in_a_p(const Int& p, const Point& x) {
  auto v = positive_int(x);
  return v && (is_power_of(*v, p) || is_power_of(*v + 1, p));
}

bool PrimeRealsClass::consistent(const Sample& s) const {
  std::optional<Int> p = fixed_;
  for (const auto& x : s) {
    auto v = positive_int(x);
    if (!v) return false;
    if (mpz_even_p(v->get_mpz_t())) continue;
    auto q = odd_prime_power(*v);
    if (!q || (p && *p != q->first)) return false;
    p = q->first;
  }
  return true;
}

std::optional<Support> PrimeRealsClass::closure(const Sample& s) const {
  if (!consistent(s)) return std::nullopt;
  std::optional<Int> p = fixed_;
  for (const auto& x : s) {
    Int v = *positive_int(x);
    if (mpz_odd_p(v.get_mpz_t())) p = odd_prime_power(v)->first;
  }
  if (!p) {
    // Intersection over every prime: only the reveals survive.
    if (s.empty()) return Support();
    return Support::of_points(dedup_points(s));
  }
  std::vector<Int> extra;
  for (const auto& x : dedup_points(s))
    if (!in_a_p(*p, x)) extra.push_back(*positive_int(x));
  auto atoms = a_p(*p).atoms();
  if (!extra.empty()) atoms.push_back(evens_atom(std::move(extra)));
  return Support(std::move(atoms));
}

const std::optional<Int>& PrimeRealsClass::hint(const Int& v) const {
  auto it = hints_.find(v);
  if (it == hints_.end()) it = hints_.emplace(v, prime_hint(v)).first;
  return it->second;
}

namespace {

struct IntPtrHash {
  std::size_t operator()(const Int* v) const {
    return mpz_get_ui(v->get_mpz_t()) ^ (mpz_size(v->get_mpz_t()) << 56);
  }
};
struct IntPtrEq {
  bool operator()(const Int* a, const Int* b) const { return *a == *b; }
};

}  // namespace

std::size_t PrimeRealsClass::erm(const LabeledSample& s) const {
  // Only positive integers can be in a support; group those by value.
  std::unordered_map<const Int*, std::pair<std::size_t, std::size_t>, IntPtrHash, IntPtrEq> counts;
  long base = 0;
  for (const auto& l : s) {
    const Point& x = l.point;
    bool pos_int = x.kind() == Point::Kind::kReal && x.real_value().get_den() == 1 &&
                   x.real_value() > 0;
    if (!pos_int) {
      base += l.label ? 1 : 0;
      continue;
    }
    auto& c = counts[&x.real_value().get_num()];
    (l.label ? c.first : c.second) += 1;
  }
  // Outside every A_p a point costs min(pos, neg) when even (B is free) and
  // pos otherwise; choosing p moves the points of A_p to cost neg.
  std::map<Int, long> delta;
  for (const auto& [v, c] : counts) {
    long out = mpz_even_p(v->get_mpz_t()) ? std::min(c.first, c.second) : c.first;
    base += out;
    if (const auto& q = hint(*v)) delta[*q] += static_cast<long>(c.second) - out;
  }
  if (fixed_) {
    auto it = delta.find(*fixed_);
    return static_cast<std::size_t>(base + (it == delta.end() ? 0 : it->second));
  }
  long best = 0;  // a prime no sample point touches
  for (const auto& [q, d] : delta) best = std::min(best, d);
  return static_cast<std::size_t>(base + best);
}

UusResult PrimeRealsClass::uus_check(const Rat& r) const {
  // Powers of p are p^2 - p >= 6 apart; the smallest gap is at p = 3.
  Int p = fixed_ ? *fixed_ : Int(3);
  Rat gap(p * p - p);
  UusResult out;
  if (gap * gap <= 4 * r * r) return out;
  SeparationWitness w;
  w.kind = SeparationWitness::Kind::kSeparated;
  w.family = Atom::int_set(Point::Kind::kReal, IndexSet::powers(p));
  w.separation_sq = QS2(gap * gap);
  w.radius = r;
  out.kind = UusResult::Kind::kSatisfied;
  out.witnesses.emplace_back(fixed_ ? "A_" + p.get_str() : "A_p", w);
  return out;
}

ExplicitClass PrimeRealsClass::truncation(const std::vector<Int>& primes,
                                          const std::vector<Int>& even_pool) {
  std::vector<Hypothesis> members;
  for (const auto& p : primes) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << even_pool.size()); ++mask) {
      std::vector<Int> b;
      std::string id = "p" + p.get_str() + "_b";
      for (std::size_t i = 0; i < even_pool.size(); ++i) {
        if (mask >> i & 1) {
          b.push_back(even_pool[i]);
          id += "_" + even_pool[i].get_str();
        }
      }
      auto atoms = a_p(p).atoms();
      if (!b.empty()) atoms.push_back(evens_atom(std::move(b)));
      members.push_back(detail::make_hypothesis(std::move(id), std::move(atoms)));
    }
  }
  return ExplicitClass("prime_reals_truncation", Metric::abs(), std::move(members));
}

Fixture fixture_prime_reals(std::size_t prime_count) {
  if (prime_count == 0) throw FixtureError("prime_reals needs at least one prime");
  Fixture f;
  auto primes = odd_primes(prime_count);
  f.spec.name = "prime_reals";
  f.spec.params = {{"prime_count", std::to_string(prime_count)},
                   {"largest_prime", primes.back().get_str()},
                   {"r", "2/1"}};
  f.spec.regimes = {
      {"eps_below_one", Rat(1, 2), Rat(1), "eventually_correct",
       "prime_rule and limit vs obligated adversaries, horizon 400"},
      {"eps_one", Rat(1), Rat(1), "fails_within_horizon",
       "staged trap vs every generator, horizon 200, last error after 150"},
  };
  f.cls = std::make_shared<PrimeRealsClass>();
  f.r = Rat(2);

  auto cls = f.cls;
  f.generators.emplace_back("prime_rule", [](const GameConfig& c) -> std::unique_ptr<Generator> {
    return std::make_unique<PrimeRuleGenerator>(c.eps_prime, c.budget);
  });
  f.generators.emplace_back("limit", [primes](const GameConfig& c) -> std::unique_ptr<Generator> {
    std::vector<std::shared_ptr<const HypothesisClass>> ladder;
    for (const auto& p : primes) ladder.push_back(std::make_shared<PrimeRealsClass>(p));
    return std::make_unique<LimitGenerator>(std::move(ladder), c.eps, c.eps_prime, 0, c.budget);
  });
  f.generators.emplace_back("erm_search", [cls](const GameConfig& c) -> std::unique_ptr<Generator> {
    Support dense({Atom::int_set(Point::Kind::kReal, IndexSet::all(1))});
    return std::make_unique<ErmSearchGenerator>(cls, c.eps, c.eps_prime, dense, c.budget);
  });
  f.generators.emplace_back("abstain", [](const GameConfig&) -> std::unique_ptr<Generator> {
    return std::make_unique<AbstainGenerator>();
  });

  // A_p ∪ B with p among the first four primes and B one of four shapes.
  f.adversaries.emplace_back("obligated", [](const GameConfig&, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    static const std::vector<Int> ps = {3, 5, 7, 11};
    Int p = ps[rng() % ps.size()];
    auto atoms = PrimeRealsClass::a_p(p).atoms();
    std::string b;
    switch (rng() % 4) {
      case 0:
        b = "none";
        break;
      case 1:
        b = "evens";
        atoms.push_back(Atom::int_set(Point::Kind::kReal, IndexSet::residue(0, 2, 2)));
        break;
      case 2:
        b = "mult4";
        atoms.push_back(Atom::int_set(Point::Kind::kReal, IndexSet::residue(0, 4, 4)));
        break;
      default:
        b = "2_4_8";
        atoms.push_back(evens_atom({2, 4, 8}));
        break;
    }
    Hypothesis h = detail::make_hypothesis("A" + p.get_str() + "_" + b, std::move(atoms));
    AdversaryPlan plan{std::make_unique<EnumerationAdversary>(h.support, seed, 4),
                       CommitPolicy::fixed(h), h};
    return plan;
  });

  // Heads 3^m - 1, rows p_m^j - 1; protected set of stage m is A_{p_m}.
  f.adversaries.emplace_back("staged_trap", [](const GameConfig& c, std::uint64_t) {
    auto list = std::make_shared<PrimeList>();
    StagedRows rows;
    rows.stage_head = [](std::size_t m) {
      return Point::real(Rat(ipow(3, static_cast<unsigned long>(m)) - 1));
    };
    rows.row = [list](std::size_t m, std::size_t j) {
      return Point::real(Rat(ipow(list->at(m), static_cast<unsigned long>(j)) - 1));
    };
    rows.in_protected = [list](std::size_t m, const Point& x) {
      return PrimeRealsClass::in_a_p(list->at(m), x);
    };
    auto candidates = [](const Sample& reveals) {
      std::vector<Int> ps = {3};
      for (const auto& x : reveals) {
        auto v = positive_int(x);
        if (!v) continue;
        auto q = prime_hint(*v);
        if (q && std::find(ps.begin(), ps.end(), *q) == ps.end()) ps.push_back(*q);
      }
      std::vector<Hypothesis> out;
      for (const auto& p : ps) {
        std::vector<Int> b;
        for (const auto& x : dedup_points(reveals))
          if (!PrimeRealsClass::in_a_p(p, x)) b.push_back(*positive_int(x));
        auto atoms = PrimeRealsClass::a_p(p).atoms();
        if (!b.empty()) atoms.push_back(evens_atom(std::move(b)));
        out.push_back(detail::make_hypothesis("A" + p.get_str() + "_revealed", std::move(atoms)));
      }
      return out;
    };
    AdversaryPlan plan{std::make_unique<StagedTrapAdversary>(std::move(rows), c.horizon),
                       CommitPolicy::deferred(candidates), std::nullopt};
    return plan;
  });

  f.check = [](const Fixture& fx, const RegimeRow& row, const VerifyOptions& opts) {
    if (row.label == "eps_below_one") {
      auto c = fx.config(row.gamma, row.gamma_prime, 400, opts.budget);
      return detail::sweep(fx, {"prime_rule", "limit"}, "obligated", c, opts.seeds, opts,
                           detail::is_eventually_correct);
    }
    auto c = fx.config(row.gamma, row.gamma_prime, 200, opts.budget);
    return detail::sweep(fx, {"prime_rule", "limit", "erm_search", "abstain"}, "staged_trap", c, 1,
                         opts, detail::fails_within_horizon);
  };
  return f;
}

}  // namespace genlab
