#include <random>

#include "doctest.h"
#include "genlab/players.hpp"
#include "oracles.hpp"
#include "random_classes.hpp"

using namespace genlab;
using genlab_test::R;

namespace {

Point re(long v) { return Point::real(Rat(v)); }

Support lattice(long a, long m) { return Support({Atom::lattice(Point::Kind::kReal, a, m)}); }

std::shared_ptr<ExplicitClass> evens_mult3() {
  return std::make_shared<ExplicitClass>(
      "evens_mult3", Metric::abs(),
      std::vector<Hypothesis>{{"evens", lattice(0, 2)}, {"mult3", lattice(0, 3)}});
}

std::shared_ptr<ExplicitClass> single(const std::string& id, Support s) {
  return std::make_shared<ExplicitClass>(id, Metric::abs(), std::vector<Hypothesis>{{id, s}});
}

}  // namespace

TEST_CASE("uniform generator examples") {
  UniformGenerator g(evens_mult3(), R("1/2"), R("1/2"), 1, 100);
  auto m0 = g.step({});
  CHECK_FALSE(m0.is_emit());
  CHECK(m0.note == "threshold");
  auto m1 = g.step({re(0)});
  REQUIRE(m1.is_emit());
  CHECK(m1.point == re(6));
  auto m2 = g.step({re(0), re(6)});
  REQUIRE(m2.is_emit());
  CHECK(m2.point == re(-6));
}

TEST_CASE("uniform generator reports an exhausted search") {
  auto fin = std::make_shared<ExplicitClass>(
      "fin", Metric::abs(), std::vector<Hypothesis>{{"h", Support::of_points({re(0), re(1)})}});
  UniformGenerator g(fin, R("1/2"), R("1/2"), 1, 10);
  auto m = g.step({re(0), re(1)});
  CHECK_FALSE(m.is_emit());
  CHECK(m.note == "budget");
}

TEST_CASE("nonuniform generator") {
  auto cls = evens_mult3();
  NonUniformGenerator one({cls}, {1}, R("1/2"), R("1/2"), 100);
  UniformGenerator uni(cls, R("1/2"), R("1/2"), 1, 100);
  Sample seen;
  for (long v : {0, 6, 12, 2}) {
    seen.push_back(re(v));
    auto a = one.step(seen);
    auto b = uni.step(seen);
    CHECK(format_move(a) == format_move(b));
  }

  // H_n = first n members of an enumerated countable class.
  std::vector<Hypothesis> hs{{"m3", lattice(0, 3)}, {"m2", lattice(0, 2)}, {"m5", lattice(0, 5)}};
  std::vector<std::shared_ptr<const ExplicitClass>> ladder;
  for (std::size_t n = 1; n <= hs.size(); ++n) {
    ladder.push_back(std::make_shared<ExplicitClass>(
        "H" + std::to_string(n), Metric::abs(),
        std::vector<Hypothesis>(hs.begin(), hs.begin() + static_cast<long>(n))));
  }
  auto th = ladder_thresholds(ladder, R("1/2"), R("1/2"));
  CHECK(th == std::vector<std::size_t>{1, 1, 1});
  std::vector<std::shared_ptr<const HypothesisClass>> lad(ladder.begin(), ladder.end());
  NonUniformGenerator g(lad, th, R("1/2"), R("1/2"), 200);
  Sample s;
  for (long v : {0, 3, -3, 6, -6, 9}) {
    s.push_back(re(v));
    auto m = g.step(s);
    REQUIRE(m.is_emit());
    CHECK(g.last_level() == std::min<std::size_t>(s.size(), 3));
    // emitted point lies in the closure for the chosen level
    CHECK(*closure_contains(*ladder[g.last_level() - 1], s, m.point));
  }
  CHECK(lattice(0, 3).contains(g.step(s).point));

  // no member of level 2 contains 5
  NonUniformGenerator partial(lad, th, R("1/2"), R("1/2"), 100);
  auto bot = partial.step({re(0), re(5)});
  CHECK_FALSE(bot.is_emit());
  CHECK(bot.note == "bot");

  NonUniformGenerator high(lad, {5, 5, 5}, R("1/2"), R("1/2"), 100);
  CHECK_FALSE(high.step({re(0), re(2)}).is_emit());
}

TEST_CASE("limit generator with one class follows the uniform generator") {
  auto cls = evens_mult3();
  LimitGenerator lim({cls}, R("1/2"), R("1/2"), 0, 200);
  UniformGenerator uni(cls, R("1/2"), R("1/2"), 1, 200);
  // After t*, the limit generator scans its frozen enumeration; with a
  // singleton-closure-free reveal sequence the two coincide on novelty and membership.
  Sample seen;
  for (long v : {0, 6, -6, 12, -12}) {
    seen.push_back(re(v));
    auto a = lim.step(seen);
    auto b = uni.step(seen);
    REQUIRE(a.is_emit());
    REQUIRE(b.is_emit());
    CHECK(a.point == b.point);
  }
  CHECK(lim.t_star() == std::optional<std::size_t>(1));
}

TEST_CASE("limit generator switches to the surviving class") {
  std::vector<std::shared_ptr<const HypothesisClass>> classes{single("evens", lattice(0, 2)),
                                                              single("mult3", lattice(0, 3))};
  LimitGenerator lim(classes, R("1/2"), R("1/2"), 0, 200);
  Sample seen;
  std::vector<std::size_t> picks;
  for (long v : {0, 3, -3, 6, -6, 9, -9, 12, -12, 15}) {
    seen.push_back(re(v));
    auto m = lim.step(seen);
    REQUIRE(m.is_emit());
    picks.push_back(*lim.chosen());
  }
  CHECK(lim.survivors() == std::vector<std::size_t>{0, 1});
  for (std::size_t i = 2; i < picks.size(); ++i) CHECK(picks[i] == 1);
  for (std::size_t i = 1; i < picks.size(); ++i) CHECK(lim.counter(1) >= 1);
}

TEST_CASE("erm search generator") {
  auto cls = evens_mult3();
  ErmSearchGenerator g(cls, R("1/2"), R("1/2"), lattice(0, 1), 100);
  auto m = g.step({re(0)});
  REQUIRE(m.is_emit());
  CHECK(m.point == re(6));
  ErmSearchGenerator tiny(cls, R("1/2"), R("1/2"), lattice(0, 1), 3);
  CHECK_FALSE(tiny.step({re(0)}).is_emit());
}

TEST_CASE("erm search output is in the closure and novel") {
  std::mt19937_64 rng(17);
  int emitted = 0;
  for (int inst = 0; inst < 200; ++inst) {
    auto rc = genlab_test::random_class(rng, 4, 8, true);
    auto cls = std::make_shared<ExplicitClass>(rc.cls);
    auto& h = rc.cls.members()[rng() % rc.cls.members().size()];
    Sample seen = h.support.enumerate(1 + rng() % 4);
    Rat eps_prime(static_cast<long>(rng() % 3 + 1), 2);
    ErmSearchGenerator g(cls, eps_prime, eps_prime, lattice(0, 1), 400);
    auto m = g.step(seen);
    if (!m.is_emit()) continue;
    ++emitted;
    REQUIRE(*closure_contains(*cls, seen, m.point));
    REQUIRE_FALSE(in_set_ball(Metric::abs(), seen, eps_prime, m.point));
  }
  CHECK(emitted > 50);
}

TEST_CASE("enumeration adversary") {
  EnumerationAdversary ev(lattice(0, 2));
  Sample seen;
  std::vector<Point> got;
  for (std::size_t t = 1; t <= 3; ++t) got.push_back(ev.reveal(t, seen, {}));
  CHECK(got == std::vector<Point>{re(0), re(2), re(-2)});

  Support a3({Atom::int_set(Point::Kind::kReal, IndexSet::powers(3)),
              Atom::int_set(Point::Kind::kReal, IndexSet::affine(1, -1, IndexSet::powers(3)))});
  EnumerationAdversary adv(a3);
  std::vector<long> want{3, 2, 9, 8, 27};
  for (std::size_t t = 1; t <= 5; ++t) CHECK(adv.reveal(t, seen, {}) == re(want[t - 1]));

  EnumerationAdversary inj(lattice(0, 2), 0, 1, {re(100), re(102)});
  CHECK(inj.reveal(1, seen, {}) == re(100));
  CHECK(inj.reveal(2, seen, {}) == re(102));
  CHECK(inj.reveal(3, seen, {}) == re(0));

  EnumerationAdversary cyc(Support::of_points({re(1), re(2)}));
  std::vector<Point> c;
  for (std::size_t t = 1; t <= 5; ++t) c.push_back(cyc.reveal(t, seen, {}));
  CHECK(c == std::vector<Point>{re(1), re(2), re(1), re(2), re(1)});

  // shuffled blocks keep the same multiset per block
  EnumerationAdversary sh(lattice(0, 1), 7, 4);
  std::set<Point, PointLess> block;
  for (std::size_t t = 1; t <= 4; ++t) block.insert(sh.reveal(t, seen, {}));
  CHECK(block == std::set<Point, PointLess>{re(0), re(1), re(-1), re(2)});
}

TEST_CASE("trap adversary dodges generator outputs") {
  auto base = [](std::size_t i) { return re(static_cast<long>(i)); };
  TrapAdversary trap(Metric::abs(), base, 2, R("1/2"), 1000);
  Sample reveals;
  std::vector<Move> moves;
  for (std::size_t t = 1; t <= 30; ++t) {
    Point x = trap.reveal(t, reveals, moves);
    if (t > 2) {
      for (const auto& m : moves)
        if (m.is_emit()) CHECK_FALSE(in_ball(Metric::abs(), m.point, R("1/2"), x));
      CHECK_FALSE(in_set_ball(Metric::abs(), reveals, R("1/2"), x));
    }
    reveals.push_back(x);
    // a generator that always plays the next integer
    moves.push_back(Move::emit(re(static_cast<long>(x.real_value().get_num().get_si()) + 1)));
  }
  auto picks = trap.picks();
  for (std::size_t i = 1; i < picks.size(); ++i) CHECK(picks[i] > picks[i - 1]);

  TrapAdversary quiet(Metric::abs(), base, 0, R("3/2"), 1000);
  Sample qs;
  for (std::size_t t = 1; t <= 10; ++t) qs.push_back(quiet.reveal(t, qs, {}));
  for (std::size_t i = 0; i < qs.size(); ++i)
    for (std::size_t j = i + 1; j < qs.size(); ++j)
      CHECK(dist_cmp(Metric::abs(), qs[i], qs[j], R("3/2")) == Ordering::kGreater);

  TrapAdversary stuck(Metric::abs(), [](std::size_t) { return re(0); }, 1, R("1/2"), 10);
  Sample ss{stuck.reveal(1, {}, {})};
  CHECK_THROWS_AS(stuck.reveal(2, ss, {}), BaseExhausted);
}

TEST_CASE("staged trap advances one stage per hit") {
  StagedRows rows;
  rows.anchors = {re(-1)};
  rows.stage_head = [](std::size_t m) { return re(static_cast<long>(1000 * m)); };
  rows.row = [](std::size_t m, std::size_t j) { return re(static_cast<long>(1000 * m + j)); };
  rows.in_protected = [](std::size_t m, const Point& p) {
    return p == re(static_cast<long>(1000 * m + 500));
  };
  StagedTrapAdversary adv(rows, 3);
  Sample reveals;
  std::vector<Move> moves;
  auto play = [&](Move m) {
    Point x = adv.reveal(reveals.size() + 1, reveals, moves);
    reveals.push_back(x);
    moves.push_back(std::move(m));
    return x;
  };
  CHECK(play(Move::abstain()) == re(-1));
  // hits A_m at once
  CHECK(play(Move::emit(re(1500))) == re(1000));
  CHECK(play(Move::emit(re(2500))) == re(2000));
  CHECK(play(Move::abstain()) == re(3000));
  CHECK(adv.stage() == 3);
  // misses: the row continues
  CHECK(play(Move::emit(re(7))) == re(3001));
  CHECK(play(Move::emit(re(7))) == re(3002));
  CHECK(play(Move::emit(re(7))) == re(3003));
  CHECK_FALSE(adv.stalled());
  CHECK(play(Move::emit(re(7))) == re(3004));
  CHECK(adv.stalled());
}

TEST_CASE("generators are deterministic") {
  auto cls = evens_mult3();
  for (int rep = 0; rep < 2; ++rep) {
    UniformGenerator a(cls, R("1/2"), R("1/2"), 1, 100);
    UniformGenerator b(cls, R("1/2"), R("1/2"), 1, 100);
    Sample s;
    for (long v : {0, 6, 12, -6}) {
      s.push_back(re(v));
      CHECK(format_move(a.step(s)) == format_move(b.step(s)));
    }
  }
}

TEST_CASE("move text round trip") {
  for (const char* t : {"emit:real:3/1", "abstain", "abstain:budget"}) {
    CHECK(format_move(parse_move(t)) == t);
  }
  CHECK_THROWS_AS(parse_move("jump"), ParseError);
}
