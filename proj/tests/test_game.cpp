#include "doctest.h"
#include "genlab/game.hpp"
#include "oracles.hpp"

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

GameConfig half(std::size_t T) {
  GameConfig c;
  c.eps = R("1/2");
  c.eps_prime = R("1/2");
  c.r = R("1/2");
  c.horizon = T;
  return c;
}

// Synthetic transcript: pattern[i] is 'p' pass, 'f' fail, 'a' unscored abstain.
Transcript synthetic(const std::string& pattern, std::vector<std::size_t> cover = {}) {
  Transcript tr;
  tr.metric = Metric::abs();
  tr.config.horizon = pattern.size();
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    Round r;
    r.t = i + 1;
    r.revealed = re(static_cast<long>(10 * i));
    if (pattern[i] == 'a') {
      r.move = Move::abstain();
      r.scored = false;
    } else {
      r.move = Move::emit(re(static_cast<long>(10 * i + 5)));
      r.member_ok = true;
      r.novel_ok = pattern[i] == 'p';
      r.scored = true;
    }
    tr.rounds.push_back(r);
    tr.cover_profile.push_back(cover.empty() ? i + 1 : cover[i]);
  }
  return tr;
}

}  // namespace

TEST_CASE("run_game with an upfront commitment") {
  auto cls = evens_mult3();
  EnumerationAdversary adv(lattice(0, 2));
  UniformGenerator gen(cls, R("1/2"), R("1/2"), 1, 200);
  auto tr = run_game(half(10), *cls, adv, gen, CommitPolicy::fixed(cls->member("evens")));
  REQUIRE(tr.rounds.size() == 10);
  for (const auto& r : tr.rounds) {
    CHECK(r.passes());
    // replay both flags by brute force
    CHECK(*r.member_ok == (r.move.point.real_value().get_num() % 2 == 0));
    Sample prefix;
    for (std::size_t i = 0; i < r.t; ++i) prefix.push_back(tr.rounds[i].revealed);
    CHECK(*r.novel_ok == !in_set_ball(Metric::abs(), prefix, R("1/2"), r.move.point));
  }
  CHECK(judge_limit(tr).kind == Verdict::Kind::kEventuallyCorrect);
  CHECK(judge_uniform(tr, 1).kind == Verdict::Kind::kEventuallyCorrect);
  CHECK(check_cover_obligation(tr, lattice(0, 2), R("1/2"), 10));
  CHECK_FALSE(check_cover_obligation(tr, lattice(0, 2), R("1/2"), 11));
  for (std::size_t i = 1; i < tr.cover_profile.size(); ++i)
    CHECK(tr.cover_profile[i] >= tr.cover_profile[i - 1]);
}

TEST_CASE("run_game edge cases") {
  auto cls = evens_mult3();
  EnumerationAdversary adv(lattice(0, 2));
  AbstainGenerator gen;
  auto tr = run_game(half(0), *cls, adv, gen, CommitPolicy::fixed(cls->member("evens")));
  CHECK(tr.rounds.empty());
  CHECK(judge_limit(tr).kind == Verdict::Kind::kInconclusive);

  GameConfig bad = half(3);
  bad.eps = R("3/4");
  CHECK_THROWS_AS(run_game(bad, *cls, adv, gen, CommitPolicy::fixed(cls->member("evens"))),
                  ConfigError);

  ExplicitClass fin("fin", Metric::abs(), {{"h", Support::of_points({re(0), re(1)})}});
  EnumerationAdversary fa(Support::of_points({re(0), re(1)}));
  CHECK_THROWS_AS(run_game(half(3), fin, fa, gen, CommitPolicy::fixed(fin.members()[0])),
                  ConfigError);
  GameConfig ov = half(3);
  ov.uus_override = true;
  EnumerationAdversary fa2(Support::of_points({re(0), re(1)}));
  CHECK(run_game(ov, fin, fa2, gen, CommitPolicy::fixed(fin.members()[0])).rounds.size() == 3);

  ScriptedAdversary sc({re(0), re(3)});
  CHECK_THROWS_AS(run_game(half(2), *cls, sc, gen, CommitPolicy::fixed(cls->member("evens"))),
                  AdversaryIllegalReveal);
  ScriptedAdversary sc2({re(0), re(3)});
  auto offer = [&](const Sample&) { return std::vector<Hypothesis>{cls->member("evens")}; };
  CHECK_THROWS_AS(run_game(half(2), *cls, sc2, gen, CommitPolicy::deferred(offer)),
                  AdversaryIllegalReveal);
}

TEST_CASE("deferred commitment picks the worst consistent hypothesis") {
  auto cls = evens_mult3();
  // reveals only 0: both hypotheses stay consistent; the generator plays 2.
  ScriptedAdversary sc({re(0)});
  FunctionGenerator gen("two", [](const Sample&) { return Move::emit(re(2)); });
  auto offer = [&](const Sample&) { return cls->members(); };
  auto tr = run_game(half(4), *cls, sc, gen, CommitPolicy::deferred(offer));
  CHECK(tr.committed == "mult3");
  for (const auto& r : tr.rounds) CHECK(r.is_error());
}

TEST_CASE("judge_limit examples") {
  std::string p(100, 'p');
  p[0] = p[1] = p[2] = 'f';
  auto v = judge_limit(synthetic(p));
  CHECK(v.kind == Verdict::Kind::kEventuallyCorrect);
  CHECK(v.t_star == 4);

  std::string alt;
  for (int i = 0; i < 100; ++i) alt += i % 2 ? 'f' : 'p';
  CHECK(judge_limit(synthetic(alt)).kind == Verdict::Kind::kFailsWithinHorizon);

  CHECK(judge_limit(synthetic(std::string(20, 'a'))).kind == Verdict::Kind::kInconclusive);

  std::string late(100, 'p');
  late[60] = 'f';
  auto l = judge_limit(synthetic(late));
  CHECK(l.kind == Verdict::Kind::kInconclusive);
  CHECK(l.reason == "short_clean_suffix");
}

TEST_CASE("judge_uniform examples") {
  auto pass = synthetic("ffpppp", {0, 1, 2, 2, 3, 3});
  auto v = judge_uniform(pass, 2);
  CHECK(v.kind == Verdict::Kind::kEventuallyCorrect);
  CHECK(v.t_star == 3);
  CHECK(judge_uniform(pass, 9).kind == Verdict::Kind::kInconclusive);
  auto fail = synthetic("pfpppp", {0, 1, 2, 2, 3, 3});
  auto f = judge_uniform(fail, 1);
  CHECK(f.kind == Verdict::Kind::kFailsWithinHorizon);
  CHECK(f.error_rounds == std::vector<std::size_t>{2});
  // abstain after the threshold is an error even when unscored
  auto ab = synthetic("ppapp", {1, 1, 1, 1, 1});
  CHECK(judge_nonuniform(ab, 1).kind == Verdict::Kind::kFailsWithinHorizon);
  CHECK(judge_nonuniform(ab, 7).kind == Verdict::Kind::kInconclusive);
}

TEST_CASE("cover obligation") {
  Transcript tr = synthetic("pp");
  tr.rounds[0].revealed = re(0);
  tr.rounds[1].revealed = re(0);
  Support two = Support::of_points({re(0), re(100)});
  CHECK_FALSE(check_cover_obligation(tr, two, Rat(1), 10));
  tr.rounds[1].revealed = re(100);
  CHECK(check_cover_obligation(tr, two, Rat(1), 10));
}

TEST_CASE("novelty replays") {
  auto cls = evens_mult3();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    EnumerationAdversary adv(lattice(0, 2), seed, 5);
    UniformGenerator gen(cls, R("1/2"), R("1/2"), 1, 200);
    GameConfig c = half(12);
    c.eps_prime = R("1/2");
    auto tr = run_game(c, *cls, adv, gen, CommitPolicy::fixed(cls->member("evens")));
    auto same = replay_novelty(tr, R("1/2"));
    auto small = replay_novelty(tr, R("1/4"));
    for (std::size_t i = 0; i < tr.rounds.size(); ++i) {
      REQUIRE(same[i] == tr.rounds[i].novel_ok);
      if (tr.rounds[i].novel_ok && *tr.rounds[i].novel_ok) REQUIRE(*small[i]);
    }
    auto at_one = cover_profile_at(tr, Rat(1));
    auto at_eps = cover_profile_at(tr, R("1/2"));
    REQUIRE(at_eps == tr.cover_profile);
    for (std::size_t i = 0; i < at_one.size(); ++i) REQUIRE(at_one[i] <= at_eps[i]);
  }
  CHECK_THROWS_AS(replay_novelty(synthetic("p"), Rat(5)), ConfigError);
}

TEST_CASE("metric transfer replay") {
  Transcript tr;
  tr.metric = Metric::l2();
  tr.config.eps_prime = R("1/2");
  Round r;
  r.t = 1;
  r.revealed = Point::basis(Int(1), QS2(Rat(1)));
  r.move = Move::emit(Point::basis(Int(2), QS2(Rat(1))));
  r.novel_ok = true;
  r.member_ok = true;
  r.scored = true;
  tr.rounds.push_back(r);
  tr.cover_profile.push_back(1);
  auto same = replay_metric_transfer(tr, Metric::l2(), Rat(1));
  CHECK(same.flags[0] == std::optional<bool>(true));
  CHECK(same.violations == 0);
  // rho2 = l2 is not bounded by 1 * (weighted l2 with weights 1/4)
  CHECK_THROWS_AS(replay_metric_transfer(tr, Metric::weighted_l2(R("1/4"), R("1/4")), Rat(1)),
                  ScaleBoundViolation);
  auto scaled = replay_metric_transfer(tr, Metric::weighted_l2(R("1/4"), R("1/4")), Rat(2));
  CHECK(scaled.violations == 0);
}

TEST_CASE("no lookahead: truncated replays give the same moves") {
  auto cls = evens_mult3();
  EnumerationAdversary adv(lattice(0, 3), 3, 4);
  UniformGenerator gen(cls, R("1/2"), R("1/2"), 1, 200);
  auto tr = run_game(half(15), *cls, adv, gen, CommitPolicy::fixed(cls->member("mult3")));
  for (std::size_t t = 1; t <= tr.rounds.size(); ++t) {
    UniformGenerator fresh(cls, R("1/2"), R("1/2"), 1, 200);
    Sample prefix;
    Move last;
    for (std::size_t i = 0; i < t; ++i) {
      prefix.push_back(tr.rounds[i].revealed);
      last = fresh.step(prefix);
    }
    CHECK(format_move(last) == format_move(tr.rounds[t - 1].move));
  }
}

TEST_CASE("transcript serialization round trip") {
  auto cls = evens_mult3();
  EnumerationAdversary adv(lattice(0, 2));
  UniformGenerator gen(cls, R("1/2"), R("1/2"), 1, 200);
  auto tr = run_game(half(6), *cls, adv, gen, CommitPolicy::fixed(cls->member("evens")));
  std::string text = write_transcript(tr, {{"limit", judge_limit(tr)}});
  auto back = read_transcript(text);
  CHECK(write_transcript(back, {{"limit", judge_limit(back)}}) == text);
  CHECK(text.find("limit=eventually_correct%20t_star=1") != std::string::npos);
  CHECK_THROWS_AS(read_transcript("round t=1\n"), ParseError);
}
