#include <cmath>
#include <random>

#include "doctest.h"
#include "genlab/metric.hpp"
#include "oracles.hpp"

using namespace genlab;
using genlab_test::brute_force_cover;
using genlab_test::R;

namespace {

Point re(long v) { return Point::real(Rat(v)); }

// a_k = (sqrt2/2) eps' e_k stored as b = eps'/2.
Point half_axis(long k, const Rat& eps_prime) {
  return Point::basis(Int(k), QS2(Rat(0), Rat(eps_prime / 2)));
}

}  // namespace

TEST_CASE("rationals parse to canonical form") {
  CHECK(format_rat(parse_rat("6/4")) == "3/2");
  CHECK(format_rat(parse_rat("-2")) == "-2/1");
  CHECK_THROWS_AS(parse_rat("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rat("x"), ParseError);
}

TEST_CASE("Q(sqrt2) sign is exact") {
  CHECK(QS2(Rat(3), Rat(-2)).sign() == 1);    // 3 - 2.83
  CHECK(QS2(Rat(-3), Rat(2)).sign() == -1);
  CHECK(QS2(Rat(1), Rat(-1)).sign() == -1);   // 1 - 1.41
  CHECK(QS2(Rat(0), Rat(0)).sign() == 0);
  QS2 s2(Rat(0), Rat(1));
  CHECK((s2 * s2) == QS2(Rat(2)));
}

TEST_CASE("point text round trip") {
  for (const char* text : {"atom:4", "real:-3/2", "svec:3=1/2:sqrt2half,5=2/1",
                           "svec:2=1/1+3/5:sqrt2half", "svec:"}) {
    CHECK(format_point(parse_point(text)) == text);
  }
  CHECK_THROWS_AS(parse_point("svec:2=1/1,2=1/1"), ParseError);
  CHECK_THROWS_AS(parse_point("blob:1"), ParseError);
  CHECK(parse_point("svec:4=0/1") == Point::origin());
}

TEST_CASE("dist_cmp examples") {
  CHECK(dist_cmp(Metric::abs(), re(0), re(3), Rat(1)) == Ordering::kGreater);
  Rat ep = R("3/5");
  CHECK(dist_cmp(Metric::l2(), half_axis(1, ep), half_axis(2, ep), ep) == Ordering::kEqual);
  CHECK(dist_cmp(Metric::discrete(), Point::atom(4), Point::atom(4), R("1/2")) ==
        Ordering::kLess);
  CHECK_THROWS_AS(dist_cmp(Metric::abs(), Point::atom(1), re(1), Rat(1)), MetricError);
}

TEST_CASE("in_ball is closed") {
  CHECK(in_ball(Metric::abs(), re(5), Rat(1), re(6)));
  Rat ep = R("1/2");
  CHECK(in_ball(Metric::l2(), Point::origin(), ep, Point::basis(Int(7), QS2(ep))));
  CHECK_FALSE(in_ball(Metric::discrete(), Point::atom(1), R("1/2"), Point::atom(2)));
}

TEST_CASE("in_set_ball examples") {
  CHECK(in_set_ball(Metric::abs(), {re(0), re(3)}, Rat(1), re(2)));
  CHECK_FALSE(in_set_ball(Metric::abs(), {}, Rat(1), re(0)));
  Rat ep = R("3/5");
  std::vector<Point> seen;
  for (long k = 1; k <= 4; ++k) seen.push_back(half_axis(k, ep));
  CHECK(in_set_ball(Metric::l2(), seen, ep, half_axis(5, ep)));
}

TEST_CASE("mixed-axis distances stay exact") {
  // u_1 = 2 e_1 and a_{1,1} = (sqrt2/2)(3/10) e_1 share an axis.
  Point u = Point::basis(Int(1), QS2(Rat(2)));
  Point a = Point::basis(Int(1), QS2(Rat(0), R("3/20")));
  double d = 2.0 - std::sqrt(2.0) / 2 * 0.3;
  Rat below(static_cast<long>(std::floor(d * 1000)), 1000);
  Rat above(static_cast<long>(std::ceil(d * 1000)), 1000);
  CHECK(dist_cmp(Metric::l2(), u, a, below) == Ordering::kGreater);
  CHECK(dist_cmp(Metric::l2(), u, a, above) == Ordering::kLess);
}

TEST_CASE("covering_number_exact examples") {
  std::vector<Point> t{re(0), re(3), re(6)};
  CHECK(covering_number_exact(Metric::abs(), t, Rat(1), t) == 3);
  CHECK(covering_number_exact(Metric::abs(), t, Rat(1), t) ==
        brute_force_cover(Metric::abs(), t, Rat(1), t));
  Rat ep = R("3/5");
  std::vector<Point> a;
  for (long k = 1; k <= 5; ++k) a.push_back(half_axis(k, ep));
  CHECK(covering_number_exact(Metric::l2(), a, R("3/10"), a) == 5);
  CHECK(covering_number_exact(Metric::l2(), {}, Rat(1), {}) == 0);
  CHECK_THROWS_AS(covering_number_exact(Metric::abs(), {re(9)}, Rat(1), {re(0)}),
                  UncoverableTarget);
}

TEST_CASE("covering_number_greedy examples") {
  std::vector<Point> t{re(0), re(3), re(6)};
  CHECK(covering_number_greedy(Metric::abs(), t, Rat(1), t) == 3);
  CHECK(covering_number_greedy(Metric::abs(), {re(0)}, Rat(1), {re(0), re(1)}) == 1);
  std::vector<Point> line{re(0), re(1), re(2), re(3), re(4)};
  CHECK(covering_number_greedy(Metric::abs(), line, Rat(1), line) >=
        covering_number_exact(Metric::abs(), line, Rat(1), line));
  CHECK(covering_number_exact(Metric::abs(), line, Rat(1), line) == 2);
}

TEST_CASE("packing_greedy examples") {
  CHECK(packing_greedy(Metric::abs(), {re(0), re(3), re(6)}, Rat(1)) == 3);
  CHECK(packing_greedy(Metric::abs(), {re(0), re(1)}, Rat(1)) == 1);
  std::vector<Point> u;
  for (long k = 1; k <= 5; ++k) u.push_back(Point::basis(Int(k), QS2(Rat(2))));
  CHECK(packing_greedy(Metric::l2(), u, Rat(1)) == 5);
}

TEST_CASE("line cover uses outside centres") {
  // {0,2} at radius 1: a single ball centred at 1.
  CHECK(cover_count(Metric::abs(), {re(0), re(2)}, Rat(1)) == 1);
  CHECK(cover_count(Metric::abs(), {re(0), re(1), re(2)}, Rat(1)) == 1);
  CHECK(cover_count(Metric::abs(), {re(0), re(3)}, Rat(1)) == 2);
  std::vector<Point> five{re(0), re(1), re(2), re(3), re(4), re(7)};
  CHECK(cover_count(Metric::abs(), five, R("1/2")) ==
        genlab_test::brute_force_line_cover(five, R("1/2")));
  CHECK(cover_count(Metric::discrete(), {Point::atom(1), Point::atom(2), Point::atom(1)},
                    R("1/2")) == 2);
  CHECK(cover_count(Metric::discrete(), {Point::atom(1), Point::atom(2)}, Rat(1)) == 1);
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(7);
  for (auto metric : {Metric::discrete(), Metric::abs(), Metric::l2(),
                      Metric::weighted_l2(R("1/4"), Rat(1))}) {
    for (int i = 0; i < 1000; ++i) {
      Point p = genlab_test::random_point(metric, rng, false);
      Point q = genlab_test::random_point(metric, rng, false);
      Point s = genlab_test::random_point(metric, rng, false);
      QS2 pq = dist_sq(metric, p, q), qp = dist_sq(metric, q, p);
      REQUIRE(pq == qp);
      REQUIRE((pq.is_zero() == (p == q)));
      // sqrt(A) <= sqrt(B) + sqrt(C) iff A <= B + C or (A - B - C)^2 <= 4BC.
      Rat a = pq.a, b = dist_sq(metric, p, s).a, c = dist_sq(metric, s, q).a;
      Rat gap = a - b - c;
      REQUIRE((sgn(gap) <= 0 || gap * gap <= 4 * b * c));
    }
  }
}

TEST_CASE("triangle inequality with sqrt2 coordinates (float sanity)") {
  std::mt19937_64 rng(11);
  Metric m = Metric::weighted_l2(R("1/4"), Rat(1));
  for (int i = 0; i < 1000; ++i) {
    Point p = genlab_test::random_point(m, rng, true);
    Point q = genlab_test::random_point(m, rng, true);
    Point s = genlab_test::random_point(m, rng, true);
    double pq = std::sqrt(dist_sq(m, p, q).approx());
    double ps = std::sqrt(dist_sq(m, p, s).approx());
    double sq = std::sqrt(dist_sq(m, s, q).approx());
    REQUIRE(pq <= ps + sq + 1e-9);
  }
}

TEST_CASE("covering properties on random instances") {
  std::mt19937_64 rng(3);
  for (int inst = 0; inst < 150; ++inst) {
    Metric m = inst % 2 ? Metric::l2() : Metric::abs();
    auto pts = genlab_test::random_points(m, rng, 2 + inst % 9);
    Rat r1(static_cast<long>(rng() % 5 + 1), 4);
    Rat r2 = r1 + Rat(static_cast<long>(rng() % 3), 4);
    size_t e1 = covering_number_exact(m, pts, r1, pts);
    size_t e2 = covering_number_exact(m, pts, r2, pts);
    REQUIRE(e1 >= e2);
    REQUIRE(e1 == brute_force_cover(m, pts, r1, pts));
    REQUIRE(packing_greedy(m, pts, r1) <= e1);
    REQUIRE(e1 <= covering_number_greedy(m, pts, r1, pts));
    // Targets monotone for fixed candidates.
    std::vector<Point> sub(pts.begin(), pts.begin() + static_cast<long>(pts.size() / 2));
    REQUIRE(covering_number_exact(m, sub, r1, pts) <= covering_number_exact(m, pts, r1, pts));
  }
}

TEST_CASE("cover tracker matches recomputation") {
  std::mt19937_64 rng(5);
  for (auto m : {Metric::abs(), Metric::l2(), Metric::discrete()}) {
    auto pts = genlab_test::random_points(m, rng, 25);
    CoverTracker tr(m, R("1/2"));
    size_t running = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
      size_t v = tr.add(pts[i]);
      std::vector<Point> prefix(pts.begin(), pts.begin() + static_cast<long>(i + 1));
      running = std::max(running, cover_count(m, prefix, R("1/2")));
      REQUIRE(v == running);
    }
  }
}
