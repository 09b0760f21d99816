#include "helpers.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace slrh;
using namespace slrh::test;

namespace {

std::vector<Interval> partition_of(const std::vector<Clause>& n, const std::vector<TheoryAtom>& extra = {}) {
  return build_partition(compute_endpoints(n, find_positively_grounded(n), extra));
}

}  // namespace

TEST(Partition, IntervalExample) {
  std::vector<Interval> p = partition_of(interval_problem().clauses);
  EXPECT_EQ(interval_strings(p), (std::vector<std::string>{"(-inf,0)", "[0,1]", "(1,2]", "(2,inf)"}));
  EXPECT_EQ(make_test_points(p, 1).size(), 4u);
  EXPECT_EQ(make_test_points(p, 2).size(), 8u);
}

TEST(Partition, EqualityMakesAPointInterval) {
  Problem n = parse_problem("clause x < 5 || P(x).\nclause x = 0 || P(x).");
  std::vector<Interval> p = partition_of(n.clauses);
  EXPECT_EQ(interval_strings(p), (std::vector<std::string>{"(-inf,0)", "[0,0]", "(0,5)", "[5,inf)"}));
  EXPECT_TRUE(p[1].is_point());
  // point intervals get one test point whatever m is
  EXPECT_EQ(make_test_points(p, 3).size(), 10u);
}

TEST(Partition, NoBoundsGivesTheWholeLine) {
  std::vector<Interval> p = partition_of(parse_problem("clause P(x) -> Q(x).").clauses);
  EXPECT_EQ(interval_strings(p), std::vector<std::string>{"(-inf,inf)"});
  TestPointSet t = make_test_points(p, 2);
  EXPECT_EQ(t.points[0].beta, Rational(0));
  EXPECT_EQ(t.points[1].beta, Rational(1));
}

TEST(Partition, BordersAtOneValueSortByKind) {
  const Rational c(7);
  Border uo = Border::finite(BorderKind::UpperOpen, c), lc = Border::finite(BorderKind::LowerClosed, c),
         uc = Border::finite(BorderKind::UpperClosed, c), lo = Border::finite(BorderKind::LowerOpen, c);
  EXPECT_TRUE(uo < lc);
  EXPECT_TRUE(lc < uc);
  EXPECT_TRUE(uc < lo);
  EXPECT_TRUE(Border::neg_inf() < uo);
  EXPECT_TRUE(lo < Border::pos_inf());
  EXPECT_TRUE(lo < Border::finite(BorderKind::UpperOpen, Rational(8)));
}

TEST(Partition, MalformedBorders) {
  std::set<Border> odd{Border::neg_inf(), Border::finite(BorderKind::UpperOpen, 1), Border::pos_inf()};
  EXPECT_THROW(build_partition(odd), MalformedBorders);
}

TEST(Partition, EndpointsThroughFacts) {
  Problem p = parse_problem(
      "fact IgnTable(0, 13, 880, 1100, 2200).\n"
      "clause x1 <= x2, z2 >= z1 || !IgnTable(x1, x2, y1, y2, z1) \\/ R(z2).");
  std::set<Border> b = compute_endpoints(p.clauses, find_positively_grounded(p.clauses));
  EXPECT_TRUE(b.count(Border::finite(BorderKind::UpperOpen, 2200)));
  EXPECT_TRUE(b.count(Border::finite(BorderKind::LowerClosed, 2200)));
}

TEST(Partition, UnsupportedComparison) {
  Problem p = parse_problem("clause x <= y || P(x, y).");
  EXPECT_THROW(partition_of(p.clauses), UnsupportedAtom);
}

TEST(TestPoints, BetaPlacement) {
  std::vector<Interval> p = partition_of(interval_problem().clauses);
  TestPointSet t = make_test_points(p, 2);
  std::vector<Rational> beta;
  for (const TestPoint& tp : t.points) beta.push_back(tp.beta);
  EXPECT_EQ(beta, (std::vector<Rational>{-1, -2, q(1, 3), q(2, 3), q(4, 3), q(5, 3), 3, 4}));
  EXPECT_EQ(t.display(2), "a_{[0,1],1}");
  EXPECT_EQ(t.display(5), "a_{(1,2],2}");
}

TEST(TestPoints, IdefHoldsUnderBeta) {
  TestPointSet t = make_test_points(partition_of(interval_problem().clauses), 2);
  std::vector<TheoryAtom> all = idef(t);
  // 1 + 2 + 2 + 1 bounds per point, two points per interval
  EXPECT_EQ(all.size(), 12u);
  for (const TheoryAtom& a : all) EXPECT_TRUE(a.evaluate([&](const Term& x) { return t.value(x); })) << to_string(a);
}

TEST(TestPoints, RandomBoundSetsFormAPartition) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 300; ++round) {
    std::vector<TheoryAtom> atoms;
    for (int k = 1 + static_cast<int>(rng() % 6); k > 0; --k)
      atoms.push_back(TheoryAtom::bound(var("x"), static_cast<CmpOp>(rng() % 6),
                                        q(static_cast<int>(rng() % 9) - 4, 1 + static_cast<int>(rng() % 2))));
    std::vector<Interval> p = partition_of({}, atoms);
    const std::size_t m = 1 + rng() % 3;
    TestPointSet t = make_test_points(p, m);
    // samples: quarter steps around the constants
    for (int s = -24; s <= 24; ++s) {
      const Rational x = q(s, 4);
      std::size_t hits = 0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (!p[i].contains(x)) continue;
        ++hits;
        // every atom is constant on the interval: compare with its first test point
        const Rational b = t.points[t.by_interval[i].front()].beta;
        for (const TheoryAtom& a : atoms)
          EXPECT_EQ(compare(x, a.op(), a.bound_value()), compare(b, a.op(), a.bound_value()))
              << to_string(a) << " on " << to_string(p[i]);
      }
      EXPECT_EQ(hits, 1u) << to_string(x);
    }
    for (const TestPoint& tp : t.points) EXPECT_TRUE(p[tp.interval].contains(tp.beta));
  }
}
