#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace slrh;
using namespace slrh::test;

namespace {

const char* kIgnition =
    "fact IgnTable(0, 13, 880, 1100, 2200).\n"
    "clause x1 <= x2, z2 >= z1 || !IgnTable(x1, x2, y1, y2, z1) \\/ R(z2).\n";

bool has_negative_over(const std::vector<Clause>& n, const PositivelyGroundedSet& s) {
  for (const Clause& c : n)
    for (const Literal& l : c.literals)
      if (!l.positive && s.contains(l.atom.predicate)) return true;
  return false;
}

}  // namespace

TEST(PositivelyGrounded, Ignition) {
  Problem p = parse_problem(kIgnition);
  PositivelyGroundedSet s = find_positively_grounded(p.clauses);
  EXPECT_EQ(s.predicates, std::set<std::string>{"IgnTable"});
  ASSERT_EQ(s.facts.at("IgnTable").size(), 1u);
}

TEST(PositivelyGrounded, RulesDisqualifyAndVacuousQualify) {
  Problem p = parse_problem("fact F(1).\nclause F(x) -> G(x).\nclause H(x), x > 0 -> G(x).\nclause x <= 1 || P(x).");
  PositivelyGroundedSet s = find_positively_grounded(p.clauses);
  EXPECT_TRUE(s.contains("F"));
  EXPECT_TRUE(s.contains("H"));  // never positive
  EXPECT_FALSE(s.contains("G"));
  EXPECT_FALSE(s.contains("P"));
  EXPECT_TRUE(find_positively_grounded(interval_problem().clauses).predicates.empty());
}

TEST(Elim, IgnitionExample) {
  Problem p = parse_problem(kIgnition);
  PositivelyGroundedSet s = find_positively_grounded(p.clauses);
  std::vector<Clause> e = elim(s, p.clauses);
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0], p.clauses[0]);  // the fact stays
  const Clause& r = e[1];
  ASSERT_EQ(r.literals.size(), 1u);
  EXPECT_EQ(r.literals[0].atom.predicate, "R");
  ASSERT_EQ(r.constraint.size(), 1u);
  EXPECT_EQ(r.constraint[0].subject(), r.literals[0].atom.args[0]);
  EXPECT_EQ(r.constraint[0].op(), CmpOp::Ge);
  EXPECT_EQ(r.constraint[0].bound_value(), Rational(2200));
  EXPECT_FALSE(has_negative_over(e, s));
}

TEST(Elim, PrunesEmptyInstances) {
  Problem p = parse_problem("fact F(1).\nfact F(3).\nclause x > 2, F(x) -> G(x).");
  ElimStats st;
  std::vector<Clause> e = elim(find_positively_grounded(p.clauses), p.clauses, &st);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(to_string(e[2]), "_v0 = 3 || G(_v0)");
  EXPECT_EQ(st.instantiations, 2u);
}

TEST(Elim, ComparisonsAreInstantiatedAway) {
  Problem p = parse_problem("fact T(1, 2).\nfact T(3, 2).\nclause T(x, y), x < y, z > y -> R(z).");
  std::vector<Clause> e = elim(find_positively_grounded(p.clauses), p.clauses);
  for (const Clause& c : e)
    for (const TheoryAtom& a : c.constraint) EXPECT_NE(a.shape(), AtomShape::Comparison) << to_string(c);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[2].literals[0].atom.predicate, "R");
}

TEST(Elim, RoundsReachNewlyGroundedPredicates) {
  Problem p = parse_problem("fact F(1).\nclause F(x) -> G(x).\nclause G(x) -> H(x).");
  std::vector<Clause> one = elim_rounds(p.clauses, 1);
  EXPECT_TRUE(find_positively_grounded(one).contains("G"));
  std::vector<Clause> two = elim_rounds(p.clauses, 2);
  for (const Clause& c : two)
    for (const Literal& l : c.literals) EXPECT_TRUE(l.positive) << to_string(c);
}

TEST(Flatten, GuardedGoalNeedsNoFlattening) {
  Problem p = interval_problem(kPhi3);
  auto g = split_guarded_goal(p.conjecture->body);
  ASSERT_TRUE(g);
  EXPECT_EQ(g->atom.predicate, "Q");
  EXPECT_EQ(g->guard.size(), 2u);
  EXPECT_FALSE(split_guarded_goal(interval_problem(kPhi1).conjecture->body));
}

TEST(Flatten, FreshPredicatesCoverTheBody) {
  Problem p = parse_problem("clause P(x) -> Q(x).\nconjecture forall x, y. (P(x) /\\ (Q(y) \\/ x <= y) \\/ y > 3).");
  FlattenResult fr = flatten_conjecture(*p.conjecture);
  EXPECT_EQ(fr.goal.predicate.rfind("_flat", 0), 0u);
  ASSERT_FALSE(fr.rules.empty());
  for (const Clause& c : fr.rules) {
    EXPECT_TRUE(is_horn(c));
    EXPECT_EQ(positive_count(c), 1u);
    EXPECT_EQ(c.literals.back().atom.predicate.rfind("_flat", 0), 0u) << to_string(c);
  }
  std::set<std::string> goal_vars;
  for (const Term& t : fr.goal.args) goal_vars.insert(t.name());
  EXPECT_EQ(goal_vars, (std::set<std::string>{"x", "y"}));
  EXPECT_THROW(flatten_conjecture(*interval_problem(kPhi1).conjecture), NonPositiveConjecture);
}

TEST(Existential, ReducesToRefutation) {
  Problem p = interval_problem("conjecture exists x. (Q(x) /\\ x > 0).");
  std::vector<Clause> n = reduce_existential(*p.conjecture, p.clauses);
  ASSERT_GT(n.size(), p.clauses.size());
  EXPECT_EQ(positive_count(n.back()), 0u);
  std::vector<Clause> cnf = reduce_existential_cnf(*p.conjecture, p.clauses);
  // ∀x. ¬Q(x) ∨ x <= 0 is the single clause x > 0 || !Q(x)
  ASSERT_EQ(cnf.size(), p.clauses.size() + 1);
  EXPECT_EQ(to_string(cnf.back()), "x > 0 || !Q(x)");
}

TEST(Satisfiability, FalseConjecture) {
  Conjecture c = satisfiability_as_conjecture(interval_problem().clauses);
  EXPECT_EQ(c.quantifier, Quantifier::Universal);
  EXPECT_TRUE(c.variables.empty());
  EXPECT_TRUE(c.body.is_false());
}
