#include "helpers.hpp"

#include "slrh/generator.hpp"

#include <gtest/gtest.h>

using namespace slrh;
using namespace slrh::test;

TEST(Parser, IntervalExample) {
  Problem p = interval_problem(kPhi3);
  ASSERT_EQ(p.clauses.size(), 3u);
  EXPECT_EQ(p.arities.at("P"), 1u);
  EXPECT_EQ(p.arities.at("Q"), 1u);
  ASSERT_TRUE(p.conjecture);
  EXPECT_EQ(p.conjecture->quantifier, Quantifier::Universal);
  EXPECT_EQ(p.conjecture->variables, std::vector<std::string>{"x"});
  EXPECT_TRUE(is_positive(p.conjecture->body));
  // x > 1, P(x) -> false is the clause x > 1 || !P(x)
  const Clause& c = p.clauses[2];
  ASSERT_EQ(c.literals.size(), 1u);
  EXPECT_FALSE(c.literals[0].positive);
  ASSERT_EQ(c.constraint.size(), 1u);
  EXPECT_EQ(c.constraint[0].op(), CmpOp::Gt);
}

TEST(Parser, FactsAreAbstracted) {
  Problem p = parse_problem("fact IgnTable(0, 13, 880, 1100, 2200).\nfact F(-7/2).");
  ASSERT_EQ(p.clauses.size(), 2u);
  for (const Clause& c : p.clauses) EXPECT_TRUE(is_abstracted(c));
  EXPECT_EQ(*fact_tuple(p.clauses[0]), (std::vector<Rational>{0, 13, 880, 1100, 2200}));
  EXPECT_EQ(*fact_tuple(p.clauses[1]), std::vector<Rational>{q(-7, 2)});
}

TEST(Parser, ExistentialAndSatisfiability) {
  Problem e = interval_problem("conjecture exists x. Q(x).");
  EXPECT_EQ(e.conjecture->quantifier, Quantifier::Existential);
  Problem b = interval_problem("conjecture forall. false.");
  EXPECT_TRUE(b.conjecture->body.is_false());
  EXPECT_FALSE(interval_problem().conjecture);
}

TEST(Parser, NegatedTheoryAtomsAreComplemented) {
  Problem p = interval_problem("conjecture forall x. (!(x < 0) -> Q(x) \\/ x > 5).");
  EXPECT_TRUE(is_positive(p.conjecture->body));
}

TEST(Parser, ReportsLineAndColumn) {
  try {
    parse_problem("clause x <= 1 || P(x).\nclause x <= || P(x).");
    FAIL() << "no error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 1u);
  }
  EXPECT_THROW(parse_problem("clause x <= 1 || P(x)"), SyntaxError);
  EXPECT_THROW(parse_problem("clause x # 1 || P(x)."), SyntaxError);
  EXPECT_THROW(parse_problem("frobnicate P."), SyntaxError);
  EXPECT_THROW(parse_problem("clause x <= 1 || goal(x)."), SyntaxError);
  EXPECT_THROW(parse_problem("conjecture forall x. Q(y)."), SyntaxError);
  EXPECT_THROW(parse_problem("fact P(x)."), SyntaxError);
}

TEST(Parser, ArityMismatch) {
  EXPECT_THROW(parse_problem("clause P(x) -> Q(x, x).\nclause Q(x) -> false."), ArityMismatch);
  EXPECT_THROW(parse_problem("declare P/2.\nfact P(1)."), ArityMismatch);
}

TEST(Parser, NonLinear) {
  EXPECT_THROW(parse_problem("clause x * y <= 1 || P(x)."), NonLinear);
  EXPECT_NO_THROW(parse_problem("clause 2 * x + y - 3 <= 1 || P(x, y)."));
}

TEST(Printer, RoundTripOnCorpus) {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(corpus_dir())) {
    Problem p = parse_problem(slurp(entry.path() / "problem.slr"));
    std::string printed = print_problem(p);
    EXPECT_EQ(parse_problem(printed), p) << entry.path() << "\n" << printed;
    EXPECT_EQ(print_problem(parse_problem(printed)), printed);
    ++n;
  }
  EXPECT_GE(n, 10u);
}

TEST(Printer, RoundTripOnGeneratedProblems) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    GeneratorOptions o;
    o.shape = static_cast<ConjectureShape>(seed % 4);
    o.horn = seed % 3 != 0;
    o.negative_conjecture = seed % 2 == 0;
    o.conjecture_variables = 1 + seed % 2;
    Problem p = random_problem(seed, o);
    std::string printed = print_problem(p);
    EXPECT_EQ(parse_problem(printed), p) << printed;
  }
}
