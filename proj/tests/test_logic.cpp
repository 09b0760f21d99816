#include "helpers.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace slrh;
using namespace slrh::test;

TEST(Abstraction, FactGetsDefiningEquations) {
  Clause c{{}, {Literal{true, FreeAtom{"P", {num(3), num(5)}}}}};
  Clause a = abstract_clause(c);
  ASSERT_EQ(a.literals.size(), 1u);
  ASSERT_EQ(a.constraint.size(), 2u);
  const auto& args = a.literals[0].atom.args;
  ASSERT_TRUE(args[0].is_variable() && args[1].is_variable());
  EXPECT_NE(args[0], args[1]);
  for (std::size_t i = 0; i < 2; ++i) {
    const TheoryAtom& eq = a.constraint[i];
    EXPECT_EQ(eq.shape(), AtomShape::Bound);
    EXPECT_EQ(eq.op(), CmpOp::Eq);
    EXPECT_EQ(eq.subject(), args[i]);
    EXPECT_EQ(eq.bound_value(), Rational(i == 0 ? 3 : 5));
  }
  EXPECT_TRUE(is_abstracted(a));
  auto tuple = fact_tuple(a);
  ASSERT_TRUE(tuple);
  EXPECT_EQ(*tuple, (std::vector<Rational>{3, 5}));
}

TEST(Abstraction, AlreadyAbstractedIsUnchanged) {
  Clause c{{TheoryAtom::bound(var("x"), CmpOp::Le, 1)}, {Literal{true, FreeAtom{"P", {var("x")}}}}};
  EXPECT_EQ(abstract_clause(c), c);
}

TEST(Abstraction, MixedClause) {
  Clause c{{}, {Literal{true, FreeAtom{"Q", {num(2)}}}, Literal{false, FreeAtom{"R", {var("x")}}}}};
  Clause a = abstract_clause(c);
  ASSERT_EQ(a.constraint.size(), 1u);
  const Term& y = a.literals[0].atom.args[0];
  ASSERT_TRUE(y.is_variable());
  EXPECT_NE(y.name(), "x");
  EXPECT_EQ(a.constraint[0].subject(), y);
  EXPECT_EQ(a.constraint[0].op(), CmpOp::Eq);
  EXPECT_EQ(a.constraint[0].bound_value(), Rational(2));
  EXPECT_EQ(a.literals[1].atom.args[0], var("x"));
  // The original comes back by applying the equation.
  EXPECT_EQ(substitute(Substitution{{y.name(), num(2)}}, a).literals, c.literals);
}

TEST(Abstraction, Idempotent) {
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    Clause c;
    for (int k = 0; k < 3; ++k) {
      FreeAtom a{"P" + std::to_string(rng() % 2), {}};
      for (int j = 0; j < 2; ++j)
        a.args.push_back(rng() % 2 ? var(std::string(1, "xyz"[rng() % 3])) : num(static_cast<int>(rng() % 7) - 3));
      c.literals.push_back(Literal{rng() % 2 == 0, a});
    }
    Clause once = abstract_clause(c);
    EXPECT_EQ(abstract_clause(once), once);
    EXPECT_TRUE(is_abstracted(once));
  }
}

TEST(Simplify, WorkedExamples) {
  TheoryAtom le = TheoryAtom::relation(var("x1"), CmpOp::Le, var("x2"));
  EXPECT_EQ(simplify_theory_atom(le, {{"x1", num(0)}, {"x2", num(13)}}).truth_value(), std::optional<bool>(true));
  TheoryAtom ge = TheoryAtom::relation(var("z2"), CmpOp::Ge, var("z1"));
  TheoryAtom s = simplify_theory_atom(ge, {{"z1", num(2200)}});
  ASSERT_EQ(s.shape(), AtomShape::Bound);
  EXPECT_EQ(s.subject(), var("z2"));
  EXPECT_EQ(s.op(), CmpOp::Ge);
  EXPECT_EQ(s.bound_value(), Rational(2200));
  EXPECT_EQ(simplify_theory_atom(TheoryAtom::relation(var("x"), CmpOp::Eq, var("x")), {}).truth_value(),
            std::optional<bool>(true));
}

TEST(Simplify, AgreesWithExactEvaluation) {
  std::mt19937_64 rng(17);
  auto rnd = [&](int lo, int hi) { return static_cast<long long>(lo + static_cast<int>(rng() % (hi - lo + 1))); };
  for (int i = 0; i < 1000; ++i) {
    const Rational a = q(rnd(-4, 4), rnd(1, 3)), b = q(rnd(-4, 4), rnd(1, 3)), c = q(rnd(-6, 6), rnd(1, 4));
    const auto op = static_cast<CmpOp>(rng() % 6);
    LinearExpr lhs = LinearExpr::of(Rational(0));
    lhs.add(LinearExpr::of(var("x")), a);
    lhs.add(LinearExpr::of(var("y")), b);
    TheoryAtom atom(lhs, op, LinearExpr::of(c));
    const Rational vx = q(rnd(-5, 5), rnd(1, 3)), vy = q(rnd(-5, 5), rnd(1, 3));
    const bool expected = compare(a * vx + b * vy, op, c);
    TheoryAtom full = simplify_theory_atom(atom, {{"x", Term::number(vx)}, {"y", Term::number(vy)}});
    ASSERT_TRUE(full.truth_value()) << to_string(atom);
    EXPECT_EQ(*full.truth_value(), expected) << to_string(atom);
    // partial then the rest
    TheoryAtom half = simplify_theory_atom(atom, {{"x", Term::number(vx)}});
    TheoryAtom rest = simplify_theory_atom(half, {{"y", Term::number(vy)}});
    ASSERT_TRUE(rest.truth_value());
    EXPECT_EQ(*rest.truth_value(), expected) << to_string(atom) << " / " << to_string(half);
    if (!half.truth_value() && b != 0) {
      EXPECT_EQ(half.shape(), AtomShape::Bound) << to_string(half);
    }
  }
}

TEST(Mgu, Examples) {
  auto s = mgu(FreeAtom{"P", {var("x"), num(5)}}, FreeAtom{"P", {num(3), var("y")}});
  ASSERT_TRUE(s);
  EXPECT_EQ(s->at("x"), num(3));
  EXPECT_EQ(s->at("y"), num(5));
  EXPECT_FALSE(mgu(FreeAtom{"P", {var("x")}}, FreeAtom{"Q", {var("x")}}));
  EXPECT_FALSE(mgu(FreeAtom{"P", {var("x"), var("x")}}, FreeAtom{"P", {num(3), num(5)}}));
}

TEST(Mgu, IdempotentAndGeneral) {
  auto s = mgu(FreeAtom{"P", {var("x"), var("y"), var("x")}}, FreeAtom{"P", {var("y"), var("z"), num(1)}});
  ASSERT_TRUE(s);
  for (const auto& [v, t] : *s) EXPECT_EQ(substitute(*s, t), t) << v;
  FreeAtom a = substitute(*s, FreeAtom{"P", {var("x"), var("y"), var("x")}});
  FreeAtom b = substitute(*s, FreeAtom{"P", {var("y"), var("z"), num(1)}});
  EXPECT_EQ(a, b);
  std::set<std::string> fresh;
  for (const auto& [v, t] : *s)
    if (t.is_variable()) fresh.insert(t.name());
  for (const std::string& v : fresh) EXPECT_TRUE(v == "x" || v == "y" || v == "z");
}

TEST(Resolve, IgnitionTable) {
  Problem p = parse_problem("clause x1 <= x2, z2 >= z1 || !IgnTable(x1, x2, y1, y2, z1) \\/ R(z2).");
  Clause fact{{}, {Literal{true, FreeAtom{"IgnTable", {num(0), num(13), num(880), num(1100), num(2200)}}}}};
  Clause r = hierarchic_resolve(p.clauses[0], 0, fact, 0);
  ASSERT_EQ(r.constraint.size(), 1u) << to_string(r);
  EXPECT_EQ(r.constraint[0].subject(), var("z2"));
  EXPECT_EQ(r.constraint[0].op(), CmpOp::Ge);
  EXPECT_EQ(r.constraint[0].bound_value(), Rational(2200));
  ASSERT_EQ(r.literals.size(), 1u);
  EXPECT_EQ(to_string(r.literals[0]), "R(z2)");
}

TEST(Resolve, ConstraintFree) {
  Clause rule{{}, {Literal{false, FreeAtom{"P", {var("x")}}}, Literal{true, FreeAtom{"Q", {var("x")}}}}};
  Clause fact{{}, {Literal{true, FreeAtom{"P", {num(3)}}}}};
  Clause r = hierarchic_resolve(rule, 0, fact, 0);
  EXPECT_TRUE(r.constraint.empty());
  ASSERT_EQ(r.literals.size(), 1u);
  EXPECT_EQ(r.literals[0].atom, (FreeAtom{"Q", {num(3)}}));
}

TEST(Resolve, EmptySolutionSetStaysVisible) {
  Problem p = parse_problem("clause x > 1 || !P(x).\nclause x <= 1 || P(x).");
  Clause r = hierarchic_resolve(p.clauses[0], 0, p.clauses[1], 0);
  EXPECT_TRUE(r.literals.empty());
  EXPECT_EQ(r.constraint.size(), 2u);
  EXPECT_TRUE(bounds_unsatisfiable(r.constraint));
}

TEST(Resolve, Errors) {
  Clause a{{}, {Literal{true, FreeAtom{"P", {var("x")}}}}};
  EXPECT_THROW(hierarchic_resolve(a, 0, a, 0), NotComplementary);
  Clause b{{}, {Literal{false, FreeAtom{"Q", {var("x")}}}}};
  EXPECT_THROW(hierarchic_resolve(a, 0, b, 0), NotComplementary);
  EXPECT_THROW(hierarchic_resolve(a, 3, b, 0), NotComplementary);
}

namespace {

// Truth of a ground clause over unary predicates P0..P2 and domain `dom`.
bool ground_true(const Clause& g, unsigned interp, const std::vector<Rational>& dom) {
  for (const TheoryAtom& a : g.constraint) {
    auto v = a.truth_value();
    if (!v) ADD_FAILURE() << "non-ground constraint " << to_string(a);
    if (v && !*v) return true;
  }
  for (const Literal& l : g.literals) {
    auto at = std::find(dom.begin(), dom.end(), l.atom.args[0].value());
    if (at == dom.end()) ADD_FAILURE() << "value outside the domain";
    const unsigned bit = static_cast<unsigned>((l.atom.predicate[1] - '0') * dom.size() + (at - dom.begin()));
    if (((interp >> bit) & 1u) == (l.positive ? 1u : 0u)) return true;
  }
  return false;
}

bool all_instances_true(const Clause& c, unsigned interp, const std::vector<Rational>& dom) {
  std::vector<std::string> vs = variables(c);
  std::vector<std::size_t> idx(vs.size(), 0);
  for (;;) {
    Substitution s;
    for (std::size_t i = 0; i < vs.size(); ++i) s[vs[i]] = Term::number(dom[idx[i]]);
    if (!ground_true(substitute(s, c), interp, dom)) return false;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == dom.size()) idx[k++] = 0;
    if (k == idx.size()) return true;
  }
}

}  // namespace

TEST(Resolve, ResolventIsEntailed) {
  const std::vector<Rational> dom = {-1, 0, q(1, 2), 1, 2};
  std::mt19937 rng(5);
  auto term = [&]() { return rng() % 4 ? var(rng() % 2 ? "x" : "y") : num(static_cast<int>(rng() % 3)); };
  auto clause = [&]() {
    Clause c;
    for (unsigned k = rng() % 3; k > 0; --k) {
      const Term x = var(rng() % 2 ? "x" : "y");
      if (rng() % 3 == 0) {
        c.constraint.push_back(TheoryAtom::relation(x, static_cast<CmpOp>(rng() % 6), var(x.name() == "x" ? "y" : "x")));
      } else {
        c.constraint.push_back(TheoryAtom::bound(x, static_cast<CmpOp>(rng() % 6), Rational(static_cast<int>(rng() % 3))));
      }
    }
    for (unsigned k = 1 + rng() % 2; k > 0; --k)
      c.literals.push_back(Literal{rng() % 2 == 0, FreeAtom{"P" + std::to_string(rng() % 3), {term()}}});
    return c;
  };
  int checked = 0;
  for (int round = 0; round < 400 && checked < 60; ++round) {
    Clause c1 = clause(), c2 = clause();
    for (std::size_t i = 0; i < c1.literals.size(); ++i)
      for (std::size_t j = 0; j < c2.literals.size(); ++j) {
        Clause r;
        try {
          r = hierarchic_resolve(c1, i, c2, j);
        } catch (const NotComplementary&) {
          continue;
        }
        ++checked;
        for (unsigned interp = 0; interp < (1u << (3 * dom.size())); interp += 29) {
          if (!all_instances_true(c1, interp, dom) || !all_instances_true(c2, interp, dom)) continue;
          ASSERT_TRUE(all_instances_true(r, interp, dom))
              << to_string(c1) << " / " << to_string(c2) << " => " << to_string(r);
        }
      }
  }
  EXPECT_GE(checked, 30);
}
