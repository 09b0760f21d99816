#include "helpers.hpp"

#include "slrh/property_suite.hpp"

#include <gtest/gtest.h>

using namespace slrh;
using namespace slrh::test;

namespace {

void expect_clean(const PropertyReport& r, std::size_t count) {
  EXPECT_EQ(r.checked + r.skipped, count);
  EXPECT_EQ(r.agreed, r.checked);
  for (const std::string& f : r.failures) ADD_FAILURE() << f;
}

SuiteOptions one_thread() {
  SuiteOptions o;
  o.threads = 1;
  return o;
}

}  // namespace

TEST(Properties, HammerAgreement) { expect_clean(check_hammer_agreement(1, 60, one_thread()), 60); }
TEST(Properties, GroundingAgreement) { expect_clean(check_grounding_agreement(1, 40, one_thread()), 40); }
TEST(Properties, ElimPreserves) { expect_clean(check_elim_preserves(1, 40, one_thread()), 40); }
TEST(Properties, FlattenPreserves) { expect_clean(check_flatten_preserves(1, 40, one_thread()), 40); }
TEST(Properties, SemiNaive) { expect_clean(check_seminaive(1, 60, one_thread()), 60); }
TEST(Properties, TFacts) { expect_clean(check_tfacts(1, 60, one_thread()), 60); }

TEST(Properties, RefutationsOccur) {
  PropertyReport r = check_hammer_agreement(100, 40, one_thread());
  EXPECT_GT(r.refutations, 5u);
  EXPECT_LT(r.refutations, 40u);
}

TEST(Properties, ThreadCountDoesNotChangeResult) {
  SuiteOptions many;
  many.threads = 3;
  PropertyReport a = check_hammer_agreement(7, 20, one_thread());
  PropertyReport b = check_hammer_agreement(7, 20, many);
  EXPECT_EQ(a.checked, b.checked);
  EXPECT_EQ(a.agreed, b.agreed);
  EXPECT_EQ(a.refutations, b.refutations);
}

TEST(Properties, MinimizeShrinks) {
  Problem p = parse_problem(
      "clause x <= 3 || P(x).\n"
      "clause x >= 2 || Q(x).\n"
      "clause P(x), Q(x) -> R(x).\n"
      "conjecture forall x. R(x).");
  // "fails" whenever some clause mentions R
  auto fails = [](const Problem& q) {
    for (const Clause& c : q.clauses)
      for (const Literal& l : c.literals)
        if (l.atom.predicate == "R") return true;
    return false;
  };
  Problem small = minimize(p, fails);
  EXPECT_TRUE(fails(small));
  EXPECT_EQ(small.clauses.size(), 1u);
  for (const Clause& c : small.clauses) EXPECT_LE(c.literals.size(), 1u);
}

TEST(Properties, MinimizeMovesConstantsTowardZero) {
  Problem p = parse_problem("clause x <= 5 || P(x).\nconjecture forall x. P(x).");
  auto fails = [](const Problem& q) {
    for (const Clause& c : q.clauses)
      for (const TheoryAtom& a : c.constraint)
        if (a.shape() == AtomShape::Bound && a.bound_value() >= 2) return true;
    return false;
  };
  Problem small = minimize(p, fails);
  ASSERT_EQ(small.clauses.size(), 1u);
  ASSERT_EQ(small.clauses[0].constraint.size(), 1u);
  EXPECT_EQ(small.clauses[0].constraint[0].bound_value(), Rational(2));
}

TEST(Properties, ReproFilesAreWritten) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "slrh-repro-test";
  std::filesystem::remove_all(dir);
  SuiteOptions o = one_thread();
  o.repro_dir = dir.string();
  PropertyReport r = detail::run_seeds(3, 2, o, "always", [](std::uint64_t seed, PropertyReport& rep) {
    ++rep.checked;
    Problem p = parse_problem("clause x <= " + std::to_string(seed) + " || P(x).");
    detail::record(rep, seed, "forced", p, [](const Problem&) { return true; });
  });
  EXPECT_EQ(r.failures.size(), 2u);
  EXPECT_TRUE(std::filesystem::exists(dir / "always-3.slr"));
  EXPECT_TRUE(std::filesystem::exists(dir / "always-4.slr"));
  EXPECT_NO_THROW(parse_problem(slurp(dir / "always-3.slr")));
  std::filesystem::remove_all(dir);
}

TEST(Properties, ExceptionsBecomeFailures) {
  PropertyReport r = detail::run_seeds(1, 3, one_thread(), "throws", [](std::uint64_t seed, PropertyReport& rep) {
    if (seed == 2) throw std::runtime_error("boom");
    ++rep.checked;
    ++rep.agreed;
  });
  EXPECT_EQ(r.checked, 3u);
  EXPECT_EQ(r.agreed, 2u);
  EXPECT_EQ(r.failures.size(), 1u);
}
