#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace slrh;
using namespace slrh::test;

namespace {

std::vector<std::string> fixtures() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir()))
    if (std::filesystem::exists(e.path() / "problem.slr")) out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

class Corpus : public ::testing::TestWithParam<std::string> {
 protected:
  Problem problem() const { return parse_problem(slurp(corpus_dir() / GetParam() / "problem.slr")); }
  std::string expected() const { return trim(slurp(corpus_dir() / GetParam() / "expected.txt")); }
};

}  // namespace

TEST_P(Corpus, DefaultRoute) {
  Problem p = problem();
  PipelineResult r = run_pipeline(p);
  EXPECT_EQ(to_string(r.verdict), expected());
  if (r.counter_model) {
    EXPECT_TRUE(verify_counter_model(p, r));
  }
}

TEST_P(Corpus, GroundingRoute) {
  Problem p = problem();
  for (unsigned rounds : {0u, 1u}) {
    PipelineOptions o;
    o.route = Route::Grounding;
    o.elim_rounds = rounds;
    try {
      PipelineResult r = run_pipeline(p, o);
      EXPECT_EQ(to_string(r.verdict), expected()) << "elim rounds " << rounds;
      return;
    } catch (const LimitExceeded&) {
    }
  }
  GTEST_SKIP() << "too large for the grounding route";
}

TEST_P(Corpus, ElimKeepsVerdict) {
  Problem p = problem();
  if (default_route(p) != Route::Datalog) GTEST_SKIP();
  PipelineOptions o;
  o.elim_rounds = 1;
  EXPECT_EQ(to_string(run_pipeline(p, o).verdict), expected());
}

TEST_P(Corpus, RoundTrip) {
  Problem p = problem();
  EXPECT_EQ(parse_problem(print_problem(p)), p);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, Corpus, ::testing::ValuesIn(fixtures()),
                         [](const ::testing::TestParamInfo<std::string>& i) {
                           std::string n = i.param;
                           for (char& c : n)
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           return n;
                         });

TEST(CorpusIndex, HasFixtures) { EXPECT_GE(fixtures().size(), 10u); }
