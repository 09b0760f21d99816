// Parse a small problem, decide it on both routes, print the counter-model.
#include "slrh/pipeline.hpp"

#include <iostream>

int main() {
  const char* text = R"(
    clause 0 <= x, x <= 2 || !P(x) \/ Q(x).
    clause x <= 1 || P(x).
    clause x > 1, P(x) -> false.
    conjecture forall x. (0 <= x, x <= 2 || Q(x)).
  )";
  slrh::Problem problem = slrh::parse_problem(text);
  for (slrh::Route route : {slrh::Route::Datalog, slrh::Route::Grounding}) {
    slrh::PipelineOptions opt;
    opt.route = route;
    slrh::PipelineResult r = slrh::run_pipeline(problem, opt);
    std::cout << (route == slrh::Route::Datalog ? "datalog:   " : "grounding: ") << slrh::to_string(r.verdict)
              << "  |B|=" << r.stats.points << "\n";
    if (!r.counter_model) continue;
    for (const std::string& line : slrh::describe_intervals(*r.counter_model, r.tps)) std::cout << "  " << line << "\n";
    std::cout << "  re-verified: " << (slrh::verify_counter_model(problem, r) ? "yes" : "no") << "\n";
  }
}
