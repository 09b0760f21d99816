// Hammer synthetic ignition tables of growing size and report |B| and timings.
#include "slrh/generator.hpp"
#include "slrh/pipeline.hpp"

#include <cstdio>

int main() {
  const std::size_t sizes[][2] = {{10, 4}, {20, 6}, {40, 8}, {60, 10}};
  std::printf("%-8s %-13s %6s %8s %8s %8s\n", "grid", "verdict", "|B|", "facts", "hammer", "reason");
  for (const auto& s : sizes) {
    for (bool violate : {false, true}) {
      slrh::Problem p = slrh::parse_problem(slrh::ecu_problem_text(s[0], s[1], 5, violate, 60, 35));
      slrh::PipelineResult r = slrh::run_pipeline(p);
      std::printf("%3zux%-4zu %-13s %6zu %8zu %7.3fs %7.3fs\n", s[0], s[1], slrh::to_string(r.verdict).c_str(),
                  r.stats.points, r.stats.facts, r.stats.hammer_seconds, r.stats.reason_seconds);
    }
  }
}
