// Command-line front end:
//
//   slr-hammer decide <file> [--stats] [--trace]
//   slr-hammer hammer <file> --out {datalog,clauses}
//   slr-hammer ground <file> --out {clauses,smt}
//   slr-hammer oracle <file>
//   slr-hammer datalog <file> [--trace]
//   slr-hammer gen --seed <n> [...]
//
// Exit codes: verdicts 0/1, usage 3, parse 4, unsupported fragment 5, other
// failures 2.
#pragma once

#include "slrh/property_suite.hpp"
#include "slrh/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace slrh {

namespace exit_codes {
constexpr int kEntailed = 0;
constexpr int kNotEntailed = 1;
constexpr int kFailure = 2;
constexpr int kUsage = 3;
constexpr int kParse = 4;
constexpr int kUnsupported = 5;
}  // namespace exit_codes

class UsageError : public Error {
 public:
  using Error::Error;
};

/// Facts and rules as clauses over test-point constants.
inline std::string export_horn_clauses(const DatalogProgram& program) {
  DatalogProgram p = program;
  sort_program(p);
  std::string out;
  for (const std::string& a : p.annotations) out += "% " + a + "\n";
  auto clause = [](const DlRule& r) {
    std::vector<std::string> lits;
    for (const DlAtom& a : r.body) lits.push_back("!" + to_string(a));
    for (const DlAtom& a : r.negated) lits.push_back("not " + to_string(a));
    if (r.head) lits.push_back(to_string(*r.head));
    std::string s;
    for (std::size_t i = 0; i < lits.size(); ++i) s += (i ? " \\/ " : "") + lits[i];
    return s.empty() ? std::string("false") : s;
  };
  for (const DlAtom& f : p.facts) out += to_string(f) + ".\n";
  for (const DlRule& r : p.rules) out += clause(r) + ".\n";
  for (const DlRule& r : p.negation_rules) out += clause(r) + ".\n";
  return out;
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

inline std::string seconds(double s) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(3) << s << "s";
  return ss.str();
}

inline void print_stats(const PipelineResult& r, std::ostream& out) {
  const PipelineStats& s = r.stats;
  out << "route " << (r.route == Route::Datalog ? "datalog" : "grounding") << "\n";
  out << "|C| " << s.endpoints << "  |I| " << s.intervals << "  |B| " << s.points << "  m " << s.m << "\n";
  if (r.route == Route::Datalog) {
    out << "clauses " << s.clauses << "  theory-predicates " << s.theory_predicates << "  facts " << s.facts
        << "  rules " << s.rules << "  model " << s.model_size << "\n";
  } else {
    out << "clauses " << s.clauses << "  ground-clauses " << (r.abstraction ? r.abstraction->ground_clauses.size() : 0)
        << "  ground-atoms " << s.ground_atoms << "\n";
  }
  out << "t-time " << seconds(s.translate_seconds) << "  h-time " << seconds(s.hammer_seconds) << "  r-time "
      << seconds(s.reason_seconds) << "\n";
}

inline void print_verdict(const PipelineResult& r, std::ostream& out) {
  out << to_string(r.verdict) << "\n";
  if (!r.counter_model) return;
  out << (r.satisfiability && r.verdict == Verdict::Satisfiable ? "model:" : "counter-model:") << "\n";
  for (const std::string& line : describe(*r.counter_model, r.tps)) out << "  " << line << "\n";
  std::set<std::uint32_t> used;
  for (const auto& [name, rows] : r.counter_model->relations)
    for (const auto& row : rows) used.insert(row.begin(), row.end());
  if (!used.empty()) out << "test points:\n";
  for (std::uint32_t id : used)
    out << "  " << r.tps.display(id) << " = " << to_string(r.tps.point(id).beta) << "\n";
  std::vector<std::string> lifted = describe_intervals(*r.counter_model, r.tps);
  if (!lifted.empty()) out << "on intervals:\n";
  for (const std::string& line : lifted) out << "  " << line << "\n";
}

struct CommonFlags {
  std::string file;
  std::size_t m = 0;
  unsigned elim_rounds = 0;
  bool no_prune = false;
  bool symmetry = false;
  bool rule_goal = false;
  bool aux = false;
  std::string route;

  void add(CLI::App* app) {
    app->add_option("file", file, "problem file")->required();
    app->add_option("-m", m, "test points per interval (default max(1, |vars|))");
    app->add_option("--elim-rounds", elim_rounds, "rounds of elim before hammering");
    app->add_flag("--no-prune", no_prune, "always flatten the conjecture");
    app->add_flag("--symmetry", symmetry, "ground the goal modulo point symmetry");
    app->add_flag("--rule-goal", rule_goal, "encode the goal as one rule instead of negation");
    app->add_flag("--aux", aux, "include auxiliary predicates in counter-models");
    app->add_option("--route", route, "force datalog or grounding")->check(CLI::IsMember({"datalog", "grounding"}));
  }

  PipelineOptions options() const {
    PipelineOptions o;
    o.m = m;
    o.elim_rounds = elim_rounds;
    o.prune = !no_prune;
    o.symmetry = symmetry;
    o.stratified = !rule_goal;
    o.include_aux = aux;
    if (route == "datalog") o.route = Route::Datalog;
    if (route == "grounding") o.route = Route::Grounding;
    return o;
  }
};

}  // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Decides positive conjectures over Horn clauses with simple linear rational bounds.", "slr-hammer"};
  app.require_subcommand(1);

  detail::CommonFlags decide_flags;
  bool stats = false, trace = false;
  CLI::App* decide = app.add_subcommand("decide", "decide the conjecture (or satisfiability) of a problem");
  decide_flags.add(decide);
  decide->add_flag("--stats", stats, "print sizes and phase timings");
  decide->add_flag("--trace", trace, "print per-iteration delta counts of the saturation");

  detail::CommonFlags hammer_flags;
  std::string hammer_out, hammer_path;
  CLI::App* hammer = app.add_subcommand("hammer", "write the Datalog hammer output");
  hammer_flags.add(hammer);
  hammer->add_option("--out", hammer_out, "datalog or clauses")->required()->check(CLI::IsMember({"datalog", "clauses"}));
  hammer->add_option("-o,--output", hammer_path, "output file (default stdout)");

  detail::CommonFlags ground_flags;
  std::string ground_out, ground_path;
  CLI::App* ground = app.add_subcommand("ground", "write the finite abstraction");
  ground_flags.add(ground);
  ground->add_option("--out", ground_out, "clauses or smt")->required()->check(CLI::IsMember({"clauses", "smt"}));
  ground->add_option("-o,--output", ground_path, "output file (default stdout)");

  detail::CommonFlags oracle_flags;
  bool oracle_stats = false;
  CLI::App* oracle = app.add_subcommand("oracle", "decide by grounding and brute force");
  oracle_flags.add(oracle);
  oracle->add_flag("--stats", oracle_stats, "print sizes and phase timings");

  std::string datalog_file;
  bool datalog_trace = false, datalog_model = false;
  CLI::App* datalog = app.add_subcommand("datalog", "saturate a Datalog program and answer its query");
  datalog->add_option("file", datalog_file, "Datalog file")->required();
  datalog->add_flag("--trace", datalog_trace, "print per-iteration delta counts");
  datalog->add_flag("--model", datalog_model, "print the saturated model");

  std::uint64_t seed = 0;
  GeneratorOptions gen_opt;
  std::string shape = "universal";
  bool non_horn = false;
  CLI::App* gen = app.add_subcommand("gen", "print a random problem");
  gen->add_option("--seed", seed, "random seed")->required();
  gen->add_option("--predicates", gen_opt.predicates, "number of predicates");
  gen->add_option("--arity", gen_opt.max_arity, "maximal arity");
  gen->add_option("--clauses", gen_opt.clauses, "number of clauses");
  gen->add_option("--vars", gen_opt.variables, "variables per clause");
  gen->add_option("--min-const", gen_opt.min_constant, "smallest constant");
  gen->add_option("--max-const", gen_opt.max_constant, "largest constant");
  gen->add_option("--facts", gen_opt.facts, "ground facts of F");
  gen->add_option("--conj-vars", gen_opt.conjecture_variables, "conjecture variables");
  gen->add_flag("--non-horn", non_horn, "allow several positive literals");
  gen->add_flag("--negative", gen_opt.negative_conjecture, "allow negative literals in the conjecture");
  gen->add_option("--shape", shape, "universal, existential, bottom or none")
      ->check(CLI::IsMember({"universal", "existential", "bottom", "none"}));

  std::size_t suite_count = 100;
  SuiteOptions suite_opt;
  CLI::App* suite = app.add_subcommand("suite", "run the randomized cross-checks");
  suite->add_option("--count", suite_count, "seeds per check");
  suite->add_option("--threads", suite_opt.threads, "worker threads (0: all cores)");
  suite->add_option("--repro", suite_opt.repro_dir, "directory for minimized failing inputs");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return exit_codes::kUsage;
  }

  try {
    auto load = [](const std::string& file) { return parse_problem(detail::read_file(file)); };
    if (decide->parsed() || oracle->parsed()) {
      const bool is_oracle = oracle->parsed();
      PipelineOptions opt = (is_oracle ? oracle_flags : decide_flags).options();
      if (is_oracle) opt.route = Route::Grounding;
      if (trace)
        opt.engine.trace = [&err](std::size_t s, std::size_t i, std::size_t n) {
          err << "stratum " << s << " iteration " << i << " delta " << n << "\n";
        };
      Problem p = load(is_oracle ? oracle_flags.file : decide_flags.file);
      PipelineResult r = run_pipeline(p, opt);
      detail::print_verdict(r, out);
      if (stats || oracle_stats) detail::print_stats(r, out);
      return exit_code(r.verdict);
    }
    if (hammer->parsed()) {
      PipelineOptions opt = hammer_flags.options();
      opt.route = Route::Datalog;
      opt.evaluate = false;
      PipelineResult r = run_pipeline(load(hammer_flags.file), opt);
      detail::write_output(hammer_path,
                           hammer_out == "datalog" ? export_datalog(*r.program) : export_horn_clauses(*r.program), out);
      return 0;
    }
    if (ground->parsed()) {
      GroundAbstraction g = build_abstraction(load(ground_flags.file), ground_flags.options());
      detail::write_output(ground_path, ground_out == "smt" ? export_smt(g) : export_clauses(g), out);
      return 0;
    }
    if (datalog->parsed()) {
      DatalogProgram p = parse_datalog(detail::read_file(datalog_file));
      EngineOptions eo;
      if (datalog_trace)
        eo.trace = [&err](std::size_t s, std::size_t i, std::size_t n) {
          err << "stratum " << s << " iteration " << i << " delta " << n << "\n";
        };
      Model m = saturate(p, eo);
      const bool holds = query_goal(m, p.query);
      out << p.query << (holds ? " holds" : " does not hold") << "\n";
      if (datalog_model)
        for (const DlAtom& a : m.atoms()) out << to_string(a) << ".\n";
      return holds ? 0 : 1;
    }
    if (gen->parsed()) {
      gen_opt.horn = !non_horn;
      gen_opt.shape = shape == "existential" ? ConjectureShape::Existential
                      : shape == "bottom"    ? ConjectureShape::Bottom
                      : shape == "none"      ? ConjectureShape::None
                                             : ConjectureShape::Universal;
      out << "% gen --seed " << seed << "\n" << print_problem(random_problem(seed, gen_opt));
      return 0;
    }
    if (suite->parsed()) {
      SuiteReport r = run_property_suite(suite_count, suite_opt);
      const std::pair<const char*, const PropertyReport*> rows[] = {
          {"hammer", &r.hammer},   {"grounding", &r.grounding}, {"elim", &r.elim},
          {"flatten", &r.flatten}, {"seminaive", &r.seminaive}, {"tfacts", &r.tfacts}};
      for (const auto& [name, rep] : rows) {
        out << name << ": " << rep->agreed << "/" << rep->checked << " agree, " << rep->skipped << " skipped, "
            << rep->refutations << " refuted\n";
        for (const std::string& f : rep->failures) out << f;
      }
      return r.ok() ? 0 : 1;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_codes::kUsage;
  } catch (const SyntaxError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_codes::kParse;
  } catch (const ArityMismatch& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_codes::kParse;
  } catch (const UnsupportedFragment& e) {
    err << "unsupported: " << e.what() << "\n";
    return exit_codes::kUnsupported;
  } catch (const LimitExceeded& e) {
    err << "too large: " << e.what() << "\n";
    return exit_codes::kUnsupported;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_codes::kFailure;
  }
  return exit_codes::kUsage;
}

}  // namespace slrh
