// End-to-end decision procedure: preprocessing, test points, then either the
// Datalog hammer with saturation or the grounding hammer with the oracle.
#pragma once

#include "slrh/oracle.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace slrh {

enum class Route { Datalog, Grounding };
enum class Verdict { Entailed, NotEntailed, Unsatisfiable, Satisfiable };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Entailed: return "ENTAILED";
    case Verdict::NotEntailed: return "NOT ENTAILED";
    case Verdict::Unsatisfiable: return "UNSATISFIABLE";
    case Verdict::Satisfiable: return "SATISFIABLE";
  }
  return "?";
}

inline int exit_code(Verdict v) { return v == Verdict::Entailed || v == Verdict::Unsatisfiable ? 0 : 1; }

struct PipelineOptions {
  /// Test points per non-point interval; 0 picks max(1, |vars(φ)|).
  std::size_t m = 0;
  /// Rounds of elim before the hammer.
  unsigned elim_rounds = 0;
  /// Read a guarded goal `Λ -> A(x̄)` directly instead of flattening.
  bool prune = true;
  bool symmetry = false;
  /// `missing`/`goal` encoding with negation; otherwise one `goal :- ...` rule.
  bool stratified = true;
  /// Unset: Datalog when N is Horn and the conjecture positive.
  std::optional<Route> route;
  /// Build everything but skip saturation / the oracle.
  bool evaluate = true;
  /// Keep `_flat`, `_dom` and theory predicates in the counter-model.
  bool include_aux = false;
  std::uint64_t max_assignments = max_assignments_from_env();
  EngineOptions engine;
};

struct PipelineStats {
  std::size_t endpoints = 0;
  std::size_t intervals = 0;
  std::size_t points = 0;
  std::size_t m = 0;
  std::size_t clauses = 0;
  std::size_t theory_predicates = 0;
  std::size_t facts = 0;
  std::size_t rules = 0;
  std::size_t model_size = 0;
  std::size_t ground_atoms = 0;
  double translate_seconds = 0;
  double hammer_seconds = 0;
  double reason_seconds = 0;
};

/// A model over test points, restricted to the input predicates unless
/// auxiliary ones were requested.
struct CounterModel {
  std::map<std::string, std::vector<std::vector<std::uint32_t>>> relations;

  std::set<FreeAtom> atoms(const TestPointSet& tps) const {
    std::set<FreeAtom> out;
    for (const auto& [name, rows] : relations)
      for (const auto& row : rows) {
        FreeAtom a{name, {}};
        for (std::uint32_t p : row) a.args.push_back(tps.points[p].term());
        out.insert(std::move(a));
      }
    return out;
  }
};

struct PipelineResult {
  Verdict verdict = Verdict::Entailed;
  Route route = Route::Datalog;
  bool satisfiability = false;
  PipelineStats stats;
  TestPointSet tps;
  std::optional<DatalogProgram> program;
  std::optional<GroundAbstraction> abstraction;
  std::optional<CounterModel> counter_model;
  /// Theory predicates of the Datalog route.
  std::vector<TheoryPredicate> theory_predicates;
};

inline bool is_auxiliary_predicate(const std::string& name) {
  return name == "goal" || name == "expected" || name == "missing" || name.rfind("t_", 0) == 0 ||
         name.rfind("_flat", 0) == 0 || name == "_dom";
}

/// `P(a_{[0,1],1}, a_{(2,inf),1})` lines, sorted.
inline std::vector<std::string> describe(const CounterModel& cm, const TestPointSet& tps) {
  std::vector<std::string> out;
  for (const auto& [name, rows] : cm.relations)
    for (const auto& row : rows) {
      std::string s = name;
      if (!row.empty()) {
        s += "(";
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? ", " : "") + tps.display(row[i]);
        s += ")";
      }
      out.push_back(std::move(s));
    }
  return out;
}

/// Interval-level reading of the model: every value of an interval behaves
/// like the interval's first test point, so each tuple over first points
/// covers a box of intervals. `Q holds on [0,1] via a_{[0,1],1}`.
inline std::vector<std::string> describe_intervals(const CounterModel& cm, const TestPointSet& tps) {
  std::vector<std::string> out;
  for (const auto& [name, rows] : cm.relations)
    for (const auto& row : rows) {
      bool first = std::all_of(row.begin(), row.end(), [&](std::uint32_t p) { return tps.point(p).j == 1; });
      if (!first) continue;
      std::string box, via;
      for (std::size_t i = 0; i < row.size(); ++i) {
        box += (i ? " x " : "") + to_string(tps.partition[tps.point(row[i]).interval]);
        via += (i ? ", " : "") + tps.display(row[i]);
      }
      out.push_back(row.empty() ? name + " holds" : name + " holds on " + box + " via " + via);
    }
  return out;
}

/// The input-predicate part of a saturated model whose query failed.
inline CounterModel extract_counter_model(const Model& model, const TestPointSet& tps, bool include_aux = false,
                                          const std::string& query = "goal") {
  if (query_goal(model, query)) throw GoalPresent("the goal was derived; there is no counter-model");
  std::map<std::string, std::uint32_t> ids;
  for (const TestPoint& tp : tps.points) ids[tp.name] = tp.id;
  CounterModel cm;
  for (const auto& [name, rel] : model.relations) {
    if (is_auxiliary_predicate(name) && !include_aux) continue;
    auto& rows = cm.relations[name];
    for (const auto& t : model.tuples(name)) {
      std::vector<std::uint32_t> row;
      for (const std::string& c : t) row.push_back(ids.at(c));
      rows.push_back(std::move(row));
    }
  }
  return cm;
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

inline bool all_horn(const std::vector<Clause>& n) {
  return std::all_of(n.begin(), n.end(), [](const Clause& c) { return is_horn(c); });
}

inline std::size_t pick_m(const PipelineOptions& opt, const std::optional<Conjecture>& conj) {
  if (opt.m) return opt.m;
  return std::max<std::size_t>(1, conj ? conj->variables.size() : 0);
}

inline TestPointSet make_points(const std::vector<Clause>& n, const std::vector<TheoryAtom>& extra, std::size_t m,
                                PipelineStats& st) {
  std::set<Border> borders = compute_endpoints(n, find_positively_grounded(n), extra);
  std::set<Rational> values;
  for (const Border& b : borders)
    if (!b.infinite) values.insert(b.value);
  st.endpoints = values.size();
  TestPointSet tps = make_test_points(build_partition(borders), m);
  st.intervals = tps.partition.size();
  st.points = tps.size();
  st.m = tps.m;
  return tps;
}

inline PipelineResult run_datalog(const Problem& problem, const PipelineOptions& opt) {
  PipelineResult res;
  res.route = Route::Datalog;
  auto t0 = Clock::now();
  std::vector<Clause> n = problem.clauses;
  if (!all_horn(n)) throw UnsupportedFragment("the Datalog hammer needs Horn clauses");
  std::optional<FreeAtom> goal;
  std::vector<TheoryAtom> guard;
  const std::optional<Conjecture>& conj = problem.conjecture;
  if (!conj || conj->body.is_false()) {
    res.satisfiability = true;
  } else if (conj->quantifier == Quantifier::Existential) {
    n = reduce_existential(*conj, n);
    res.satisfiability = true;
  } else {
    if (!is_positive(conj->body)) throw NonPositiveConjecture("the Datalog hammer needs a positive conjecture");
    std::optional<GuardedGoal> gg;
    if (opt.prune) gg = split_guarded_goal(conj->body);
    if (gg) {
      goal = gg->atom;
      guard = gg->guard;
    } else {
      FlattenResult fr = flatten_conjecture(*conj);
      n.insert(n.end(), fr.rules.begin(), fr.rules.end());
      goal = fr.goal;
    }
  }
  n = elim_rounds(std::move(n), opt.elim_rounds);
  res.stats.clauses = n.size();
  res.tps = make_points(n, guard, pick_m(opt, conj), res.stats);
  res.stats.translate_seconds = seconds_since(t0);

  auto t1 = Clock::now();
  TrenResult tr = tren(n);
  DatalogProgram p;
  p.facts = tfacts(tr.predicates, res.tps);
  bool needs_dom = false;
  for (const Clause& c : tr.clauses) {
    DlRule r = clause_to_rule(c, needs_dom);
    if (r.body.empty() && r.negated.empty() && r.head && r.head->is_ground()) {
      p.facts.push_back(*r.head);
    } else if (r.body.empty() && r.negated.empty() && !r.head) {
      p.facts.push_back(DlAtom{"goal", {}});
    } else {
      p.rules.push_back(std::move(r));
    }
  }
  if (needs_dom)
    for (const TestPoint& tp : res.tps.points) p.facts.push_back(DlAtom{"_dom", {DlTerm::constant_of(tp.name)}});
  p = goal_transform(std::move(p));
  if (goal) {
    GroundGoalOptions gopt;
    gopt.symmetry = opt.symmetry && symmetry_safe(tr.predicates, guard);
    std::vector<DlAtom> expected = ground_goal(*goal, guard, res.tps, gopt);
    if (opt.stratified) {
      encode_stratified_goal(p, expected, goal->predicate, goal->args.size());
    } else {
      DlRule r;
      r.head = DlAtom{"goal", {}};
      r.body = std::move(expected);
      if (r.body.empty()) {
        p.facts.push_back(*r.head);
      } else {
        p.rules.push_back(std::move(r));
      }
    }
  }
  for (const TheoryPredicate& t : tr.predicates) p.annotations.push_back(theory_comment(t));
  for (const TestPoint& tp : res.tps.points)
    p.annotations.push_back(tp.name + " = " + res.tps.display(tp.id) + " beta " + to_string(tp.beta));
  res.stats.theory_predicates = tr.predicates.size();
  res.stats.facts = p.facts.size();
  res.stats.rules = p.rules.size() + p.negation_rules.size();
  res.stats.hammer_seconds = seconds_since(t1);

  if (opt.evaluate) {
    auto t2 = Clock::now();
    Model model = saturate(p, opt.engine);
    res.stats.reason_seconds = seconds_since(t2);
    res.stats.model_size = model.size();
    const bool derived = query_goal(model, p.query);
    if (res.satisfiability) {
      res.verdict = derived ? Verdict::Unsatisfiable : Verdict::Satisfiable;
      if (conj && conj->quantifier == Quantifier::Existential)
        res.verdict = derived ? Verdict::Entailed : Verdict::NotEntailed;
    } else {
      res.verdict = derived ? Verdict::Entailed : Verdict::NotEntailed;
    }
    if (!derived) res.counter_model = extract_counter_model(model, res.tps, opt.include_aux, p.query);
  }
  res.theory_predicates = std::move(tr.predicates);
  res.program = std::move(p);
  return res;
}

// Constants in free atoms of the conjecture need point intervals.
inline void conjecture_border_atoms(const Formula& f, std::vector<TheoryAtom>& out) {
  if (f.kind == FormulaKind::Theory) {
    out.insert(out.end(), f.theory.begin(), f.theory.end());
  } else if (f.kind == FormulaKind::Atom) {
    for (const Term& t : f.literal.atom.args)
      if (t.is_number()) out.push_back(TheoryAtom::bound(Term::variable("_c"), CmpOp::Eq, t.value()));
  }
  for (const Formula& c : f.children) conjecture_border_atoms(c, out);
}

inline PipelineResult run_grounding(const Problem& problem, const PipelineOptions& opt) {
  PipelineResult res;
  res.route = Route::Grounding;
  auto t0 = Clock::now();
  std::vector<Clause> n = problem.clauses;
  std::optional<Conjecture> conj = problem.conjecture;
  bool existential = false;
  if (conj && conj->quantifier == Quantifier::Existential) {
    n = reduce_existential_cnf(*conj, n);
    existential = true;
    res.satisfiability = true;
  } else if (!conj || conj->body.is_false()) {
    res.satisfiability = true;
  }
  std::optional<Conjecture> goal = res.satisfiability ? std::nullopt : conj;
  std::vector<TheoryAtom> extra;
  if (goal) conjecture_border_atoms(goal->body, extra);
  n = elim_rounds(std::move(n), opt.elim_rounds);
  res.stats.clauses = n.size();
  TestPointSet tps = make_points(n, extra, pick_m(opt, conj), res.stats);
  res.tps = tps;
  res.stats.translate_seconds = seconds_since(t0);

  auto t1 = Clock::now();
  GroundAbstraction g = grounding_hammer(n, goal, std::move(tps));
  res.stats.hammer_seconds = seconds_since(t1);
  if (opt.evaluate) {
    auto t2 = Clock::now();
    GroundResult r = oracle_decide(g, opt.max_assignments);
    res.stats.reason_seconds = seconds_since(t2);
    res.stats.ground_atoms = r.atoms;
    if (res.satisfiability && !existential) {
      res.verdict = r.satisfiable ? Verdict::Satisfiable : Verdict::Unsatisfiable;
    } else {
      res.verdict = r.satisfiable ? Verdict::NotEntailed : Verdict::Entailed;
    }
    if (r.satisfiable) {
      CounterModel cm;
      for (const FreeAtom& a : r.true_atoms) {
        if (is_auxiliary_predicate(a.predicate) && !opt.include_aux) continue;
        std::vector<std::uint32_t> row;
        for (const Term& t : a.args) row.push_back(t.point_id());
        cm.relations[a.predicate].push_back(std::move(row));
      }
      for (auto& [name, rows] : cm.relations) std::sort(rows.begin(), rows.end());
      res.counter_model = std::move(cm);
    }
  }
  res.abstraction = std::move(g);
  return res;
}

}  // namespace detail

/// The route chosen when none is forced.
inline Route default_route(const Problem& p) {
  if (!detail::all_horn(p.clauses)) return Route::Grounding;
  if (p.conjecture && !p.conjecture->body.is_false() && !is_positive(p.conjecture->body)) return Route::Grounding;
  return Route::Datalog;
}

inline PipelineResult run_pipeline(const Problem& problem, const PipelineOptions& opt = {}) {
  Route r = opt.route.value_or(default_route(problem));
  return r == Route::Datalog ? detail::run_datalog(problem, opt) : detail::run_grounding(problem, opt);
}

/// ψ for the problem, built with the same test points the pipeline would use.
inline GroundAbstraction build_abstraction(const Problem& problem, PipelineOptions opt = {}) {
  opt.route = Route::Grounding;
  opt.evaluate = false;
  return *run_pipeline(problem, opt).abstraction;
}

/// Re-checks a counter-model against ψ over the result's own test points: it
/// must satisfy gnd_B(N) and, for a universal conjecture, falsify some φρ.
inline bool verify_counter_model(const Problem& problem, const PipelineResult& r) {
  if (!r.counter_model) return false;
  std::vector<Clause> n = problem.clauses;
  std::optional<Conjecture> conj = problem.conjecture;
  if (conj && conj->quantifier == Quantifier::Existential) {
    n = reduce_existential_cnf(*conj, n);
    conj.reset();
  } else if (conj && conj->body.is_false()) {
    conj.reset();
  }
  try {
    std::set<FreeAtom> atoms = r.counter_model->atoms(r.tps);
    // Facts of positively grounded predicates are checked directly; the rest
    // against elim(N), where those predicates no longer occur.
    PositivelyGroundedSet s = find_positively_grounded(n);
    if (!s.predicates.empty()) {
      for (const auto& [pred, tuples] : s.facts)
        for (const auto& tuple : tuples) {
          FreeAtom a{pred, {}};
          for (const Rational& v : tuple) a.args.push_back(point_for_constant(r.tps, v));
          if (!atoms.count(a)) return false;
        }
      std::vector<Clause> rest;
      for (Clause& c : elim(s, n))
        if (std::none_of(c.literals.begin(), c.literals.end(),
                         [&](const Literal& l) { return s.contains(l.atom.predicate); }))
          rest.push_back(std::move(c));
      n = std::move(rest);
    }
    return check_interpretation(grounding_hammer(n, conj, r.tps), atoms);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace slrh
