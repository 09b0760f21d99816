// Randomized cross-checks between the hammers, the oracles and the
// preprocessing steps, with a greedy minimizer for failing inputs.
#pragma once

#include "slrh/generator.hpp"
#include "slrh/pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace slrh {

struct PropertyReport {
  std::size_t checked = 0;
  std::size_t agreed = 0;
  std::size_t skipped = 0;
  /// Instances whose reference verdict found a counter-example or model.
  std::size_t refutations = 0;
  /// Minimized counter-examples, as problem text with a leading comment.
  std::vector<std::string> failures;

  bool ok() const { return checked > 0 && agreed == checked; }

  void merge(PropertyReport&& o) {
    checked += o.checked;
    agreed += o.agreed;
    skipped += o.skipped;
    refutations += o.refutations;
    for (std::string& f : o.failures) failures.push_back(std::move(f));
  }
};

struct SuiteOptions {
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// When non-empty, each failure is also written to `<dir>/<check>-<seed>.slr`.
  std::string repro_dir;
};

/// True when the verdict says a counter-example or model exists.
inline bool refuted(Verdict v) { return v == Verdict::NotEntailed || v == Verdict::Satisfiable; }

/// Greedy shrinking: drops clauses, then theory atoms, moves bound constants
/// toward 0 and drops literals, while `fails` keeps holding.
inline Problem minimize(Problem p, const std::function<bool(const Problem&)>& fails) {
  auto still = [&](const Problem& q) {
    try {
      return fails(q);
    } catch (const std::exception&) {
      return false;
    }
  };
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
      Problem q = p;
      q.clauses.erase(q.clauses.begin() + static_cast<std::ptrdiff_t>(i));
      if (still(q)) {
        p = std::move(q);
        progress = true;
        --i;
      }
    }
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
      for (std::size_t k = 0; k < p.clauses[i].constraint.size(); ++k) {
        Problem q = p;
        q.clauses[i].constraint.erase(q.clauses[i].constraint.begin() + static_cast<std::ptrdiff_t>(k));
        if (still(q)) {
          p = std::move(q);
          progress = true;
          --k;
        }
      }
      for (std::size_t k = 0; k < p.clauses[i].constraint.size(); ++k) {
        const TheoryAtom& a = p.clauses[i].constraint[k];
        if (a.shape() != AtomShape::Bound || a.bound_value() == 0) continue;
        Rational c = a.bound_value();
        Rational toward = c > 0 ? c - 1 : c + 1;
        if (abs(c) < 1) toward = Rational(0);
        Problem q = p;
        q.clauses[i].constraint[k] = TheoryAtom::bound(a.subject(), a.op(), toward);
        if (still(q)) {
          p = std::move(q);
          progress = true;
        }
      }
      for (std::size_t k = 0; p.clauses[i].literals.size() > 1 && k < p.clauses[i].literals.size(); ++k) {
        Problem q = p;
        q.clauses[i].literals.erase(q.clauses[i].literals.begin() + static_cast<std::ptrdiff_t>(k));
        if (still(q)) {
          p = std::move(q);
          progress = true;
          --k;
        }
      }
    }
  }
  return p;
}

namespace detail {

inline std::size_t conjecture_arity(const Problem& p) {
  return std::max<std::size_t>(1, p.conjecture ? p.conjecture->variables.size() : 0);
}

/// Refutation by grounding over sampled rationals.
inline bool direct_refutes(const Problem& p, std::size_t samples, std::uint64_t cap = max_assignments_from_env()) {
  return direct_decide(p.clauses, p.conjecture, samples, cap).satisfiable;
}

inline void record(PropertyReport& r, std::uint64_t seed, const std::string& what, const Problem& p,
                   const std::function<bool(const Problem&)>& fails) {
  Problem small = minimize(p, fails);
  r.failures.push_back("% seed " + std::to_string(seed) + ": " + what + "\n" + print_problem(small));
}

inline GeneratorOptions mixed_options(std::uint64_t seed) {
  GeneratorOptions o;
  const std::uint64_t s = seed % 20;
  o.shape = s < 12 ? ConjectureShape::Universal
            : s < 15 ? ConjectureShape::Existential
            : s < 17 ? ConjectureShape::Bottom
                     : ConjectureShape::None;
  o.conjecture_variables = 1 + seed % 2;
  o.clauses = 3 + seed % 4;
  return o;
}

/// Runs `one` for every seed on a small thread pool. Reports are merged in
/// seed order, so the result does not depend on scheduling.
inline PropertyReport run_seeds(std::uint64_t first_seed, std::size_t count, const SuiteOptions& opt,
                                const std::string& name,
                                const std::function<void(std::uint64_t, PropertyReport&)>& one) {
  std::vector<PropertyReport> local(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < count; i = next++) {
      const std::uint64_t seed = first_seed + i;
      try {
        one(seed, local[i]);
      } catch (const std::exception& e) {
        ++local[i].checked;
        local[i].failures.push_back("% seed " + std::to_string(seed) + ": " + e.what() + "\n");
      }
    }
  };
  unsigned n = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, count)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  PropertyReport rep;
  for (std::size_t i = 0; i < count; ++i) {
    if (!opt.repro_dir.empty() && !local[i].failures.empty()) {
      std::filesystem::create_directories(opt.repro_dir);
      std::ofstream f(std::filesystem::path(opt.repro_dir) / (name + "-" + std::to_string(first_seed + i) + ".slr"));
      for (const std::string& text : local[i].failures) f << text;
    }
    rep.merge(std::move(local[i]));
  }
  return rep;
}

}  // namespace detail

/// Horn problems with positive conjectures: every Datalog encoding, the
/// grounding hammer with the oracle and the direct sampled check must agree.
/// Not-entailed Datalog answers must come with a counter-model that satisfies
/// ψ's clause part and falsifies the conjecture.
inline PropertyReport check_hammer_agreement(std::uint64_t first_seed, std::size_t count, const SuiteOptions& opt = {}) {
  return detail::run_seeds(first_seed, count, opt, "hammer", [&](std::uint64_t seed, PropertyReport& rep) {
    Problem p = random_problem(seed, detail::mixed_options(seed));
    std::vector<PipelineOptions> variants(4);
    variants[0].route = Route::Datalog;
    variants[1].route = Route::Datalog;
    variants[1].stratified = false;
    variants[1].prune = false;
    variants[2].route = Route::Datalog;
    variants[2].symmetry = true;
    variants[3].route = Route::Grounding;
    auto disagreement = [&](const Problem& q) -> std::string {
      const bool expected = detail::direct_refutes(q, detail::conjecture_arity(q) + 1);
      if (&q == &p && expected) ++rep.refutations;
      for (std::size_t v = 0; v < variants.size(); ++v) {
        PipelineResult r = run_pipeline(q, variants[v]);
        if (refuted(r.verdict) != expected)
          return "variant " + std::to_string(v) + " says " + to_string(r.verdict) + ", direct check says " +
                 (expected ? "refuted" : "not refuted");
        if (r.counter_model && !verify_counter_model(q, r)) return "counter-model fails re-verification";
      }
      return {};
    };
    try {
      std::string why = disagreement(p);
      ++rep.checked;
      if (why.empty()) {
        ++rep.agreed;
      } else {
        detail::record(rep, seed, why, p, [&](const Problem& q) { return !disagreement(q).empty(); });
      }
    } catch (const TooLarge&) {
      ++rep.skipped;
    }
  });
}

/// Non-Horn problems and non-positive conjectures: grounding hammer with the
/// oracle against the direct sampled check.
inline PropertyReport check_grounding_agreement(std::uint64_t first_seed, std::size_t count, const SuiteOptions& opt = {}) {
  return detail::run_seeds(first_seed, count, opt, "grounding", [&](std::uint64_t seed, PropertyReport& rep) {
    GeneratorOptions o = detail::mixed_options(seed);
    o.horn = seed % 2 == 0;
    o.negative_conjecture = true;
    o.predicates = 3;
    o.max_arity = 1;
    o.variables = 1;
    o.conjecture_variables = 1;
    o.min_constant = -1;
    o.max_constant = 1;
    o.clauses = 3 + seed % 3;
    o.facts = 1;
    Problem p = random_problem(seed, o);
    auto differs = [&](const Problem& q) {
      PipelineOptions g;
      g.route = Route::Grounding;
      g.max_assignments = 1ull << 24;
      const bool expected = detail::direct_refutes(q, detail::conjecture_arity(q), 1ull << 24);
      if (&q == &p && expected) ++rep.refutations;
      return refuted(run_pipeline(q, g).verdict) != expected;
    };
    try {
      ++rep.checked;
      if (!differs(p)) {
        ++rep.agreed;
      } else {
        detail::record(rep, seed, "grounding hammer disagrees with the direct check", p, differs);
      }
    } catch (const TooLarge&) {
      --rep.checked;
      ++rep.skipped;
    }
  });
}

/// Replacing N by elim(S, N) does not change the verdict.
inline PropertyReport check_elim_preserves(std::uint64_t first_seed, std::size_t count, const SuiteOptions& opt = {}) {
  return detail::run_seeds(first_seed, count, opt, "elim", [&](std::uint64_t seed, PropertyReport& rep) {
    GeneratorOptions o = detail::mixed_options(seed);
    o.facts = 1 + seed % 3;
    Problem p = random_problem(seed, o);
    auto differs = [&](const Problem& q) {
      Problem e = q;
      e.clauses = elim(find_positively_grounded(q.clauses), q.clauses);
      const std::size_t s = detail::conjecture_arity(q) + 1;
      const bool expected = detail::direct_refutes(q, s);
      if (&q == &p && expected) ++rep.refutations;
      if (expected != detail::direct_refutes(e, s)) return true;
      PipelineOptions d;
      d.elim_rounds = 1;
      return refuted(run_pipeline(q, d).verdict) != refuted(run_pipeline(q).verdict);
    };
    try {
      ++rep.checked;
      if (!differs(p)) {
        ++rep.agreed;
      } else {
        detail::record(rep, seed, "elim changes the verdict", p, differs);
      }
    } catch (const TooLarge&) {
      --rep.checked;
      ++rep.skipped;
    }
  });
}

/// N ⊨ ∀ȳ.φ iff N ∪ rflat(φ) ⊨ ∀ȳ.pflat(φ).
inline PropertyReport check_flatten_preserves(std::uint64_t first_seed, std::size_t count, const SuiteOptions& opt = {}) {
  return detail::run_seeds(first_seed, count, opt, "flatten", [&](std::uint64_t seed, PropertyReport& rep) {
    GeneratorOptions o = detail::mixed_options(seed);
    o.shape = ConjectureShape::Universal;
    Problem p = random_problem(seed, o);
    auto differs = [&](const Problem& q) {
      FlattenResult fr = flatten_conjecture(*q.conjecture);
      Problem f = q;
      f.clauses.insert(f.clauses.end(), fr.rules.begin(), fr.rules.end());
      Formula goal = Formula::lit(Literal{true, fr.goal});
      f.conjecture = Conjecture{Quantifier::Universal, variables(goal), goal};
      const std::size_t s = detail::conjecture_arity(q) + 1;
      const bool expected = detail::direct_refutes(q, s);
      if (&q == &p && expected) ++rep.refutations;
      return expected != detail::direct_refutes(f, s);
    };
    try {
      ++rep.checked;
      if (!differs(p)) {
        ++rep.agreed;
      } else {
        detail::record(rep, seed, "flattening changes the verdict", p, differs);
      }
    } catch (const TooLarge&) {
      --rep.checked;
      ++rep.skipped;
    }
  });
}

/// Semi-naive saturation equals the naive fixpoint, on random stratified
/// programs and on hammer output.
inline PropertyReport check_seminaive(std::uint64_t first_seed, std::size_t count, const SuiteOptions& opt = {}) {
  return detail::run_seeds(first_seed, count, opt, "seminaive", [&](std::uint64_t seed, PropertyReport& rep) {
    DatalogProgram prog;
    if (seed % 2 == 0) {
      prog = random_datalog(seed);
    } else {
      PipelineOptions o;
      o.route = Route::Datalog;
      o.evaluate = false;
      prog = *run_pipeline(random_problem(seed, detail::mixed_options(seed)), o).program;
    }
    ++rep.checked;
    if (saturate(prog).atoms() == naive_fixpoint(prog)) {
      ++rep.agreed;
    } else {
      rep.failures.push_back("% seed " + std::to_string(seed) + ": semi-naive differs from naive\n" +
                             export_datalog(prog));
    }
  });
}

/// tfacts agrees with substitution and simplification on every tuple.
inline PropertyReport check_tfacts(std::uint64_t first_seed, std::size_t count, const SuiteOptions& opt = {}) {
  return detail::run_seeds(first_seed, count, opt, "tfacts", [&](std::uint64_t seed, PropertyReport& rep) {
    Problem p = random_problem(seed, detail::mixed_options(seed));
    std::vector<Clause> n = p.clauses;
    // Comparison atoms exercise the binary fast path.
    n.push_back(Clause{{TheoryAtom::relation(Term::variable("x"), static_cast<CmpOp>(seed % 6), Term::variable("y"))},
                       {Literal{true, FreeAtom{"C", {Term::variable("x"), Term::variable("y")}}}}});
    LinearExpr sum = LinearExpr::of(Term::variable("x"));
    sum.add(LinearExpr::of(Term::variable("y")), Rational(2));
    n.push_back(Clause{{TheoryAtom(sum, static_cast<CmpOp>((seed + 3) % 6), LinearExpr::of(Rational(1)))},
                       {Literal{true, FreeAtom{"C", {Term::variable("x"), Term::variable("y")}}}}});
    TrenResult tr = tren(n);
    std::vector<Clause> bounds(p.clauses);
    TestPointSet tps = make_test_points(
        build_partition(compute_endpoints(bounds, find_positively_grounded(bounds))), 1 + seed % 3);
    ++rep.checked;
    std::size_t bad = tfacts_discrepancies(tr.predicates, tps, tfacts(tr.predicates, tps));
    if (bad == 0) {
      ++rep.agreed;
    } else {
      rep.failures.push_back("% seed " + std::to_string(seed) + ": " + std::to_string(bad) + " wrong theory facts\n");
    }
  });
}

struct SuiteReport {
  PropertyReport hammer, grounding, elim, flatten, seminaive, tfacts;

  bool ok() const {
    return hammer.ok() && grounding.ok() && elim.ok() && flatten.ok() && seminaive.ok() && tfacts.ok();
  }
};

/// Every check over seeds 1..count.
inline SuiteReport run_property_suite(std::size_t count, const SuiteOptions& opt = {}) {
  SuiteReport r;
  r.hammer = check_hammer_agreement(1, count, opt);
  r.grounding = check_grounding_agreement(1, count, opt);
  r.elim = check_elim_preserves(1, count, opt);
  r.flatten = check_flatten_preserves(1, count, opt);
  r.seminaive = check_seminaive(1, count, opt);
  r.tfacts = check_tfacts(1, count, opt);
  return r;
}

}  // namespace slrh
