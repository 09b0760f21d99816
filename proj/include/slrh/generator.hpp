// Seeded random problems for property testing, and a synthetic ignition-table
// problem of adjustable size.
#pragma once

#include "slrh/datalog_program.hpp"
#include "slrh/frontend.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace slrh {

enum class ConjectureShape { Universal, Existential, Bottom, None };

struct GeneratorOptions {
  /// Predicates in total, including `F` when facts are generated.
  std::size_t predicates = 4;
  std::size_t max_arity = 2;
  /// Clauses in total, including the facts.
  std::size_t clauses = 6;
  std::size_t variables = 2;
  int min_constant = -3;
  int max_constant = 3;
  /// Ground facts of the unary predicate `F`, which never occurs positively
  /// elsewhere.
  std::size_t facts = 2;
  bool horn = true;
  /// Allow negative literals in the conjecture.
  bool negative_conjecture = false;
  ConjectureShape shape = ConjectureShape::Universal;
  /// Conjecture variables (at most `variables`).
  std::size_t conjecture_variables = 1;
};

namespace detail {

class ProblemBuilder {
 public:
  ProblemBuilder(std::uint64_t seed, const GeneratorOptions& opt) : rng_(seed), opt_(opt) {
    facts_ = std::min(opt_.facts, opt_.clauses);
    const std::size_t free = facts_ && opt_.predicates > 1 ? opt_.predicates - 1 : std::max<std::size_t>(1, opt_.predicates);
    for (std::size_t i = 0; i < free; ++i) arity_.push_back(1 + pick(std::max<std::size_t>(1, opt_.max_arity)));
  }

  Problem build() {
    Problem p;
    for (std::size_t i = 0; i < arity_.size(); ++i) p.arities[name(i)] = arity_[i];
    if (facts_) {
      p.arities["F"] = 1;
      for (std::size_t i = 0; i < facts_; ++i)
        p.clauses.push_back(abstract_clause(Clause{{}, {Literal{true, FreeAtom{"F", {Term::number(constant())}}}}}));
    }
    for (std::size_t i = facts_; i < opt_.clauses; ++i) p.clauses.push_back(clause());
    switch (opt_.shape) {
      case ConjectureShape::Universal:
      case ConjectureShape::Existential: {
        Conjecture c;
        c.quantifier = opt_.shape == ConjectureShape::Universal ? Quantifier::Universal : Quantifier::Existential;
        std::size_t k = std::max<std::size_t>(1, std::min(opt_.conjecture_variables, opt_.variables));
        for (std::size_t i = 0; i < k; ++i) c.variables.push_back(var(i));
        c.body = normalize(body(c.variables));
        c.variables = slrh::variables(c.body);
        p.conjecture = std::move(c);
        break;
      }
      case ConjectureShape::Bottom: p.conjecture = Conjecture{Quantifier::Universal, {}, Formula::falsum()}; break;
      case ConjectureShape::None: break;
    }
    for (const auto& [name, arity] : p.arities) p.declared.insert(name);
    return p;
  }

 private:
  std::size_t pick(std::size_t n) { return n ? static_cast<std::size_t>(rng_() % n) : 0; }
  bool coin(unsigned percent) { return rng_() % 100 < percent; }
  static std::string name(std::size_t i) { return "P" + std::to_string(i); }
  static std::string var(std::size_t i) { return i < 3 ? std::string(1, "xyz"[i]) : "v" + std::to_string(i); }
  Rational constant() {
    const long long span = opt_.max_constant - opt_.min_constant + 1;
    return Rational(opt_.min_constant + static_cast<long long>(rng_() % static_cast<std::uint64_t>(span)));
  }
  CmpOp op() { return static_cast<CmpOp>(pick(6)); }

  FreeAtom atom(const std::vector<std::string>& vars) {
    std::size_t i = pick(arity_.size());
    FreeAtom a{name(i), {}};
    for (std::size_t k = 0; k < arity_[i]; ++k) a.args.push_back(Term::variable(vars[pick(vars.size())]));
    return a;
  }

  TheoryAtom bound(const std::vector<std::string>& vars) {
    return TheoryAtom::bound(Term::variable(vars[pick(vars.size())]), op(), constant());
  }

  Clause clause() {
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < std::max<std::size_t>(1, opt_.variables); ++i) vars.push_back(var(i));
    Clause c;
    std::size_t bounds = pick(3);
    for (std::size_t i = 0; i < bounds; ++i) c.constraint.push_back(bound(vars));
    std::size_t body = pick(3);
    for (std::size_t i = 0; i < body; ++i) c.literals.push_back(Literal{false, atom(vars)});
    if (facts_ && coin(20)) c.literals.push_back(Literal{false, FreeAtom{"F", {Term::variable(vars[pick(vars.size())])}}});
    std::size_t heads = opt_.horn ? (coin(80) ? 1 : 0) : pick(3);
    for (std::size_t i = 0; i < heads; ++i) c.literals.push_back(Literal{true, atom(vars)});
    if (c.literals.empty()) c.literals.push_back(Literal{true, atom(vars)});
    return c;
  }

  Formula leaf(const std::vector<std::string>& vars) {
    if (coin(35)) return Formula::atom(bound(vars));
    Literal l{true, atom(vars)};
    if (opt_.negative_conjecture && coin(40)) l.positive = false;
    return Formula::lit(std::move(l));
  }

  Formula body(const std::vector<std::string>& vars) {
    std::vector<Formula> parts;
    std::size_t n = 1 + pick(3);
    for (std::size_t i = 0; i < n; ++i) parts.push_back(leaf(vars));
    Formula core = coin(60) ? Formula::disj(std::move(parts)) : Formula::conj(std::move(parts));
    std::vector<Formula> guarded;
    for (const std::string& v : vars)
      guarded.push_back(Formula::atom(TheoryAtom::bound(Term::variable(v), op(), constant())));
    guarded.push_back(std::move(core));
    return Formula::disj(std::move(guarded));
  }

  std::mt19937_64 rng_;
  GeneratorOptions opt_;
  std::size_t facts_ = 0;
  std::vector<std::size_t> arity_;
};

}  // namespace detail

inline Problem random_problem(std::uint64_t seed, const GeneratorOptions& opt = {}) {
  return detail::ProblemBuilder(seed, opt).build();
}

inline Problem generate_instance(std::uint64_t seed, const GeneratorOptions& opt = {}) { return random_problem(seed, opt); }

/// Ignition-table problem: a grid of `rpm_bands` × `load_bands` cells, one
/// `IgnTable` fact per cell, and the conjecture that every operating point has
/// an advance of at most `limit`. With `violate`, one cell exceeds it.
/// A non-negative `probe_load` fixes the load and quantifies over rpm only;
/// the violating cell is then placed in that load column.
inline std::string ecu_problem_text(std::size_t rpm_bands, std::size_t load_bands, std::uint64_t seed,
                                    bool violate, int limit = 60, int probe_load = -1) {
  std::mt19937_64 rng(seed);
  std::string out = "% ignition table, " + std::to_string(rpm_bands) + " x " + std::to_string(load_bands) + "\n";
  const bool probe = probe_load >= 0;
  out += probe ? "declare IgnTable/5.\ndeclare SafeRpm/1.\n" : "declare IgnTable/5.\ndeclare Safe/2.\n";
  std::size_t bad = violate ? static_cast<std::size_t>(rng() % (rpm_bands * load_bands)) : SIZE_MAX;
  if (violate && probe) {
    const std::size_t column = std::min<std::size_t>(load_bands - 1, static_cast<std::size_t>(probe_load) / 10);
    bad = (bad / load_bands) * load_bands + column;
  }
  std::size_t cell = 0;
  for (std::size_t r = 0; r < rpm_bands; ++r) {
    for (std::size_t l = 0; l < load_bands; ++l, ++cell) {
      // half-degree resolution
      int advance = 20 + static_cast<int>(rng() % static_cast<std::uint64_t>(2 * limit - 20));
      if (cell == bad) advance = 2 * limit + 1 + static_cast<int>(rng() % 10);
      out += "fact IgnTable(" + std::to_string(500 + 250 * r) + ", " + std::to_string(750 + 250 * r) + ", " +
             std::to_string(10 * l) + ", " + std::to_string(10 * l + 10) + ", " + std::to_string(advance) + "/2).\n";
    }
  }
  const std::string rpm_hi = std::to_string(500 + 250 * rpm_bands);
  if (probe) {
    const std::string load = std::to_string(probe_load);
    out += "clause IgnTable(rlo, rhi, llo, lhi, a), rlo <= rpm, rpm < rhi, llo <= " + load + ", lhi > " + load +
           ", a <= " + std::to_string(limit) + " -> SafeRpm(rpm).\n";
    out += "conjecture forall rpm. (500 <= rpm, rpm < " + rpm_hi + " -> SafeRpm(rpm)).\n";
    return out;
  }
  out += "clause IgnTable(rlo, rhi, llo, lhi, a), rlo <= rpm, rpm < rhi, llo <= load, load < lhi, a <= " +
         std::to_string(limit) + " -> Safe(rpm, load).\n";
  out += "conjecture forall rpm, load. (500 <= rpm, rpm < " + rpm_hi + ", 0 <= load, load < " +
         std::to_string(10 * load_bands) + " -> Safe(rpm, load)).\n";
  return out;
}

/// Random stratified program: two binary base relations over c0..c5, derived
/// relations d0..d3 where d_k may use d_j (j <= k) positively and d_j (j < k)
/// under negation. Rules are safe.
inline DatalogProgram random_datalog(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto c = [&]() { return DlTerm::constant_of("c" + std::to_string(pick(6))); };
  DatalogProgram p;
  for (const char* e : {"e0", "e1"}) {
    std::size_t n = 3 + pick(8);
    for (std::size_t i = 0; i < n; ++i) p.facts.push_back(DlAtom{e, {c(), c()}});
  }
  std::vector<std::size_t> arity = {2, 2};
  std::vector<std::string> names = {"e0", "e1"};
  for (std::size_t k = 0; k < 4; ++k) {
    std::string head = "d" + std::to_string(k);
    const std::size_t head_arity = 1 + pick(2);
    const std::size_t visible = names.size() + 1;
    names.push_back(head);
    arity.push_back(head_arity);
    std::size_t rules = 1 + pick(3);
    for (std::size_t r = 0; r < rules; ++r) {
      DlRule rule;
      std::uint32_t vars = 0;
      std::size_t body = 1 + pick(3);
      for (std::size_t b = 0; b < body; ++b) {
        std::size_t q = pick(visible);
        DlAtom a{names[q], {}};
        for (std::size_t i = 0; i < arity[q]; ++i) {
          if (vars && pick(3) == 0) {
            a.args.push_back(c());
          } else if (vars && pick(2) == 0) {
            a.args.push_back(DlTerm::variable(static_cast<std::uint32_t>(pick(vars))));
          } else {
            a.args.push_back(DlTerm::variable(vars++));
          }
        }
        rule.body.push_back(std::move(a));
      }
      std::set<std::uint32_t> bound;
      for (const DlAtom& a : rule.body)
        for (const DlTerm& t : a.args)
          if (t.is_var) bound.insert(t.var);
      std::vector<std::uint32_t> pool(bound.begin(), bound.end());
      auto term = [&]() { return pool.empty() || pick(4) == 0 ? c() : DlTerm::variable(pool[pick(pool.size())]); };
      if (visible > 3 && pick(2) == 0) {
        std::size_t q = pick(visible - 1);
        DlAtom n{names[q], {}};
        for (std::size_t i = 0; i < arity[q]; ++i) n.args.push_back(term());
        rule.negated.push_back(std::move(n));
      }
      rule.head = DlAtom{head, {}};
      for (std::size_t i = 0; i < head_arity; ++i) rule.head->args.push_back(term());
      (rule.negated.empty() ? p.rules : p.negation_rules).push_back(std::move(rule));
    }
  }
  return p;
}

}  // namespace slrh
