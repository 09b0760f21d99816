// Brute-force ground checking, used to cross-validate the hammers.
#pragma once

#include "slrh/datalog_engine.hpp"
#include "slrh/hammer.hpp"

#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace slrh {

class TooLarge : public LimitExceeded {
 public:
  using LimitExceeded::LimitExceeded;
};

/// SLR_HAMMER_MAX_ATOMS or 2^20: the largest number of truth assignments the
/// enumerator will try.
inline std::uint64_t max_assignments_from_env() {
  if (const char* v = std::getenv("SLR_HAMMER_MAX_ATOMS")) {
    char* end = nullptr;
    unsigned long long n = std::strtoull(v, &end, 10);
    if (end != v && n > 0) return n;
  }
  return 1ull << 20;
}

struct GroundResult {
  bool satisfiable = false;
  /// A satisfying set of true atoms (when satisfiable).
  std::set<FreeAtom> true_atoms;
  bool enumerated = false;
  std::size_t atoms = 0;
};

namespace detail {

struct PropClause {
  std::vector<std::pair<std::size_t, bool>> lits;  // (atom, positive)
};

class GroundCore {
 public:
  template <typename ValueOf>
  GroundResult decide(const std::vector<Clause>& ground, const std::vector<Formula>* instances, ValueOf&& value,
                      std::uint64_t cap, bool enumerate = false) {
    std::vector<PropClause> clauses;
    for (const Clause& c : ground) {
      for (const Literal& l : c.literals) atom_id(l.atom);
      bool active = true;
      for (const TheoryAtom& a : c.constraint)
        if (!a.evaluate(value)) active = false;
      if (!active) continue;
      PropClause pc;
      for (const Literal& l : c.literals) pc.lits.emplace_back(atom_id(l.atom), l.positive);
      clauses.push_back(std::move(pc));
    }
    std::vector<Formula> props;
    bool negative_only = true;
    if (instances) {
      for (const Formula& f : *instances) {
        Formula p = normalize(reduce(f, value));
        if (!only_negative(p)) negative_only = false;
        props.push_back(std::move(p));
      }
    }
    GroundResult r;
    r.atoms = atoms_.size();
    bool horn = std::all_of(clauses.begin(), clauses.end(), [](const PropClause& c) {
      return std::count_if(c.lits.begin(), c.lits.end(), [](const auto& l) { return l.second; }) <= 1;
    });
    if (horn && negative_only && !enumerate) {
      std::vector<bool> m;
      if (!least_model(clauses, m)) return r;
      bool ok = !instances;
      for (const Formula& p : props)
        if (eval(p, m)) ok = true;
      if (!ok) return r;
      r.satisfiable = true;
      r.true_atoms = to_atoms(m);
      return r;
    }
    r.enumerated = true;
    const std::size_t k = atoms_.size();
    if (k >= 63 || (1ull << k) > cap)
      throw TooLarge("oracle: " + std::to_string(k) + " ground atoms exceed the enumeration bound");
    std::vector<std::uint64_t> pos(clauses.size(), 0), neg(clauses.size(), 0);
    for (std::size_t i = 0; i < clauses.size(); ++i)
      for (const auto& [a, s] : clauses[i].lits) (s ? pos[i] : neg[i]) |= 1ull << a;
    std::vector<bool> m(k);
    for (std::uint64_t assign = 0; assign < (1ull << k); ++assign) {
      bool ok = true;
      for (std::size_t i = 0; i < clauses.size() && ok; ++i) ok = (assign & pos[i]) || (~assign & neg[i]);
      if (!ok) continue;
      for (std::size_t a = 0; a < k; ++a) m[a] = assign >> a & 1;
      bool conj_ok = !instances;
      for (const Formula& p : props) {
        if (eval(p, m)) {
          conj_ok = true;
          break;
        }
      }
      if (!conj_ok) continue;
      r.satisfiable = true;
      r.true_atoms = to_atoms(m);
      return r;
    }
    return r;
  }

 private:
  std::size_t atom_id(const FreeAtom& a) {
    auto [it, inserted] = ids_.emplace(a, atoms_.size());
    if (inserted) atoms_.push_back(a);
    return it->second;
  }

  template <typename ValueOf>
  Formula reduce(const Formula& f, ValueOf& value) {
    switch (f.kind) {
      case FormulaKind::Theory: {
        for (const TheoryAtom& a : f.theory)
          if (!a.evaluate(value)) return Formula::falsum();
        return Formula::verum();
      }
      case FormulaKind::Atom: atom_id(f.literal.atom); return f;
      default: {
        Formula out = f;
        for (Formula& c : out.children) c = reduce(c, value);
        return out;
      }
    }
  }

  static bool only_negative(const Formula& f) {
    if (f.kind == FormulaKind::Atom) return !f.literal.positive;
    for (const Formula& c : f.children)
      if (!only_negative(c)) return false;
    return true;
  }

  bool eval(const Formula& f, const std::vector<bool>& m) const {
    switch (f.kind) {
      case FormulaKind::Atom: return m[ids_.at(f.literal.atom)] == f.literal.positive;
      case FormulaKind::Theory: return true;  // reduced away
      case FormulaKind::And:
        for (const Formula& c : f.children)
          if (!eval(c, m)) return false;
        return true;
      case FormulaKind::Or:
        for (const Formula& c : f.children)
          if (eval(c, m)) return true;
        return false;
    }
    return false;
  }

  // Counter-based unit propagation; false when a head-less clause fires.
  bool least_model(const std::vector<PropClause>& clauses, std::vector<bool>& m) const {
    m.assign(atoms_.size(), false);
    std::vector<std::size_t> missing(clauses.size());
    std::vector<std::vector<std::size_t>> watch(atoms_.size());
    std::vector<std::size_t> queue;
    auto fire = [&](std::size_t i) {
      for (const auto& [a, s] : clauses[i].lits) {
        if (!s) continue;
        if (!m[a]) {
          m[a] = true;
          queue.push_back(a);
        }
        return true;
      }
      return false;
    };
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      std::set<std::size_t> body;
      for (const auto& [a, s] : clauses[i].lits)
        if (!s) body.insert(a);
      missing[i] = body.size();
      for (std::size_t a : body) watch[a].push_back(i);
    }
    for (std::size_t i = 0; i < clauses.size(); ++i)
      if (missing[i] == 0 && !fire(i)) return false;
    while (!queue.empty()) {
      std::size_t a = queue.back();
      queue.pop_back();
      for (std::size_t i : watch[a])
        if (--missing[i] == 0 && !fire(i)) return false;
    }
    return true;
  }

  std::set<FreeAtom> to_atoms(const std::vector<bool>& m) const {
    std::set<FreeAtom> out;
    for (std::size_t a = 0; a < atoms_.size(); ++a)
      if (m[a]) out.insert(atoms_[a]);
    return out;
  }

  std::map<FreeAtom, std::size_t> ids_;
  std::vector<FreeAtom> atoms_;
};

}  // namespace detail

/// Decides ψ: theory atoms are evaluated under β, the rest is propositional.
/// Horn ψ with purely negative conjecture instances is settled by unit
/// propagation (unless `enumerate`); anything else by enumerating all truth
/// assignments.
inline GroundResult oracle_decide(const GroundAbstraction& g, std::uint64_t cap = max_assignments_from_env(),
                                  bool enumerate = false) {
  auto value = [&](const Term& t) { return g.tps.value(t); };
  for (const TheoryAtom& a : g.interval_bounds)
    if (!a.evaluate(value)) throw Error("beta violates idef");
  detail::GroundCore core;
  return core.decide(g.ground_clauses, g.has_conjecture ? &g.conjecture_instances : nullptr, value, cap, enumerate);
}

// ---------------------------------------------------------------------------
// Direct check over sampled rationals

/// Collects every numeric constant of the clauses and formulas.
inline void collect_constants(const std::vector<Clause>& n, const Formula* body, std::set<Rational>& out) {
  auto atom = [&](const TheoryAtom& a) {
    if (a.shape() == AtomShape::Bound) out.insert(a.bound_value());
    if (a.shape() == AtomShape::Linear) out.insert(a.rhs().constant);
  };
  for (const Clause& c : n) {
    for (const TheoryAtom& a : c.constraint) atom(a);
    for (const Literal& l : c.literals)
      for (const Term& t : l.atom.args)
        if (t.is_number()) out.insert(t.value());
  }
  if (body) {
    std::vector<TheoryAtom> atoms;
    collect_theory_atoms(*body, atoms);
    for (const TheoryAtom& a : atoms) atom(a);
    std::function<void(const Formula&)> walk = [&](const Formula& f) {
      if (f.kind == FormulaKind::Atom)
        for (const Term& t : f.literal.atom.args)
          if (t.is_number()) out.insert(t.value());
      for (const Formula& c : f.children) walk(c);
    };
    walk(*body);
  }
}

/// Every constant, plus `samples` rationals inside each gap between
/// consecutive constants and beyond both ends.
inline std::vector<Rational> sample_domain(const std::set<Rational>& constants, std::size_t samples) {
  std::vector<Rational> out(constants.begin(), constants.end());
  std::vector<Rational> sorted = out;
  if (sorted.empty()) {
    for (std::size_t j = 0; j < samples; ++j) out.push_back(Rational(static_cast<long long>(j)) * 7 / 3);
    return out;
  }
  for (std::size_t j = 1; j <= samples; ++j) {
    out.push_back(sorted.front() - Rational(static_cast<long long>(2 * j + 1), 2));
    out.push_back(sorted.back() + Rational(static_cast<long long>(2 * j + 1), 2));
  }
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    for (std::size_t j = 1; j <= samples; ++j)
      out.push_back(sorted[i] + (sorted[i + 1] - sorted[i]) * Rational(static_cast<long long>(j)) /
                                    Rational(static_cast<long long>(samples + 2)));
  return out;
}

/// Decides N ⊨ ∀ȳ.φ (or satisfiability of N when `conj` is empty; or an
/// existential conjecture, via N ∪ CNF(¬φ)) by grounding over sampled
/// rationals directly. Returns true when a counter-example / model exists.
inline GroundResult direct_decide(const std::vector<Clause>& n, const std::optional<Conjecture>& conj,
                                  std::size_t samples, std::uint64_t cap = max_assignments_from_env()) {
  std::vector<Clause> clauses = n;
  std::optional<Formula> body;
  std::vector<std::string> vars;
  if (conj && conj->quantifier == Quantifier::Existential) {
    clauses = reduce_existential_cnf(*conj, n);
  } else if (conj) {
    body = normalize(negate(conj->body));
    vars = conj->variables;
  }
  std::set<Rational> constants;
  collect_constants(clauses, body ? &*body : nullptr, constants);
  std::vector<Rational> domain = sample_domain(constants, samples);
  std::vector<Clause> ground;
  auto each = [&](const std::vector<std::string>& vs, auto&& visit) {
    std::vector<std::size_t> idx(vs.size(), 0);
    Substitution sigma;
    for (;;) {
      for (std::size_t i = 0; i < vs.size(); ++i) sigma[vs[i]] = Term::number(domain[idx[i]]);
      visit(sigma);
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == domain.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  };
  // Instances whose constraint is already false are true and skipped.
  for (const Clause& c : clauses) {
    std::vector<std::string> vs = variables(c);
    std::vector<std::size_t> ready(c.constraint.size(), 0);
    for (std::size_t k = 0; k < c.constraint.size(); ++k)
      for (const std::string& v : c.constraint[k].variables())
        ready[k] = std::max(ready[k], static_cast<std::size_t>(std::find(vs.begin(), vs.end(), v) - vs.begin()) + 1);
    Substitution sigma;
    std::function<void(std::size_t)> assign = [&](std::size_t i) {
      for (std::size_t k = 0; k < c.constraint.size(); ++k)
        if (ready[k] == i && !simplify_theory_atom(c.constraint[k], sigma).truth_value().value_or(true)) return;
      if (i == vs.size()) {
        ground.push_back(substitute(sigma, c));
        return;
      }
      for (const Rational& d : domain) {
        sigma[vs[i]] = Term::number(d);
        assign(i + 1);
      }
      sigma.erase(vs[i]);
    };
    assign(0);
  }
  std::vector<Formula> instances;
  if (body) each(vars, [&](const Substitution& s) { instances.push_back(substitute(s, *body)); });
  auto value = [](const Term& t) -> Rational {
    if (!t.is_number()) throw Error("direct oracle: non-numeric term " + to_string(t));
    return t.value();
  };
  detail::GroundCore core;
  return core.decide(ground, body ? &instances : nullptr, value, cap);
}

// ---------------------------------------------------------------------------
// Independent checks of the Datalog side

/// Naive fixpoint: every rule re-evaluated in full until nothing changes,
/// strata by iterated level relaxation.
inline std::set<DlAtom> naive_fixpoint(const DatalogProgram& p) {
  std::vector<const DlRule*> rules;
  for (const DlRule& r : p.rules) rules.push_back(&r);
  for (const DlRule& r : p.negation_rules) rules.push_back(&r);
  std::map<std::string, std::size_t> level;
  for (const DlRule* r : rules) level[r->head->predicate];
  const std::size_t limit = level.size() + 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (const DlRule* r : rules) {
      std::size_t& h = level[r->head->predicate];
      for (const DlAtom& a : r->body) {
        std::size_t l = level.count(a.predicate) ? level[a.predicate] : 0;
        if (l > h) {
          h = l;
          changed = true;
        }
      }
      for (const DlAtom& a : r->negated) {
        std::size_t l = (level.count(a.predicate) ? level[a.predicate] : 0) + 1;
        if (l > h) {
          h = l;
          changed = true;
        }
      }
      if (h > limit) throw NotStratified("naive: not stratified");
    }
  }
  std::set<DlAtom> facts(p.facts.begin(), p.facts.end());
  std::size_t top = 0;
  for (const auto& [name, l] : level) top = std::max(top, l);
  using Binding = std::map<std::uint32_t, std::string>;
  std::function<void(const DlRule&, std::size_t, Binding&, std::vector<DlAtom>&)> match =
      [&](const DlRule& r, std::size_t k, Binding& b, std::vector<DlAtom>& out) {
        auto ground = [&](const DlAtom& a) {
          DlAtom g{a.predicate, {}};
          for (const DlTerm& t : a.args) g.args.push_back(DlTerm::constant_of(t.is_var ? b.at(t.var) : t.constant));
          return g;
        };
        if (k == r.body.size()) {
          for (const DlAtom& n : r.negated)
            if (facts.count(ground(n))) return;
          out.push_back(ground(*r.head));
          return;
        }
        const DlAtom& a = r.body[k];
        for (const DlAtom& f : facts) {
          if (f.predicate != a.predicate || f.args.size() != a.args.size()) continue;
          Binding saved = b;
          bool ok = true;
          for (std::size_t i = 0; i < a.args.size() && ok; ++i) {
            const DlTerm& t = a.args[i];
            if (!t.is_var) {
              ok = t.constant == f.args[i].constant;
            } else if (b.count(t.var)) {
              ok = b[t.var] == f.args[i].constant;
            } else {
              b[t.var] = f.args[i].constant;
            }
          }
          if (ok) match(r, k + 1, b, out);
          b = std::move(saved);
        }
      };
  for (std::size_t l = 0; l <= top; ++l) {
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<DlAtom> derived;
      for (const DlRule* r : rules) {
        if (level[r->head->predicate] != l) continue;
        Binding b;
        match(*r, 0, b, derived);
      }
      for (DlAtom& a : derived)
        if (facts.insert(std::move(a)).second) changed = true;
    }
  }
  return facts;
}

/// Number of tuples where the emitted theory facts disagree with evaluating
/// the atom by substitution and simplification.
inline std::size_t tfacts_discrepancies(const std::vector<TheoryPredicate>& preds, const TestPointSet& tps,
                                        const std::vector<DlAtom>& facts) {
  std::set<DlAtom> emitted(facts.begin(), facts.end());
  std::size_t bad = 0;
  const std::size_t n = tps.size();
  std::set<std::string> names;
  for (const TheoryPredicate& t : preds) {
    names.insert(t.name);
    std::vector<std::uint32_t> tuple(t.arity, 0);
    for (;;) {
      Substitution sigma;
      for (std::size_t i = 0; i < t.arity; ++i)
        sigma["_" + std::to_string(i)] = Term::number(tps.points[tuple[i]].beta);
      auto truth = simplify_theory_atom(t.atom, sigma).truth_value();
      if (!truth) {
        ++bad;
      } else if (*truth != (emitted.count(point_atom(t.name, tuple, tps)) != 0)) {
        ++bad;
      }
      std::size_t k = 0;
      while (k < t.arity && ++tuple[k] == n) tuple[k++] = 0;
      if (k == t.arity) break;
    }
  }
  for (const DlAtom& f : facts)
    if (!names.count(f.predicate)) ++bad;
  return bad;
}

/// True when `true_atoms` (over test points) satisfies gnd_B(N) under β and,
/// with a conjecture, makes some ¬φρ true.
inline bool check_interpretation(const GroundAbstraction& g, const std::set<FreeAtom>& true_atoms) {
  auto value = [&](const Term& t) { return g.tps.value(t); };
  auto holds = [&](const FreeAtom& a) { return true_atoms.count(a) != 0; };
  for (const Clause& c : g.ground_clauses) {
    bool active = std::all_of(c.constraint.begin(), c.constraint.end(),
                              [&](const TheoryAtom& a) { return a.evaluate(value); });
    if (!active) continue;
    bool sat = std::any_of(c.literals.begin(), c.literals.end(),
                           [&](const Literal& l) { return holds(l.atom) == l.positive; });
    if (!sat) return false;
  }
  if (!g.has_conjecture) return true;
  return std::any_of(g.conjecture_instances.begin(), g.conjecture_instances.end(),
                     [&](const Formula& f) { return evaluate(f, holds, value); });
}

}  // namespace slrh
