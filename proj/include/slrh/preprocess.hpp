// Positively grounded predicates, elim, conjecture flattening and the
// reductions of existential conjectures and satisfiability checks.
#pragma once

#include "slrh/frontend.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace slrh {

struct PositivelyGroundedSet {
  std::set<std::string> predicates;
  std::map<std::string, std::set<std::vector<Rational>>> facts;

  bool contains(const std::string& p) const { return predicates.count(p) != 0; }
};

/// Maximal S: every positive occurrence of P ∈ S is a (abstracted) ground unit
/// fact. Facts are collected per predicate.
inline PositivelyGroundedSet find_positively_grounded(const std::vector<Clause>& n) {
  std::set<std::string> seen, excluded;
  PositivelyGroundedSet s;
  for (const Clause& c : n) {
    auto tuple = fact_tuple(c);
    for (const Literal& l : c.literals) {
      seen.insert(l.atom.predicate);
      if (!l.positive) continue;
      if (tuple) {
        s.facts[l.atom.predicate].insert(*tuple);
      } else {
        excluded.insert(l.atom.predicate);
      }
    }
  }
  for (const std::string& p : seen)
    if (!excluded.count(p)) s.predicates.insert(p);
  for (auto it = s.facts.begin(); it != s.facts.end();) {
    if (!s.predicates.count(it->first)) {
      it = s.facts.erase(it);
    } else {
      ++it;
    }
  }
  return s;
}

inline Clause ground_fact_clause(const std::string& predicate, const std::vector<Rational>& tuple) {
  FreeAtom a{predicate, {}};
  for (const Rational& v : tuple) a.args.push_back(Term::number(v));
  return Clause{{}, {Literal{true, std::move(a)}}};
}

struct ElimStats {
  std::uint64_t resolution_steps = 0;
  /// Complete instantiations (no negative S-literal left), before dropping
  /// those with an unsatisfiable constraint.
  std::uint64_t instantiations = 0;
};

/// elim(S, N): resolves every negative occurrence of P ∈ S against the P
/// facts, drops the originals and keeps the facts. Results are re-abstracted;
/// clauses whose bounds are unsatisfiable are pruned as soon as that shows.
inline std::vector<Clause> elim(const PositivelyGroundedSet& s, const std::vector<Clause>& n,
                                ElimStats* stats = nullptr, std::uint64_t cap = 10'000'000) {
  ElimStats local;
  ElimStats& st = stats ? *stats : local;
  std::vector<Clause> out;
  std::set<std::string> emitted;
  auto emit = [&](Clause c) {
    c = abstract_clause(c);
    std::string key = to_string(c);
    if (emitted.insert(key).second) out.push_back(std::move(c));
  };
  for (const Clause& c : n) {
    std::vector<std::pair<Clause, bool>> pending{{c, false}};
    while (!pending.empty()) {
      auto [d, resolved] = std::move(pending.back());
      pending.pop_back();
      std::optional<std::size_t> pick;
      for (std::size_t i = 0; i < d.literals.size(); ++i) {
        if (!d.literals[i].positive && s.contains(d.literals[i].atom.predicate)) {
          pick = i;
          break;
        }
      }
      if (!pick) {
        if (resolved) ++st.instantiations;
        if (!bounds_unsatisfiable(d.constraint)) emit(std::move(d));
        continue;
      }
      auto facts = s.facts.find(d.literals[*pick].atom.predicate);
      if (facts == s.facts.end()) continue;
      for (const auto& tuple : facts->second) {
        if (++st.resolution_steps > cap)
          throw LimitExceeded("elim: more than " + std::to_string(cap) + " resolution steps");
        Clause fact = ground_fact_clause(facts->first, tuple);
        if (!mgu(d.literals[*pick].atom, fact.literals.front().atom)) continue;
        Clause r = hierarchic_resolve(d, *pick, fact, 0);
        if (bounds_unsatisfiable(r.constraint)) {
          bool partial = false;
          for (const Literal& l : r.literals)
            if (!l.positive && s.contains(l.atom.predicate)) partial = true;
          if (!partial) ++st.instantiations;
          continue;
        }
        pending.emplace_back(std::move(r), true);
      }
    }
  }
  return out;
}

/// `rounds` passes of S-detection followed by elim.
inline std::vector<Clause> elim_rounds(std::vector<Clause> n, unsigned rounds, ElimStats* stats = nullptr) {
  for (unsigned r = 0; r < rounds; ++r) {
    PositivelyGroundedSet s = find_positively_grounded(n);
    if (s.predicates.empty()) break;
    n = elim(s, n, stats);
  }
  return n;
}

// ---------------------------------------------------------------------------
// Flattening

struct FlattenResult {
  FreeAtom goal;
  std::vector<Clause> rules;
  std::vector<std::string> fresh_predicates;
};

namespace detail {

class Flattener {
 public:
  explicit Flattener(std::size_t first) : counter_(first) {}

  FlattenResult run(const Formula& body) {
    FlattenResult r;
    r.goal = pflat(body);
    r.rules = std::move(rules_);
    r.fresh_predicates = std::move(fresh_);
    return r;
  }

  std::size_t next() const { return counter_; }

 private:
  FreeAtom fresh(const Formula& f) {
    std::string name = "_flat" + std::to_string(counter_++);
    fresh_.push_back(name);
    FreeAtom a{name, {}};
    for (const std::string& v : variables(f)) a.args.push_back(Term::variable(v));
    return a;
  }

  static bool plain(const FreeAtom& a) {
    for (const Term& t : a.args)
      if (!t.is_variable()) return false;
    return true;
  }

  // Adds `child` to the body of a rule under construction.
  void add_to_body(Clause& rule, const Formula& child) {
    if (child.kind == FormulaKind::Theory) {
      rule.constraint.insert(rule.constraint.end(), child.theory.begin(), child.theory.end());
    } else if (child.kind == FormulaKind::Atom) {
      rule.literals.push_back(Literal{false, child.literal.atom});
    } else if (!child.is_true()) {
      rule.literals.push_back(Literal{false, pflat(child)});
    }
  }

  FreeAtom pflat(const Formula& f) {
    switch (f.kind) {
      case FormulaKind::Atom: {
        if (!f.literal.positive) throw NonPositiveConjecture("negative literal " + to_string(f.literal));
        if (plain(f.literal.atom)) return f.literal.atom;
        FreeAtom head = fresh(f);
        Clause rule;
        rule.literals.push_back(Literal{false, f.literal.atom});
        rule.literals.push_back(Literal{true, head});
        rules_.push_back(abstract_clause(rule));
        return head;
      }
      case FormulaKind::Theory: {
        FreeAtom head = fresh(f);
        rules_.push_back(Clause{f.theory, {Literal{true, head}}});
        return head;
      }
      case FormulaKind::And: {
        FreeAtom head = fresh(f);
        Clause rule;
        for (const Formula& c : f.children) add_to_body(rule, c);
        rule.literals.push_back(Literal{true, head});
        rules_.push_back(abstract_clause(rule));
        return head;
      }
      case FormulaKind::Or: {
        FreeAtom head = fresh(f);
        for (const Formula& c : f.children) {
          Clause rule;
          add_to_body(rule, c);
          rule.literals.push_back(Literal{true, head});
          rules_.push_back(abstract_clause(rule));
        }
        return head;
      }
    }
    throw Error("unreachable");
  }

  std::size_t counter_;
  std::vector<Clause> rules_;
  std::vector<std::string> fresh_;
};

}  // namespace detail

/// pflat / rflat of a positive body. A body that already is a single atom over
/// distinct-or-repeated variables is its own goal.
inline FlattenResult flatten_conjecture(const Conjecture& c, std::size_t first_fresh = 0) {
  if (!is_positive(c.body)) throw NonPositiveConjecture("conjecture is not positive");
  return detail::Flattener(first_fresh).run(normalize(c.body));
}

/// `Λ -> A(x̄)`: a guarded universal goal read off without flattening.
struct GuardedGoal {
  FreeAtom atom;
  std::vector<TheoryAtom> guard;
};

/// Recognizes bodies `¬Λ ∨ A(x̄)` (single-atom theory disjuncts plus one
/// positive free atom over variables) where vars(Λ) ⊆ vars(A).
inline std::optional<GuardedGoal> split_guarded_goal(const Formula& body) {
  Formula f = normalize(body);
  std::vector<const Formula*> parts;
  if (f.kind == FormulaKind::Or) {
    for (const Formula& c : f.children) parts.push_back(&c);
  } else {
    parts.push_back(&f);
  }
  std::optional<GuardedGoal> g;
  std::vector<TheoryAtom> guard;
  for (const Formula* p : parts) {
    if (p->kind == FormulaKind::Theory && p->theory.size() == 1) {
      guard.push_back(p->theory.front().complemented());
    } else if (p->kind == FormulaKind::Atom && p->literal.positive && !g) {
      for (const Term& t : p->literal.atom.args)
        if (!t.is_variable()) return std::nullopt;
      g = GuardedGoal{p->literal.atom, {}};
    } else {
      return std::nullopt;
    }
  }
  if (!g) return std::nullopt;
  std::set<std::string> atom_vars;
  for (const Term& t : g->atom.args) atom_vars.insert(t.name());
  for (const TheoryAtom& a : guard)
    for (const std::string& v : a.variables())
      if (!atom_vars.count(v)) return std::nullopt;
  g->guard = std::move(guard);
  return g;
}

/// The ⊥ conjecture: entailed exactly when N is unsatisfiable.
inline Conjecture satisfiability_as_conjecture(const std::vector<Clause>& = {}) {
  return Conjecture{Quantifier::Universal, {}, Formula::falsum()};
}

/// N ∪ rflat(φ) ∪ {pflat(φ) → ⊥} for a positive existential conjecture; the
/// conjecture is entailed iff the result is unsatisfiable.
inline std::vector<Clause> reduce_existential(const Conjecture& c, const std::vector<Clause>& n) {
  if (c.quantifier != Quantifier::Existential) throw Error("reduce_existential: not existential");
  FlattenResult fr = flatten_conjecture(c);
  std::vector<Clause> out = n;
  out.insert(out.end(), fr.rules.begin(), fr.rules.end());
  out.push_back(abstract_clause(Clause{{}, {Literal{false, fr.goal}}}));
  return out;
}

/// CNF of a formula as clauses; theory leaves are complemented into Λ.
inline std::vector<Clause> cnf_clauses(const Formula& f) {
  using Leaves = std::vector<Formula>;
  std::function<std::vector<Leaves>(const Formula&)> go = [&](const Formula& g) -> std::vector<Leaves> {
    switch (g.kind) {
      case FormulaKind::Atom: return {{g}};
      case FormulaKind::Theory: {
        std::vector<Leaves> out;
        for (const TheoryAtom& a : g.theory) out.push_back({Formula::atom(a)});
        return out;
      }
      case FormulaKind::And: {
        std::vector<Leaves> out;
        for (const Formula& c : g.children)
          for (Leaves& l : go(c)) out.push_back(std::move(l));
        return out;
      }
      case FormulaKind::Or: {
        std::vector<Leaves> acc{{}};
        for (const Formula& c : g.children) {
          std::vector<Leaves> part = go(c);
          std::vector<Leaves> next;
          for (const Leaves& a : acc)
            for (const Leaves& b : part) {
              Leaves m = a;
              m.insert(m.end(), b.begin(), b.end());
              next.push_back(std::move(m));
            }
          acc = std::move(next);
        }
        return acc;
      }
    }
    return {};
  };
  std::vector<Clause> out;
  for (const Leaves& leaves : go(f)) {
    Clause c;
    for (const Formula& leaf : leaves) {
      if (leaf.kind == FormulaKind::Theory) {
        c.constraint.push_back(leaf.theory.front().complemented());
      } else {
        c.literals.push_back(leaf.literal);
      }
    }
    out.push_back(abstract_clause(c));
  }
  return out;
}

/// N ∪ CNF(∀ȳ.¬φ), for arbitrary (not necessarily positive) existential
/// conjectures; entailed iff unsatisfiable.
inline std::vector<Clause> reduce_existential_cnf(const Conjecture& c, const std::vector<Clause>& n) {
  std::vector<Clause> out = n;
  for (Clause& k : cnf_clauses(normalize(negate(c.body)))) out.push_back(std::move(k));
  return out;
}

}  // namespace slrh
