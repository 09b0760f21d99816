// Grounding hammer (finite abstraction ψ) and Datalog hammer (tren, tfacts,
// grounded goal, Goal transformation, stratified goal check), plus exporters.
#pragma once

#include "slrh/datalog_program.hpp"
#include "slrh/testpoints.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace slrh {

// ---------------------------------------------------------------------------
// Theory renaming

struct TheoryPredicate {
  std::string name;
  /// The atom over the canonical variables _0, _1, ...
  TheoryAtom atom;
  std::size_t arity = 0;
};

struct TrenResult {
  std::vector<Clause> clauses;
  std::vector<TheoryPredicate> predicates;
};

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace detail {

class TheoryRenamer {
 public:
  /// Literal ¬T_A(x̄) for `a`, registering T_A on first sight.
  FreeAtom rename(const TheoryAtom& a) {
    std::vector<std::string> vars = a.variables();
    Substitution canon;
    for (std::size_t i = 0; i < vars.size(); ++i) canon[vars[i]] = Term::variable("_" + std::to_string(i));
    TheoryAtom c = simplify_theory_atom(a, canon);
    std::string key = to_string(c);
    auto it = by_key_.find(key);
    if (it == by_key_.end()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "t_%016llx", static_cast<unsigned long long>(fnv1a(key)));
      std::string name = buf;
      for (std::size_t k = 1; taken_.count(name); ++k) name = std::string(buf) + "_" + std::to_string(k);
      taken_.insert(name);
      it = by_key_.emplace(key, predicates_.size()).first;
      predicates_.push_back(TheoryPredicate{name, c, vars.size()});
    }
    FreeAtom out{predicates_[it->second].name, {}};
    for (const std::string& v : vars) out.args.push_back(Term::variable(v));
    return out;
  }

  std::vector<TheoryPredicate> take() { return std::move(predicates_); }

 private:
  std::map<std::string, std::size_t> by_key_;
  std::set<std::string> taken_;
  std::vector<TheoryPredicate> predicates_;
};

}  // namespace detail

/// Replaces every theory atom A by a negative literal ¬T_A(x̄). Atoms equal up
/// to variable renaming share T_A. Clauses with a FALSE constraint are dropped.
inline TrenResult tren(const std::vector<Clause>& n) {
  detail::TheoryRenamer renamer;
  TrenResult out;
  for (const Clause& c : n) {
    if (std::any_of(c.constraint.begin(), c.constraint.end(),
                    [](const TheoryAtom& a) { return a.shape() == AtomShape::False; }))
      continue;
    Clause r;
    for (const TheoryAtom& a : c.constraint) {
      if (a.shape() == AtomShape::True) continue;
      r.literals.push_back(Literal{false, renamer.rename(a)});
    }
    r.literals.insert(r.literals.end(), c.literals.begin(), c.literals.end());
    out.clauses.push_back(std::move(r));
  }
  out.predicates = renamer.take();
  return out;
}

inline std::string theory_comment(const TheoryPredicate& t) { return t.name + " : " + to_string(t.atom); }

// ---------------------------------------------------------------------------
// Theory facts

/// Calls `visit(tuple)` for every tuple of test-point ids on which `t` holds
/// under β.
template <typename Visit>
void for_each_true_tuple(const TheoryPredicate& t, const TestPointSet& tps, Visit&& visit) {
  const std::size_t n = tps.size();
  const TheoryAtom& a = t.atom;
  std::vector<std::uint32_t> tuple(t.arity, 0);
  if (a.shape() == AtomShape::Bound && t.arity == 1) {
    for (std::uint32_t p = 0; p < n; ++p) {
      if (compare(tps.points[p].beta, a.op(), a.bound_value())) {
        tuple[0] = p;
        visit(tuple);
      }
    }
    return;
  }
  if (a.shape() == AtomShape::Comparison && t.arity == 2) {
    const bool swapped = a.subject().name() != "_0";
    for (std::uint32_t p = 0; p < n; ++p)
      for (std::uint32_t q = 0; q < n; ++q) {
        const Rational& x = tps.points[swapped ? q : p].beta;
        const Rational& y = tps.points[swapped ? p : q].beta;
        if (compare(x, a.op(), y)) {
          tuple[0] = p;
          tuple[1] = q;
          visit(tuple);
        }
      }
    return;
  }
  double total = 1;
  for (std::size_t i = 0; i < t.arity; ++i) total *= static_cast<double>(n);
  if (total > 1e8) throw LimitExceeded("tfacts: too many tuples for " + theory_comment(t));
  if (n == 0 && t.arity > 0) return;
  for (;;) {
    bool holds = a.evaluate([&](const Term& term) -> Rational {
      return tps.points[tuple[std::stoul(term.name().substr(1))]].beta;
    });
    if (holds) visit(tuple);
    std::size_t k = 0;
    while (k < t.arity && ++tuple[k] == n) tuple[k++] = 0;
    if (k == t.arity) break;
  }
}

inline DlAtom point_atom(const std::string& predicate, const std::vector<std::uint32_t>& tuple,
                         const TestPointSet& tps) {
  DlAtom a{predicate, {}};
  for (std::uint32_t p : tuple) a.args.push_back(DlTerm::constant_of(tps.points[p].name));
  return a;
}

/// T_A(ā) for every tuple ā with Aβ true.
inline std::vector<DlAtom> tfacts(const std::vector<TheoryPredicate>& preds, const TestPointSet& tps) {
  std::vector<DlAtom> out;
  for (const TheoryPredicate& t : preds)
    for_each_true_tuple(t, tps, [&](const std::vector<std::uint32_t>& tuple) {
      out.push_back(point_atom(t.name, tuple, tps));
    });
  return out;
}

// ---------------------------------------------------------------------------
// Goal grounding

struct GroundGoalOptions {
  bool symmetry = false;
};

/// Ground instances P(ȳ)ρ of the goal atom for all ρ : ȳ → B whose guard
/// holds under β. With `symmetry`, only tuples that use the points of each
/// interval in first-use order are kept.
inline std::vector<DlAtom> ground_goal(const FreeAtom& goal, const std::vector<TheoryAtom>& guard,
                                       const TestPointSet& tps, GroundGoalOptions opt = {}) {
  std::vector<std::string> vars;
  for (const Term& t : goal.args)
    if (t.is_variable() && std::find(vars.begin(), vars.end(), t.name()) == vars.end()) vars.push_back(t.name());
  for (const TheoryAtom& a : guard)
    for (const std::string& v : a.variables())
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  const std::size_t n = tps.size();
  std::vector<DlAtom> out;
  if (n == 0 && !vars.empty()) return out;
  std::vector<std::uint32_t> rho(vars.size(), 0);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vars.size(); ++i) index[vars[i]] = i;
  auto canonical = [&]() {
    std::vector<std::size_t> used(tps.partition.size(), 0);
    for (std::uint32_t p : rho) {
      const TestPoint& tp = tps.points[p];
      if (tp.j <= used[tp.interval]) continue;
      if (tp.j != used[tp.interval] + 1) return false;
      used[tp.interval] = tp.j;
    }
    return true;
  };
  for (;;) {
    bool keep = !opt.symmetry || canonical();
    for (std::size_t g = 0; keep && g < guard.size(); ++g)
      keep = guard[g].evaluate([&](const Term& t) -> Rational {
        if (t.is_number()) return t.value();
        return tps.points[rho[index.at(t.name())]].beta;
      });
    if (keep) {
      DlAtom a{goal.predicate, {}};
      for (const Term& t : goal.args) a.args.push_back(DlTerm::constant_of(tps.points[rho[index.at(t.name())]].name));
      out.push_back(std::move(a));
    }
    std::size_t k = 0;
    while (k < rho.size() && ++rho[k] == n) rho[k++] = 0;
    if (k == rho.size()) break;
  }
  return out;
}

/// Symmetry reduction is sound only when every theory atom is a bound or a
/// truth value: points of one interval are then indistinguishable.
inline bool symmetry_safe(const std::vector<TheoryPredicate>& preds, const std::vector<TheoryAtom>& guard) {
  auto simple = [](const TheoryAtom& a) { return a.shape() == AtomShape::Bound || a.is_truth(); };
  return std::all_of(preds.begin(), preds.end(), [&](const TheoryPredicate& t) { return simple(t.atom); }) &&
         std::all_of(guard.begin(), guard.end(), simple);
}

/// Head-less rules get the nullary head `goal`, which becomes the query.
inline DatalogProgram goal_transform(DatalogProgram p) {
  for (DlRule& r : p.rules)
    if (!r.head) r.head = DlAtom{"goal", {}};
  for (DlRule& r : p.negation_rules)
    if (!r.head) r.head = DlAtom{"goal", {}};
  p.query = "goal";
  return p;
}

/// `expected(ā)` facts plus `missing :- expected(X̄), ~P(X̄).` and
/// `goal :- ~missing.`
inline void encode_stratified_goal(DatalogProgram& p, const std::vector<DlAtom>& expected,
                                   const std::string& predicate, std::size_t arity) {
  for (const DlAtom& a : expected) p.facts.push_back(DlAtom{"expected", a.args});
  DlRule missing;
  missing.head = DlAtom{"missing", {}};
  DlAtom e{"expected", {}}, q{predicate, {}};
  for (std::uint32_t i = 0; i < arity; ++i) {
    e.args.push_back(DlTerm::variable(i));
    q.args.push_back(DlTerm::variable(i));
  }
  missing.body.push_back(std::move(e));
  missing.negated.push_back(std::move(q));
  p.negation_rules.push_back(std::move(missing));
  DlRule goal;
  goal.head = DlAtom{"goal", {}};
  goal.negated.push_back(DlAtom{"missing", {}});
  p.negation_rules.push_back(std::move(goal));
  p.query = "goal";
}

/// A theory-free Horn clause as a rule: the positive literal is the head,
/// negative literals form the body. Head variables that no body atom binds
/// are guarded by `_dom`; `needs_dom` is set when that happens.
inline DlRule clause_to_rule(const Clause& c, bool& needs_dom) {
  std::map<std::string, std::uint32_t> vars;
  auto term = [&](const Term& t) {
    if (t.is_variable()) {
      auto [it, inserted] = vars.emplace(t.name(), static_cast<std::uint32_t>(vars.size()));
      return DlTerm::variable(it->second);
    }
    if (t.is_point()) return DlTerm::constant_of(t.name());
    throw UnsupportedFragment("numeric constant in a free atom after abstraction");
  };
  auto atom = [&](const FreeAtom& a) {
    DlAtom out{a.predicate, {}};
    for (const Term& t : a.args) out.args.push_back(term(t));
    return out;
  };
  DlRule r;
  std::set<std::uint32_t> bound;
  for (const Literal& l : c.literals) {
    if (l.positive) continue;
    r.body.push_back(atom(l.atom));
    for (const DlTerm& t : r.body.back().args)
      if (t.is_var) bound.insert(t.var);
  }
  for (const Literal& l : c.literals) {
    if (!l.positive) continue;
    if (r.head) throw UnsupportedFragment("clause is not Horn: " + to_string(c));
    r.head = atom(l.atom);
  }
  if (r.head) {
    std::set<std::uint32_t> added;
    for (const DlTerm& t : r.head->args) {
      if (!t.is_var || bound.count(t.var) || !added.insert(t.var).second) continue;
      r.body.push_back(DlAtom{"_dom", {t}});
      needs_dom = true;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Finite abstraction

struct GroundAbstraction {
  TestPointSet tps;
  /// gnd_B(N): clauses over test-point constants, theory atoms kept symbolic.
  std::vector<Clause> ground_clauses;
  /// idef(B).
  std::vector<TheoryAtom> interval_bounds;
  /// ¬φρ for every ρ; empty with `has_conjecture == false` (satisfiability).
  std::vector<Formula> conjecture_instances;
  bool has_conjecture = false;
};

/// The test point standing for the constant c, which must form a point
/// interval [c,c].
inline Term point_for_constant(const TestPointSet& tps, const Rational& c) {
  auto i = tps.interval_of(c);
  if (!i || !tps.partition[*i].is_point())
    throw Error("constant " + to_string(c) + " has no point interval");
  return tps.points[tps.by_interval[*i].front()].term();
}

namespace detail {

template <typename Visit>
void for_each_grounding(const std::vector<std::string>& vars, const TestPointSet& tps, Visit&& visit) {
  const std::size_t n = tps.size();
  if (n == 0 && !vars.empty()) return;
  std::vector<std::uint32_t> rho(vars.size(), 0);
  Substitution sigma;
  for (;;) {
    for (std::size_t i = 0; i < vars.size(); ++i) sigma[vars[i]] = tps.points[rho[i]].term();
    visit(sigma);
    std::size_t k = 0;
    while (k < rho.size() && ++rho[k] == n) rho[k++] = 0;
    if (k == rho.size()) break;
  }
}

/// Variables fixed by an equation `x = c` where [c,c] is an interval: only
/// the point of [c,c] can satisfy it, so other groundings are skipped.
inline std::pair<std::vector<std::string>, Substitution> split_pinned(const Clause& c, const TestPointSet& tps) {
  Substitution pinned;
  for (const TheoryAtom& a : c.constraint) {
    if (a.shape() != AtomShape::Bound || a.op() != CmpOp::Eq || !a.subject().is_variable()) continue;
    auto i = tps.interval_of(a.bound_value());
    if (i && tps.partition[*i].is_point()) pinned.emplace(a.subject().name(), point_for_constant(tps, a.bound_value()));
  }
  std::vector<std::string> free;
  for (const std::string& v : variables(c))
    if (!pinned.count(v)) free.push_back(v);
  return {std::move(free), std::move(pinned)};
}

inline Formula constants_to_points(const Formula& f, const TestPointSet& tps) {
  Formula out = f;
  if (f.kind == FormulaKind::Atom) {
    for (Term& t : out.literal.atom.args)
      if (t.is_number()) t = point_for_constant(tps, t.value());
  } else {
    for (Formula& c : out.children) c = constants_to_points(c, tps);
  }
  return out;
}

}  // namespace detail

/// ψ = gnd_B(N) ∪ idef(B) ∧ ⋁_ρ ¬φρ. Without a conjecture only the first two
/// parts are built.
inline GroundAbstraction grounding_hammer(const std::vector<Clause>& n, const std::optional<Conjecture>& conj,
                                          TestPointSet tps, std::uint64_t cap = 1'000'000) {
  GroundAbstraction g;
  g.tps = std::move(tps);
  long double planned = 0;
  auto plan = [&](std::size_t vars) { planned += std::pow(static_cast<long double>(g.tps.size()), vars); };
  for (const Clause& c : n) plan(detail::split_pinned(c, g.tps).first.size());
  if (conj) plan(conj->variables.size());
  if (planned > static_cast<long double>(cap))
    throw LimitExceeded("finite abstraction needs about " + std::to_string(static_cast<double>(planned)) +
                        " ground instances (limit " + std::to_string(cap) + ")");
  std::uint64_t count = 0;
  for (const Clause& c : n) {
    auto [free, pinned] = detail::split_pinned(c, g.tps);
    detail::for_each_grounding(free, g.tps, [&](Substitution sigma) {
      if (++count > cap) throw LimitExceeded("gnd_B(N): more than " + std::to_string(cap) + " ground clauses");
      sigma.insert(pinned.begin(), pinned.end());
      g.ground_clauses.push_back(substitute(sigma, c));
    });
  }
  g.interval_bounds = idef(g.tps);
  if (conj) {
    g.has_conjecture = true;
    const Formula neg = detail::constants_to_points(normalize(negate(conj->body)), g.tps);
    detail::for_each_grounding(conj->variables, g.tps, [&](const Substitution& sigma) {
      if (++count > cap) throw LimitExceeded("conjecture groundings exceed " + std::to_string(cap));
      g.conjecture_instances.push_back(substitute(sigma, neg));
    });
  }
  return g;
}

// ---------------------------------------------------------------------------
// Exporters

enum class ExportFormat { Datalog, Clauses, Smt };

inline std::string export_clauses(const GroundAbstraction& g) {
  std::string out = "; test points\n";
  for (const TestPoint& p : g.tps.points)
    out += "; " + p.name + " = " + g.tps.display(p.id) + " beta " + to_string(p.beta) + "\n";
  out += "; idef\n";
  for (const TheoryAtom& a : g.interval_bounds) out += "clause " + to_string(a.complemented()) + " || false.\n";
  out += "; gnd\n";
  for (const Clause& c : g.ground_clauses) out += print_clause(c) + "\n";
  if (g.has_conjecture) {
    out += "; negated conjecture instances (one must hold)\n";
    for (const Formula& f : g.conjecture_instances) out += "; " + to_string(f) + "\n";
  }
  return out;
}

namespace detail {

inline std::string smt_number(const Rational& r) {
  std::string n = boost::multiprecision::numerator(r < 0 ? Rational(-r) : r).str();
  std::string d = boost::multiprecision::denominator(r).str();
  std::string v = d == "1" ? n + ".0" : "(/ " + n + ".0 " + d + ".0)";
  return r < 0 ? "(- " + v + ")" : v;
}

inline std::string smt_linear(const LinearExpr& e) {
  std::vector<std::string> parts;
  for (const auto& [term, coeff] : e.terms) {
    std::string name = term.is_number() ? smt_number(term.value()) : term.name();
    parts.push_back(coeff == 1 ? name : "(* " + smt_number(coeff) + " " + name + ")");
  }
  if (e.constant != 0 || parts.empty()) parts.push_back(smt_number(e.constant));
  if (parts.size() == 1) return parts.front();
  std::string out = "(+";
  for (const std::string& s : parts) out += " " + s;
  return out + ")";
}

inline std::string smt_atom(const TheoryAtom& a) {
  if (a.shape() == AtomShape::True) return "true";
  if (a.shape() == AtomShape::False) return "false";
  std::string l = smt_linear(a.lhs()), r = smt_linear(a.rhs());
  switch (a.op()) {
    case CmpOp::Ne: return "(not (= " + l + " " + r + "))";
    default: return std::string("(") + token(a.op()) + " " + l + " " + r + ")";
  }
}

inline std::string smt_free(const FreeAtom& a) {
  if (a.args.empty()) return a.predicate;
  std::string out = "(" + a.predicate;
  for (const Term& t : a.args) out += " " + t.name();
  return out + ")";
}

inline std::string smt_formula(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Atom:
      return f.literal.positive ? smt_free(f.literal.atom) : "(not " + smt_free(f.literal.atom) + ")";
    case FormulaKind::Theory: {
      if (f.theory.size() == 1) return smt_atom(f.theory.front());
      std::string out = "(and";
      for (const TheoryAtom& a : f.theory) out += " " + smt_atom(a);
      return out + ")";
    }
    default: {
      if (f.children.empty()) return f.kind == FormulaKind::And ? "true" : "false";
      std::string out = f.kind == FormulaKind::And ? "(and" : "(or";
      for (const Formula& c : f.children) out += " " + smt_formula(c);
      return out + ")";
    }
  }
}

}  // namespace detail

/// SMT-LIB 2 (QF_UFLRA) rendering of ψ.
inline std::string export_smt(const GroundAbstraction& g) {
  std::string out = "(set-logic QF_UFLRA)\n";
  for (const TestPoint& p : g.tps.points) out += "(declare-const " + p.name + " Real)\n";
  std::map<std::string, std::size_t> preds;
  auto note = [&](const FreeAtom& a) { preds.emplace(a.predicate, a.args.size()); };
  for (const Clause& c : g.ground_clauses)
    for (const Literal& l : c.literals) note(l.atom);
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    if (f.kind == FormulaKind::Atom) note(f.literal.atom);
    for (const Formula& c : f.children) walk(c);
  };
  for (const Formula& f : g.conjecture_instances) walk(f);
  for (const auto& [name, arity] : preds) {
    out += "(declare-fun " + name + " (";
    for (std::size_t i = 0; i < arity; ++i) out += i ? " Real" : "Real";
    out += ") Bool)\n";
  }
  out += "; idef\n";
  for (const TheoryAtom& a : g.interval_bounds) out += "(assert " + detail::smt_atom(a) + ")\n";
  out += "; gnd\n";
  for (const Clause& c : g.ground_clauses) {
    std::vector<std::string> parts;
    for (const TheoryAtom& a : c.constraint) parts.push_back(detail::smt_atom(a.complemented()));
    for (const Literal& l : c.literals)
      parts.push_back(l.positive ? detail::smt_free(l.atom) : "(not " + detail::smt_free(l.atom) + ")");
    if (parts.empty()) {
      out += "(assert false)\n";
    } else if (parts.size() == 1) {
      out += "(assert " + parts.front() + ")\n";
    } else {
      out += "(assert (or";
      for (const std::string& s : parts) out += " " + s;
      out += "))\n";
    }
  }
  if (g.has_conjecture) {
    out += "; negated conjecture\n(assert (or";
    for (const Formula& f : g.conjecture_instances) out += " " + detail::smt_formula(f);
    out += "))\n";
  }
  out += "(check-sat)\n";
  return out;
}

}  // namespace slrh
