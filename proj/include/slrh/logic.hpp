// Terms, theory atoms, free atoms and constrained clauses `Λ || C`, together
// with the single-step operations the rest of the pipeline is built from:
// abstraction, theory-atom simplification, unification and hierarchic
// resolution.
//
// All arithmetic is exact. Theory atoms are normalized on construction so that
// structurally equal atoms compare equal and endpoint extraction is syntactic.
#pragma once

#include "slrh/error.hpp"
#include "slrh/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace slrh {

enum class TermKind : std::uint8_t { Variable, Number, Point };

/// A variable, an exact numeric constant, or a named test-point constant.
class Term {
 public:
  Term() = default;

  static Term variable(std::string name) {
    Term t;
    t.kind_ = TermKind::Variable;
    t.name_ = std::move(name);
    return t;
  }
  static Term number(Rational value) {
    Term t;
    t.kind_ = TermKind::Number;
    t.value_ = std::move(value);
    return t;
  }
  static Term point(std::uint32_t id, std::string name) {
    Term t;
    t.kind_ = TermKind::Point;
    t.point_ = id;
    t.name_ = std::move(name);
    return t;
  }

  TermKind kind() const noexcept { return kind_; }
  bool is_variable() const noexcept { return kind_ == TermKind::Variable; }
  bool is_number() const noexcept { return kind_ == TermKind::Number; }
  bool is_point() const noexcept { return kind_ == TermKind::Point; }

  const std::string& name() const noexcept { return name_; }
  const Rational& value() const noexcept { return value_; }
  std::uint32_t point_id() const noexcept { return point_; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case TermKind::Variable: return a.name_ == b.name_;
      case TermKind::Number: return a.value_ == b.value_;
      case TermKind::Point: return a.point_ == b.point_;
    }
    return false;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    switch (a.kind_) {
      case TermKind::Variable: return a.name_ < b.name_;
      case TermKind::Number: return a.value_ < b.value_;
      case TermKind::Point: return a.point_ < b.point_;
    }
    return false;
  }

 private:
  TermKind kind_ = TermKind::Variable;
  std::string name_;
  Rational value_;
  std::uint32_t point_ = 0;
};

inline std::string to_string(const Term& t) {
  return t.is_number() ? to_string(t.value()) : t.name();
}

using Substitution = std::map<std::string, Term>;

inline Term substitute(const Substitution& sigma, const Term& t) {
  if (!t.is_variable()) return t;
  auto it = sigma.find(t.name());
  return it == sigma.end() ? t : it->second;
}

// ---------------------------------------------------------------------------
// Comparison operators

enum class CmpOp : std::uint8_t { Le, Lt, Ne, Eq, Gt, Ge };

/// Logical negation: ¬(x ≤ c) is x > c.
constexpr CmpOp complement(CmpOp op) {
  switch (op) {
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
  }
  return op;
}

/// Operator after swapping both sides: a ≤ b is b ≥ a.
constexpr CmpOp mirror(CmpOp op) {
  switch (op) {
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Ge: return CmpOp::Le;
    default: return op;
  }
}

constexpr const char* token(CmpOp op) {
  switch (op) {
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Ne: return "!=";
    case CmpOp::Eq: return "=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

inline bool compare(const Rational& a, CmpOp op, const Rational& b) {
  switch (op) {
    case CmpOp::Le: return a <= b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Eq: return a == b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Linear expressions

/// Sum of rational multiples of variables / test points plus a constant.
/// Terms are kept sorted with nonzero coefficients; Number terms never appear
/// in `terms` (they are folded into `constant`).
struct LinearExpr {
  std::vector<std::pair<Term, Rational>> terms;
  Rational constant;

  static LinearExpr of(const Term& t) {
    LinearExpr e;
    if (t.is_number()) {
      e.constant = t.value();
    } else {
      e.terms.emplace_back(t, Rational(1));
    }
    return e;
  }
  static LinearExpr of(Rational c) {
    LinearExpr e;
    e.constant = std::move(c);
    return e;
  }

  bool is_constant() const { return terms.empty(); }

  LinearExpr& add(const LinearExpr& other, const Rational& factor = Rational(1)) {
    for (const auto& [term, coeff] : other.terms) add_term(term, coeff * factor);
    constant += other.constant * factor;
    return *this;
  }

  void add_term(const Term& t, const Rational& coeff) {
    if (t.is_number()) {
      constant += t.value() * coeff;
      return;
    }
    auto it = std::lower_bound(terms.begin(), terms.end(), t,
                               [](const auto& entry, const Term& key) { return entry.first < key; });
    if (it != terms.end() && it->first == t) {
      it->second += coeff;
      if (it->second == 0) terms.erase(it);
    } else if (coeff != 0) {
      terms.insert(it, {t, coeff});
    }
  }

  LinearExpr substituted(const Substitution& sigma) const {
    LinearExpr out = LinearExpr::of(constant);
    for (const auto& [term, coeff] : terms) out.add_term(substitute(sigma, term), coeff);
    return out;
  }

  friend bool operator==(const LinearExpr& a, const LinearExpr& b) {
    return a.constant == b.constant && a.terms == b.terms;
  }
};

inline std::string to_string(const LinearExpr& e) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [term, coeff] : e.terms) {
    Rational mag = coeff < 0 ? Rational(-coeff) : coeff;
    if (first) {
      if (coeff < 0) os << "-";
    } else {
      os << (coeff < 0 ? " - " : " + ");
    }
    if (mag != 1) os << to_string(mag) << "*";
    os << to_string(term);
    first = false;
  }
  if (first) {
    os << to_string(e.constant);
  } else if (e.constant != 0) {
    Rational mag = e.constant < 0 ? Rational(-e.constant) : e.constant;
    os << (e.constant < 0 ? " - " : " + ") << to_string(mag);
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Theory atoms

enum class AtomShape : std::uint8_t { True, False, Bound, Comparison, Linear };

/// Arithmetic atom `lhs op rhs`, normalized on construction:
///  - no symbols: the truth values TRUE / FALSE,
///  - one symbol: a bound `x op c`,
///  - `x op y` with x < y in term order: a variable comparison,
///  - anything else: `Σ k_i x_i op c` with coprime integer coefficients and a
///    positive leading coefficient.
class TheoryAtom {
 public:
  TheoryAtom() : TheoryAtom(LinearExpr{}, CmpOp::Eq, LinearExpr{}) {}

  TheoryAtom(const LinearExpr& lhs, CmpOp op, const LinearExpr& rhs) { normalize(lhs, op, rhs); }

  static TheoryAtom truth(bool value) {
    return TheoryAtom(LinearExpr{}, value ? CmpOp::Eq : CmpOp::Ne, LinearExpr{});
  }
  static TheoryAtom bound(const Term& x, CmpOp op, const Rational& c) {
    return TheoryAtom(LinearExpr::of(x), op, LinearExpr::of(c));
  }
  static TheoryAtom relation(const Term& x, CmpOp op, const Term& y) {
    return TheoryAtom(LinearExpr::of(x), op, LinearExpr::of(y));
  }

  const LinearExpr& lhs() const noexcept { return lhs_; }
  const LinearExpr& rhs() const noexcept { return rhs_; }
  CmpOp op() const noexcept { return op_; }
  AtomShape shape() const noexcept { return shape_; }

  bool is_truth() const noexcept { return shape_ == AtomShape::True || shape_ == AtomShape::False; }
  std::optional<bool> truth_value() const {
    if (shape_ == AtomShape::True) return true;
    if (shape_ == AtomShape::False) return false;
    return std::nullopt;
  }

  /// Symbol constrained by a bound, or the left symbol of a comparison.
  const Term& subject() const { return lhs_.terms.front().first; }
  /// Right-hand constant of a bound.
  const Rational& bound_value() const { return rhs_.constant; }
  /// Right symbol of a comparison.
  const Term& other() const { return rhs_.terms.front().first; }

  /// Distinct symbols in order of appearance.
  std::vector<Term> symbols() const {
    std::vector<Term> out;
    auto push = [&](const Term& t) {
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    };
    for (const auto& entry : lhs_.terms) push(entry.first);
    for (const auto& entry : rhs_.terms) push(entry.first);
    return out;
  }

  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    for (const Term& t : symbols())
      if (t.is_variable()) out.push_back(t.name());
    return out;
  }

  TheoryAtom complemented() const { return TheoryAtom(lhs_, complement(op_), rhs_); }

  TheoryAtom substituted(const Substitution& sigma) const {
    return TheoryAtom(lhs_.substituted(sigma), op_, rhs_.substituted(sigma));
  }

  /// Exact evaluation with every symbol valued by `value_of`.
  template <typename ValueOf>
  bool evaluate(ValueOf&& value_of) const {
    Rational left = lhs_.constant;
    for (const auto& [term, coeff] : lhs_.terms) left += coeff * value_of(term);
    Rational right = rhs_.constant;
    for (const auto& [term, coeff] : rhs_.terms) right += coeff * value_of(term);
    return compare(left, op_, right);
  }

  friend bool operator==(const TheoryAtom& a, const TheoryAtom& b) {
    return a.op_ == b.op_ && a.lhs_ == b.lhs_ && a.rhs_ == b.rhs_;
  }
  friend bool operator!=(const TheoryAtom& a, const TheoryAtom& b) { return !(a == b); }

 private:
  void normalize(const LinearExpr& lhs, CmpOp op, const LinearExpr& rhs) {
    LinearExpr diff = lhs;
    diff.add(rhs, Rational(-1));
    lhs_ = LinearExpr{};
    rhs_ = LinearExpr{};
    if (diff.terms.empty()) {
      op_ = compare(diff.constant, op, Rational(0)) ? CmpOp::Eq : CmpOp::Ne;
      shape_ = op_ == CmpOp::Eq ? AtomShape::True : AtomShape::False;
      return;
    }
    if (diff.terms.size() == 1) {
      const auto& [term, coeff] = diff.terms.front();
      op_ = coeff > 0 ? op : mirror(op);
      lhs_.terms.emplace_back(term, Rational(1));
      rhs_.constant = -diff.constant / coeff;
      shape_ = AtomShape::Bound;
      return;
    }
    // Scale to coprime integer coefficients with a positive leading term.
    Integer lcm_den = 1;
    auto fold_den = [&](const Rational& r) {
      lcm_den = boost::multiprecision::lcm(lcm_den, boost::multiprecision::denominator(r));
    };
    for (const auto& entry : diff.terms) fold_den(entry.second);
    fold_den(diff.constant);
    Integer gcd_num = 0;
    auto fold_num = [&](const Rational& r) {
      Integer n = boost::multiprecision::numerator(r * lcm_den);
      gcd_num = boost::multiprecision::gcd(gcd_num, n < 0 ? Integer(-n) : n);
    };
    for (const auto& entry : diff.terms) fold_num(entry.second);
    fold_num(diff.constant);
    Rational scale = Rational(lcm_den) / Rational(gcd_num);
    if (diff.terms.front().second < 0) {
      scale = -scale;
      op = mirror(op);
    }
    op_ = op;
    const bool comparison = diff.terms.size() == 2 && diff.constant == 0 &&
                            diff.terms[0].second * scale == 1 && diff.terms[1].second * scale == -1;
    if (comparison) {
      lhs_.terms.emplace_back(diff.terms[0].first, Rational(1));
      rhs_.terms.emplace_back(diff.terms[1].first, Rational(1));
      shape_ = AtomShape::Comparison;
      return;
    }
    for (const auto& [term, coeff] : diff.terms) lhs_.terms.emplace_back(term, coeff * scale);
    rhs_.constant = -diff.constant * scale;
    shape_ = AtomShape::Linear;
  }

  LinearExpr lhs_;
  CmpOp op_ = CmpOp::Eq;
  LinearExpr rhs_;
  AtomShape shape_ = AtomShape::True;
};

inline std::string to_string(const TheoryAtom& a) {
  if (a.shape() == AtomShape::True) return "true";
  if (a.shape() == AtomShape::False) return "false";
  return to_string(a.lhs()) + " " + token(a.op()) + " " + to_string(a.rhs());
}

/// Applies `partial` and re-normalizes. The result is TRUE, FALSE, a bound
/// `x ◁ c`, a variable comparison `x ◁ y`, or (when the input was not simple
/// enough) a residual linear atom, which callers reject as out of fragment.
inline TheoryAtom simplify_theory_atom(const TheoryAtom& atom, const Substitution& partial) {
  return atom.substituted(partial);
}

// ---------------------------------------------------------------------------
// Free atoms, literals, clauses

struct FreeAtom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const noexcept { return args.size(); }

  friend bool operator==(const FreeAtom& a, const FreeAtom& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
  friend bool operator!=(const FreeAtom& a, const FreeAtom& b) { return !(a == b); }
  friend bool operator<(const FreeAtom& a, const FreeAtom& b) {
    if (a.predicate != b.predicate) return a.predicate < b.predicate;
    return a.args < b.args;
  }
};

struct Literal {
  bool positive = true;
  FreeAtom atom;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.positive == b.positive && a.atom == b.atom;
  }
  friend bool operator!=(const Literal& a, const Literal& b) { return !(a == b); }
};

/// `Λ || C`: the conjunction Λ of theory atoms implies the disjunction C.
struct Clause {
  std::vector<TheoryAtom> constraint;
  std::vector<Literal> literals;

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.constraint == b.constraint && a.literals == b.literals;
  }
  friend bool operator!=(const Clause& a, const Clause& b) { return !(a == b); }
};

inline std::string to_string(const FreeAtom& a) {
  std::string out = a.predicate;
  if (!a.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ", ";
      out += to_string(a.args[i]);
    }
    out += ")";
  }
  return out;
}

inline std::string to_string(const Literal& l) { return (l.positive ? "" : "!") + to_string(l.atom); }

/// `Λ || L1 \/ L2` in the input syntax (without keyword and terminator).
inline std::string to_string(const Clause& c) {
  std::string out;
  for (std::size_t i = 0; i < c.constraint.size(); ++i) {
    if (i) out += ", ";
    out += to_string(c.constraint[i]);
  }
  if (!c.constraint.empty()) out += " || ";
  if (c.literals.empty()) {
    out += "false";
  } else {
    for (std::size_t i = 0; i < c.literals.size(); ++i) {
      if (i) out += " \\/ ";
      out += to_string(c.literals[i]);
    }
  }
  return out;
}

inline FreeAtom substitute(const Substitution& sigma, const FreeAtom& a) {
  FreeAtom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(substitute(sigma, t));
  return out;
}

inline Literal substitute(const Substitution& sigma, const Literal& l) { return {l.positive, substitute(sigma, l.atom)}; }

/// Applies `sigma` and simplifies every theory atom; TRUE atoms are dropped.
inline Clause substitute(const Substitution& sigma, const Clause& c) {
  Clause out;
  for (const TheoryAtom& a : c.constraint) {
    TheoryAtom s = simplify_theory_atom(a, sigma);
    if (s.shape() != AtomShape::True) out.constraint.push_back(std::move(s));
  }
  for (const Literal& l : c.literals) out.literals.push_back(substitute(sigma, l));
  return out;
}

/// Variables of a clause in order of first occurrence (free part first).
inline std::vector<std::string> variables(const Clause& c) {
  std::vector<std::string> out;
  auto push = [&](const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  for (const Literal& l : c.literals)
    for (const Term& t : l.atom.args)
      if (t.is_variable()) push(t.name());
  for (const TheoryAtom& a : c.constraint)
    for (const std::string& v : a.variables()) push(v);
  return out;
}

inline std::size_t positive_count(const Clause& c) {
  return static_cast<std::size_t>(
      std::count_if(c.literals.begin(), c.literals.end(), [](const Literal& l) { return l.positive; }));
}

inline bool is_horn(const Clause& c) { return positive_count(c) <= 1; }

inline bool is_abstracted(const Clause& c) {
  for (const Literal& l : c.literals)
    for (const Term& t : l.atom.args)
      if (!t.is_variable()) return false;
  return true;
}

/// The ground tuple of an abstracted fact `x1 = c1, ..., xn = cn || P(x1, ..., xn)`,
/// or nothing when `c` is not one.
inline std::optional<std::vector<Rational>> fact_tuple(const Clause& c) {
  if (c.literals.size() != 1 || !c.literals.front().positive) return std::nullopt;
  std::map<std::string, Rational> value;
  for (const TheoryAtom& a : c.constraint) {
    if (a.shape() != AtomShape::Bound || a.op() != CmpOp::Eq || !a.subject().is_variable())
      return std::nullopt;
    auto [it, inserted] = value.emplace(a.subject().name(), a.bound_value());
    if (!inserted && it->second != a.bound_value()) return std::nullopt;
  }
  std::vector<Rational> tuple;
  std::set<std::string> used;
  for (const Term& t : c.literals.front().atom.args) {
    if (t.is_number()) {
      tuple.push_back(t.value());
      continue;
    }
    if (!t.is_variable()) return std::nullopt;
    auto it = value.find(t.name());
    if (it == value.end()) return std::nullopt;
    tuple.push_back(it->second);
    used.insert(t.name());
  }
  if (used.size() != value.size()) return std::nullopt;
  return tuple;
}

inline std::string fresh_variable(const std::set<std::string>& taken, std::size_t& counter) {
  for (;;) {
    std::string name = "_v" + std::to_string(counter++);
    if (!taken.count(name)) return name;
  }
}

/// Replaces every non-variable argument t of a free atom by a fresh variable x
/// and adds the defining equation x = t to the constraint.
inline Clause abstract_clause(const Clause& c) {
  if (is_abstracted(c)) return c;
  std::set<std::string> taken;
  for (const std::string& v : variables(c)) taken.insert(v);
  std::size_t counter = 0;
  Clause out;
  out.constraint = c.constraint;
  for (const Literal& l : c.literals) {
    Literal nl{l.positive, {l.atom.predicate, {}}};
    for (const Term& t : l.atom.args) {
      if (t.is_variable()) {
        nl.atom.args.push_back(t);
        continue;
      }
      std::string x = fresh_variable(taken, counter);
      taken.insert(x);
      out.constraint.push_back(TheoryAtom(LinearExpr::of(Term::variable(x)), CmpOp::Eq, LinearExpr::of(t)));
      nl.atom.args.push_back(Term::variable(x));
    }
    out.literals.push_back(std::move(nl));
  }
  return out;
}

/// Most general unifier of two free atoms. Idempotent and introduces no fresh
/// variables; std::nullopt when the atoms do not unify.
inline std::optional<Substitution> mgu(const FreeAtom& a, const FreeAtom& b) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
  Substitution sigma;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    Term s = substitute(sigma, a.args[i]);
    Term t = substitute(sigma, b.args[i]);
    if (s == t) continue;
    if (!s.is_variable() && t.is_variable()) std::swap(s, t);
    if (!s.is_variable()) return std::nullopt;
    // Bind s ↦ t and keep sigma idempotent.
    for (auto& entry : sigma)
      if (entry.second == s) entry.second = t;
    sigma[s.name()] = t;
  }
  return sigma;
}

/// Renames the variables of `c` so that none occurs in `taken`.
inline Clause rename_apart(const Clause& c, const std::set<std::string>& taken) {
  Substitution sigma;
  std::set<std::string> used = taken;
  for (const std::string& v : variables(c)) {
    if (!used.count(v)) {
      used.insert(v);
      continue;
    }
    for (std::size_t k = 1;; ++k) {
      std::string candidate = v + "_" + std::to_string(k);
      if (!used.count(candidate)) {
        used.insert(candidate);
        sigma[v] = Term::variable(candidate);
        break;
      }
    }
  }
  return sigma.empty() ? c : substitute(sigma, c);
}

/// Resolvent (Λ1, Λ2 || C1 ∨ C2)σ of two clauses on complementary literals,
/// after renaming `c2` apart. Theory atoms of the result are simplified and
/// TRUE atoms removed; FALSE atoms are kept so an empty solution set stays
/// visible to callers.
inline Clause hierarchic_resolve(const Clause& c1, std::size_t l1, const Clause& c2, std::size_t l2) {
  if (l1 >= c1.literals.size() || l2 >= c2.literals.size())
    throw NotComplementary("literal index out of range");
  std::set<std::string> taken;
  for (const std::string& v : variables(c1)) taken.insert(v);
  const Clause right = rename_apart(c2, taken);
  const Literal& a = c1.literals[l1];
  const Literal& b = right.literals[l2];
  if (a.positive == b.positive) throw NotComplementary("literals have the same sign");
  auto sigma = mgu(a.atom, b.atom);
  if (!sigma) throw NotComplementary("literals do not unify: " + to_string(a) + " / " + to_string(b));
  Clause merged;
  merged.constraint = c1.constraint;
  merged.constraint.insert(merged.constraint.end(), right.constraint.begin(), right.constraint.end());
  for (std::size_t i = 0; i < c1.literals.size(); ++i)
    if (i != l1) merged.literals.push_back(c1.literals[i]);
  for (std::size_t i = 0; i < right.literals.size(); ++i)
    if (i != l2) merged.literals.push_back(right.literals[i]);
  return substitute(*sigma, merged);
}

/// True when the conjunction is provably empty using only truth values and
/// single-symbol bounds (comparisons and linear atoms are treated as
/// satisfiable).
inline bool bounds_unsatisfiable(const std::vector<TheoryAtom>& constraint) {
  struct Range {
    std::optional<Rational> lo, hi;
    bool lo_strict = false, hi_strict = false;
    std::vector<Rational> excluded;
  };
  std::map<Term, Range> ranges;
  for (const TheoryAtom& a : constraint) {
    if (a.shape() == AtomShape::False) return true;
    if (a.shape() != AtomShape::Bound) continue;
    Range& r = ranges[a.subject()];
    const Rational& c = a.bound_value();
    auto tighten_lo = [&](bool strict) {
      if (!r.lo || c > *r.lo || (c == *r.lo && strict)) {
        r.lo = c;
        r.lo_strict = strict;
      }
    };
    auto tighten_hi = [&](bool strict) {
      if (!r.hi || c < *r.hi || (c == *r.hi && strict)) {
        r.hi = c;
        r.hi_strict = strict;
      }
    };
    switch (a.op()) {
      case CmpOp::Le: tighten_hi(false); break;
      case CmpOp::Lt: tighten_hi(true); break;
      case CmpOp::Ge: tighten_lo(false); break;
      case CmpOp::Gt: tighten_lo(true); break;
      case CmpOp::Eq: tighten_lo(false); tighten_hi(false); break;
      case CmpOp::Ne: r.excluded.push_back(c); break;
    }
  }
  for (const auto& [term, r] : ranges) {
    if (r.lo && r.hi) {
      if (*r.lo > *r.hi) return true;
      if (*r.lo == *r.hi) {
        if (r.lo_strict || r.hi_strict) return true;
        if (std::find(r.excluded.begin(), r.excluded.end(), *r.lo) != r.excluded.end()) return true;
      }
    }
  }
  return false;
}

}  // namespace slrh
