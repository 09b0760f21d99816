// Conjecture formulas over free and theory atoms.
#pragma once

#include "slrh/logic.hpp"

#include <string>
#include <vector>

namespace slrh {

enum class FormulaKind : std::uint8_t { And, Or, Theory, Atom };

/// Formula tree. `Theory` nodes hold a conjunction of theory atoms; `Atom`
/// nodes hold a (possibly negated) free literal. An empty `And` is true and an
/// empty `Or` is false.
struct Formula {
  FormulaKind kind = FormulaKind::And;
  std::vector<Formula> children;
  std::vector<TheoryAtom> theory;
  Literal literal;

  static Formula conj(std::vector<Formula> c) { return {FormulaKind::And, std::move(c), {}, {}}; }
  static Formula disj(std::vector<Formula> c) { return {FormulaKind::Or, std::move(c), {}, {}}; }
  static Formula atoms(std::vector<TheoryAtom> t) { return {FormulaKind::Theory, {}, std::move(t), {}}; }
  static Formula atom(TheoryAtom t) { return atoms({std::move(t)}); }
  static Formula lit(Literal l) { return {FormulaKind::Atom, {}, {}, std::move(l)}; }
  static Formula verum() { return conj({}); }
  static Formula falsum() { return disj({}); }

  bool is_true() const { return kind == FormulaKind::And && children.empty(); }
  bool is_false() const { return kind == FormulaKind::Or && children.empty(); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case FormulaKind::Theory: return a.theory == b.theory;
      case FormulaKind::Atom: return a.literal == b.literal;
      default: return a.children == b.children;
    }
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
};

enum class Quantifier : std::uint8_t { Universal, Existential };

struct Conjecture {
  Quantifier quantifier = Quantifier::Universal;
  std::vector<std::string> variables;
  Formula body;

  friend bool operator==(const Conjecture& a, const Conjecture& b) {
    return a.quantifier == b.quantifier && a.variables == b.variables && a.body == b.body;
  }
};

/// Negation, pushed onto atoms. A theory conjunction becomes a disjunction of
/// complemented single-atom theory nodes.
inline Formula negate(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::And: {
      std::vector<Formula> out;
      for (const Formula& c : f.children) out.push_back(negate(c));
      return Formula::disj(std::move(out));
    }
    case FormulaKind::Or: {
      std::vector<Formula> out;
      for (const Formula& c : f.children) out.push_back(negate(c));
      return Formula::conj(std::move(out));
    }
    case FormulaKind::Theory: {
      std::vector<Formula> out;
      for (const TheoryAtom& a : f.theory) out.push_back(Formula::atom(a.complemented()));
      return Formula::disj(std::move(out));
    }
    case FormulaKind::Atom: {
      Literal l = f.literal;
      l.positive = !l.positive;
      return Formula::lit(std::move(l));
    }
  }
  return f;
}

/// Flattens nested nodes of the same kind, merges sibling theory nodes inside
/// a conjunction, drops TRUE theory atoms and collapses singleton nodes.
inline Formula normalize(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Atom: return f;
    case FormulaKind::Theory: {
      std::vector<TheoryAtom> kept;
      for (const TheoryAtom& a : f.theory) {
        if (a.shape() == AtomShape::True) continue;
        if (a.shape() == AtomShape::False) return Formula::falsum();
        if (std::find(kept.begin(), kept.end(), a) == kept.end()) kept.push_back(a);
      }
      if (kept.empty()) return Formula::verum();
      return Formula::atoms(std::move(kept));
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      const bool is_and = f.kind == FormulaKind::And;
      std::vector<Formula> flat;
      std::vector<TheoryAtom> merged;
      bool has_theory = false;
      for (const Formula& c : f.children) {
        Formula n = normalize(c);
        if (n.kind == f.kind) {
          for (Formula& g : n.children) {
            if (is_and && g.kind == FormulaKind::Theory) {
              merged.insert(merged.end(), g.theory.begin(), g.theory.end());
              has_theory = true;
            } else {
              flat.push_back(std::move(g));
            }
          }
          continue;
        }
        if (is_and && n.is_false()) return Formula::falsum();
        if (!is_and && n.is_true()) return Formula::verum();
        if (is_and && n.kind == FormulaKind::Theory) {
          merged.insert(merged.end(), n.theory.begin(), n.theory.end());
          has_theory = true;
          continue;
        }
        flat.push_back(std::move(n));
      }
      if (has_theory) {
        Formula t = normalize(Formula::atoms(std::move(merged)));
        if (t.is_false()) return Formula::falsum();
        if (!t.is_true()) flat.insert(flat.begin(), std::move(t));
      }
      if (flat.size() == 1) return std::move(flat.front());
      return is_and ? Formula::conj(std::move(flat)) : Formula::disj(std::move(flat));
    }
  }
  return f;
}

inline void collect_variables(const Formula& f, std::vector<std::string>& out) {
  auto push = [&](const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  switch (f.kind) {
    case FormulaKind::Atom:
      for (const Term& t : f.literal.atom.args)
        if (t.is_variable()) push(t.name());
      break;
    case FormulaKind::Theory:
      for (const TheoryAtom& a : f.theory)
        for (const std::string& v : a.variables()) push(v);
      break;
    default:
      for (const Formula& c : f.children) collect_variables(c, out);
  }
}

inline std::vector<std::string> variables(const Formula& f) {
  std::vector<std::string> out;
  collect_variables(f, out);
  return out;
}

/// No free literal occurs negatively.
inline bool is_positive(const Formula& f) {
  if (f.kind == FormulaKind::Atom) return f.literal.positive;
  for (const Formula& c : f.children)
    if (!is_positive(c)) return false;
  return true;
}

inline void collect_theory_atoms(const Formula& f, std::vector<TheoryAtom>& out) {
  if (f.kind == FormulaKind::Theory) {
    out.insert(out.end(), f.theory.begin(), f.theory.end());
    return;
  }
  for (const Formula& c : f.children) collect_theory_atoms(c, out);
}

inline Formula substitute(const Substitution& sigma, const Formula& f) {
  Formula out = f;
  switch (f.kind) {
    case FormulaKind::Atom: out.literal = substitute(sigma, f.literal); break;
    case FormulaKind::Theory:
      for (TheoryAtom& a : out.theory) a = simplify_theory_atom(a, sigma);
      break;
    default:
      for (Formula& c : out.children) c = substitute(sigma, c);
  }
  return out;
}

/// Truth value under `holds` for free literals, theory atoms evaluated by
/// `value_of`.
template <typename Holds, typename ValueOf>
bool evaluate(const Formula& f, Holds&& holds, ValueOf&& value_of) {
  switch (f.kind) {
    case FormulaKind::Atom: return holds(f.literal.atom) == f.literal.positive;
    case FormulaKind::Theory:
      for (const TheoryAtom& a : f.theory)
        if (!a.evaluate(value_of)) return false;
      return true;
    case FormulaKind::And:
      for (const Formula& c : f.children)
        if (!evaluate(c, holds, value_of)) return false;
      return true;
    case FormulaKind::Or:
      for (const Formula& c : f.children)
        if (evaluate(c, holds, value_of)) return true;
      return false;
  }
  return false;
}

inline std::string to_string(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Atom: return to_string(f.literal);
    case FormulaKind::Theory: {
      if (f.theory.size() == 1) return to_string(f.theory.front());
      std::string out = "(";
      for (std::size_t i = 0; i < f.theory.size(); ++i) {
        if (i) out += " /\\ ";
        out += to_string(f.theory[i]);
      }
      return out + ")";
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      if (f.children.empty()) return f.kind == FormulaKind::And ? "true" : "false";
      const char* sep = f.kind == FormulaKind::And ? " /\\ " : " \\/ ";
      std::string out = "(";
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += sep;
        out += to_string(f.children[i]);
      }
      return out + ")";
    }
  }
  return {};
}

inline std::string to_string(const Conjecture& c) {
  std::string out = c.quantifier == Quantifier::Universal ? "forall" : "exists";
  for (std::size_t i = 0; i < c.variables.size(); ++i) out += (i ? ", " : " ") + c.variables[i];
  return out + ". " + to_string(c.body);
}

}  // namespace slrh
