// Interval endpoints, the induced partition of the rationals, test points and
// their concrete assignment β, and the interval-membership bounds idef(B).
#pragma once

#include "slrh/preprocess.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace slrh {

/// Ordered so that `c) < [c < c] < (c` at equal value.
enum class BorderKind : std::uint8_t { UpperOpen, LowerClosed, UpperClosed, LowerOpen };

struct Border {
  BorderKind kind = BorderKind::LowerOpen;
  Rational value;
  /// -1 for −∞, +1 for +∞, 0 for a finite value.
  int infinite = 0;

  static Border neg_inf() { return {BorderKind::LowerOpen, Rational(0), -1}; }
  static Border pos_inf() { return {BorderKind::UpperOpen, Rational(0), 1}; }
  static Border finite(BorderKind k, Rational v) { return {k, std::move(v), 0}; }

  bool is_lower() const { return kind == BorderKind::LowerClosed || kind == BorderKind::LowerOpen; }
  bool is_closed() const { return kind == BorderKind::LowerClosed || kind == BorderKind::UpperClosed; }

  friend bool operator<(const Border& a, const Border& b) {
    if (a.infinite != b.infinite) return a.infinite < b.infinite;
    if (a.infinite == 0 && a.value != b.value) return a.value < b.value;
    return a.kind < b.kind;
  }
  friend bool operator==(const Border& a, const Border& b) { return !(a < b) && !(b < a); }
};

inline std::string to_string(const Border& b) {
  if (b.infinite < 0) return "(-inf";
  if (b.infinite > 0) return "inf)";
  std::string v = to_string(b.value);
  switch (b.kind) {
    case BorderKind::UpperOpen: return v + ")";
    case BorderKind::LowerClosed: return "[" + v;
    case BorderKind::UpperClosed: return v + "]";
    case BorderKind::LowerOpen: return "(" + v;
  }
  return v;
}

struct Interval {
  Border lower;
  Border upper;

  bool is_point() const {
    return lower.infinite == 0 && upper.infinite == 0 && lower.kind == BorderKind::LowerClosed &&
           upper.kind == BorderKind::UpperClosed && lower.value == upper.value;
  }

  bool contains(const Rational& x) const {
    if (lower.infinite == 0) {
      if (lower.kind == BorderKind::LowerClosed ? x < lower.value : x <= lower.value) return false;
    }
    if (upper.infinite == 0) {
      if (upper.kind == BorderKind::UpperClosed ? x > upper.value : x >= upper.value) return false;
    }
    return true;
  }

  friend bool operator==(const Interval& a, const Interval& b) { return a.lower == b.lower && a.upper == b.upper; }
};

/// `(-inf,0)`, `[0,1]`, `(1,2]`, `(2,inf)`.
inline std::string to_string(const Interval& i) {
  std::string lo = i.lower.infinite ? "(-inf" : (i.lower.is_closed() ? "[" : "(") + to_string(i.lower.value);
  std::string hi = i.upper.infinite ? "inf)" : to_string(i.upper.value) + (i.upper.is_closed() ? "]" : ")");
  return lo + "," + hi;
}

inline void add_bound_borders(std::set<Border>& out, CmpOp op, const Rational& c) {
  if (op == CmpOp::Le || op == CmpOp::Eq || op == CmpOp::Ne || op == CmpOp::Gt) {
    out.insert(Border::finite(BorderKind::UpperClosed, c));
    out.insert(Border::finite(BorderKind::LowerOpen, c));
  }
  if (op == CmpOp::Ge || op == CmpOp::Eq || op == CmpOp::Ne || op == CmpOp::Lt) {
    out.insert(Border::finite(BorderKind::UpperOpen, c));
    out.insert(Border::finite(BorderKind::LowerClosed, c));
  }
}

namespace detail {

// Contributes the borders of `a`, raising on atoms that stay non-simple.
inline void add_atom_borders(std::set<Border>& out, const TheoryAtom& a) {
  switch (a.shape()) {
    case AtomShape::True:
    case AtomShape::False: return;
    case AtomShape::Bound:
      add_bound_borders(out, a.op(), a.bound_value());
      return;
    default:
      throw UnsupportedAtom("theory atom outside the simple-bound fragment: " + to_string(a));
  }
}

// Enumerates consistent instantiations of `lits` against the S facts.
inline void for_each_fact_match(const std::vector<const Literal*>& lits, std::size_t k,
                                const PositivelyGroundedSet& s, Substitution& sigma,
                                const std::function<void(const Substitution&)>& visit) {
  if (k == lits.size()) {
    visit(sigma);
    return;
  }
  const FreeAtom& atom = lits[k]->atom;
  auto facts = s.facts.find(atom.predicate);
  if (facts == s.facts.end()) return;
  for (const auto& tuple : facts->second) {
    Substitution saved = sigma;
    bool ok = true;
    for (std::size_t i = 0; i < atom.args.size() && ok; ++i) {
      Term t = substitute(sigma, atom.args[i]);
      if (t.is_variable()) {
        sigma[t.name()] = Term::number(tuple[i]);
      } else {
        ok = t.is_number() && t.value() == tuple[i];
      }
    }
    if (ok) for_each_fact_match(lits, k + 1, s, sigma, visit);
    sigma = std::move(saved);
  }
}

}  // namespace detail

/// The endpoint set 𝒞 of the bounds in elim(S, N) ∪ `extra`, computed by
/// instantiating each theory atom against the S facts of the clause's
/// negative S-literals that share a variable with it (elim is not built).
inline std::set<Border> compute_endpoints(const std::vector<Clause>& n, const PositivelyGroundedSet& s,
                                          const std::vector<TheoryAtom>& extra = {}) {
  std::set<Border> out{Border::neg_inf(), Border::pos_inf()};
  for (const Clause& c : n) {
    std::vector<const Literal*> grounded;
    for (const Literal& l : c.literals)
      if (!l.positive && s.contains(l.atom.predicate)) grounded.push_back(&l);
    for (const TheoryAtom& a : c.constraint) {
      std::vector<std::string> vars = a.variables();
      std::vector<const Literal*> relevant;
      for (const Literal* l : grounded) {
        bool shares = false;
        for (const Term& t : l->atom.args)
          if (t.is_variable() && std::find(vars.begin(), vars.end(), t.name()) != vars.end()) shares = true;
        if (shares) relevant.push_back(l);
      }
      if (relevant.empty()) {
        detail::add_atom_borders(out, a);
        continue;
      }
      Substitution sigma;
      detail::for_each_fact_match(relevant, 0, s, sigma, [&](const Substitution& inst) {
        detail::add_atom_borders(out, simplify_theory_atom(a, inst));
      });
    }
  }
  for (const TheoryAtom& a : extra) detail::add_atom_borders(out, a);
  return out;
}

/// Pairs consecutive sorted borders into intervals.
inline std::vector<Interval> build_partition(const std::set<Border>& borders) {
  std::vector<Border> sorted(borders.begin(), borders.end());
  if (sorted.size() % 2 != 0) throw MalformedBorders("odd number of borders");
  std::vector<Interval> out;
  for (std::size_t i = 0; i < sorted.size(); i += 2) {
    const Border& lo = sorted[i];
    const Border& hi = sorted[i + 1];
    if (!lo.is_lower() || hi.is_lower())
      throw MalformedBorders("borders " + to_string(lo) + " " + to_string(hi) + " do not form an interval");
    out.push_back(Interval{lo, hi});
  }
  return out;
}

struct TestPoint {
  std::uint32_t id = 0;
  std::size_t interval = 0;
  std::size_t j = 1;
  std::string name;
  Rational beta;

  Term term() const { return Term::point(id, name); }
};

struct TestPointSet {
  std::vector<Interval> partition;
  std::size_t m = 1;
  std::vector<TestPoint> points;
  std::vector<std::vector<std::uint32_t>> by_interval;

  std::size_t size() const { return points.size(); }
  const TestPoint& point(std::uint32_t id) const { return points.at(id); }

  /// `a_{[0,1],1}`.
  std::string display(std::uint32_t id) const {
    const TestPoint& p = points.at(id);
    return "a_{" + to_string(partition[p.interval]) + "," + std::to_string(p.j) + "}";
  }

  std::optional<std::size_t> interval_of(const Rational& x) const {
    for (std::size_t i = 0; i < partition.size(); ++i)
      if (partition[i].contains(x)) return i;
    return std::nullopt;
  }

  /// Value of a test-point or number term under β.
  Rational value(const Term& t) const {
    if (t.is_number()) return t.value();
    if (t.is_point()) return points.at(t.point_id()).beta;
    throw Error("unassigned variable " + t.name());
  }
};

/// Test points a_{I,j}: one for each point interval and m for every other,
/// placed by β strictly inside their interval.
inline TestPointSet make_test_points(std::vector<Interval> partition, std::size_t m) {
  if (m == 0) m = 1;
  TestPointSet tps;
  tps.partition = std::move(partition);
  tps.m = m;
  tps.by_interval.resize(tps.partition.size());
  for (std::size_t i = 0; i < tps.partition.size(); ++i) {
    const Interval& iv = tps.partition[i];
    const std::size_t count = iv.is_point() ? 1 : m;
    for (std::size_t j = 1; j <= count; ++j) {
      TestPoint p;
      p.id = static_cast<std::uint32_t>(tps.points.size());
      p.interval = i;
      p.j = j;
      p.name = "a" + std::to_string(i) + "_" + std::to_string(j);
      const Rational step(static_cast<long long>(j));
      if (iv.is_point()) {
        p.beta = iv.lower.value;
      } else if (iv.lower.infinite && iv.upper.infinite) {
        p.beta = step - 1;
      } else if (iv.lower.infinite) {
        p.beta = iv.upper.value - step;
      } else if (iv.upper.infinite) {
        p.beta = iv.lower.value + step;
      } else {
        p.beta = iv.lower.value + (iv.upper.value - iv.lower.value) * step / Rational(static_cast<long long>(m + 1));
      }
      tps.by_interval[i].push_back(p.id);
      tps.points.push_back(std::move(p));
    }
  }
  return tps;
}

/// ilbd(a) ∪ iubd(a) for one test point.
inline std::vector<TheoryAtom> idef(const TestPointSet& tps, std::uint32_t id) {
  const TestPoint& p = tps.point(id);
  const Interval& iv = tps.partition[p.interval];
  std::vector<TheoryAtom> out;
  if (!iv.lower.infinite)
    out.push_back(TheoryAtom::bound(p.term(), iv.lower.is_closed() ? CmpOp::Ge : CmpOp::Gt, iv.lower.value));
  if (!iv.upper.infinite)
    out.push_back(TheoryAtom::bound(p.term(), iv.upper.is_closed() ? CmpOp::Le : CmpOp::Lt, iv.upper.value));
  return out;
}

inline std::vector<TheoryAtom> idef(const TestPointSet& tps) {
  std::vector<TheoryAtom> out;
  for (const TestPoint& p : tps.points)
    for (TheoryAtom& a : idef(tps, p.id)) out.push_back(std::move(a));
  return out;
}

}  // namespace slrh
