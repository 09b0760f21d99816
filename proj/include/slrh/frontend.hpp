// Problem text format: parser and canonical printer.
//
//   % comment
//   declare P/2.
//   fact IgnTable(0, 13, 880, 1100, 2200).
//   clause 0 <= x, x <= 2 || !P(x) \/ Q(x).
//   clause x <= 1 || P(x).
//   clause x > 1, P(x) -> false.
//   conjecture forall x. (0 <= x, x <= 1 || Q(x)).
#pragma once

#include "slrh/conjecture.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace slrh {

struct Problem {
  std::vector<Clause> clauses;
  std::optional<Conjecture> conjecture;
  std::map<std::string, std::size_t> arities;
  std::set<std::string> declared;

  friend bool operator==(const Problem& a, const Problem& b) {
    return a.clauses == b.clauses && a.conjecture == b.conjecture && a.arities == b.arities;
  }
};

/// Names the pipeline uses for its own predicates.
inline bool is_reserved_predicate(std::string_view name) {
  return name == "goal" || name == "expected" || name == "missing" || name == "true" || name == "false" ||
         name.substr(0, 2) == "t_" || name.substr(0, 1) == "_";
}

namespace detail {

enum class Tok : std::uint8_t {
  Ident, Int, LParen, RParen, Comma, Dot, Bar2, Or, And, Not, Arrow,
  Le, Lt, Ne, Eq, Gt, Ge, Plus, Minus, Star, Slash, End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1, column = 1;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    auto two = src.substr(i, 2);
    struct Sym {
      std::string_view text;
      Tok kind;
    };
    static constexpr Sym symbols[] = {
        {"||", Tok::Bar2}, {"\\/", Tok::Or}, {"/\\", Tok::And}, {"->", Tok::Arrow}, {"<=", Tok::Le},
        {">=", Tok::Ge},   {"!=", Tok::Ne},  {"(", Tok::LParen}, {")", Tok::RParen}, {",", Tok::Comma},
        {".", Tok::Dot},   {"!", Tok::Not},  {"<", Tok::Lt},     {">", Tok::Gt},     {"=", Tok::Eq},
        {"+", Tok::Plus},  {"-", Tok::Minus}, {"*", Tok::Star},  {"/", Tok::Slash}};
    bool matched = false;
    for (const Sym& s : symbols) {
      if ((s.text.size() == 2 ? two : src.substr(i, 1)) == s.text) {
        t.kind = s.kind;
        t.text = std::string(s.text);
        advance(s.text.size());
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (!matched) throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

inline std::optional<CmpOp> as_cmp(Tok k) {
  switch (k) {
    case Tok::Le: return CmpOp::Le;
    case Tok::Lt: return CmpOp::Lt;
    case Tok::Ne: return CmpOp::Ne;
    case Tok::Eq: return CmpOp::Eq;
    case Tok::Gt: return CmpOp::Gt;
    case Tok::Ge: return CmpOp::Ge;
    default: return std::nullopt;
  }
}

/// One element of a clause or formula list.
struct Item {
  enum Kind { Theory, Atom, True, False, Formula } kind = Theory;
  TheoryAtom theory;
  Literal literal;
  slrh::Formula formula;
  Token where;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Problem parse() {
    Problem p;
    problem_ = &p;
    while (peek().kind != Tok::End) statement(p);
    return p;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    take();
    return true;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw SyntaxError(t.line, t.column, msg + (t.kind == Tok::End ? " at end of input" : " near '" + t.text + "'"));
  }
  Token expect(Tok k, const char* what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what);
    return take();
  }
  bool keyword(const char* word) const { return peek().kind == Tok::Ident && peek().text == word; }

  void statement(Problem& p) {
    Token head = expect(Tok::Ident, "statement keyword");
    if (head.text == "declare") {
      Token name = expect(Tok::Ident, "predicate name");
      expect(Tok::Slash, "'/'");
      Token n = expect(Tok::Int, "arity");
      check_name(name);
      std::size_t arity = std::stoul(n.text);
      auto [it, inserted] = p.arities.emplace(name.text, arity);
      if (!inserted && it->second != arity)
        throw ArityMismatch(position(name) + "predicate " + name.text + " declared with arity " +
                            std::to_string(arity) + " but used with arity " + std::to_string(it->second));
      p.declared.insert(name.text);
    } else if (head.text == "fact") {
      Item it = item();
      if (it.kind != Item::Atom || !it.literal.positive) fail(it.where, "expected a ground atom");
      for (const Term& t : it.literal.atom.args)
        if (!t.is_number()) fail(it.where, "fact arguments must be numbers");
      p.clauses.push_back(abstract_clause(Clause{{}, {it.literal}}));
    } else if (head.text == "clause") {
      p.clauses.push_back(abstract_clause(clause()));
    } else if (head.text == "conjecture") {
      if (p.conjecture) fail(head, "second conjecture");
      p.conjecture = conjecture(head);
    } else {
      fail(head, "unknown statement");
    }
    expect(Tok::Dot, "'.'");
  }

  static std::string position(const Token& t) {
    return std::to_string(t.line) + ":" + std::to_string(t.column) + ": ";
  }

  void check_name(const Token& name) const {
    if (is_reserved_predicate(name.text)) fail(name, "reserved predicate name");
  }

  void check_arity(const Token& where, const FreeAtom& a) {
    auto [it, inserted] = problem_->arities.emplace(a.predicate, a.args.size());
    if (!inserted && it->second != a.args.size())
      throw ArityMismatch(position(where) + "predicate " + a.predicate + " has arity " +
                          std::to_string(it->second) + ", used with " + std::to_string(a.args.size()));
  }

  // number := INT ['/' INT]
  Rational number() {
    Token n = expect(Tok::Int, "number");
    Rational v = parse_integer(n.text);
    if (peek().kind == Tok::Slash && peek(1).kind == Tok::Int) {
      take();
      Token d = take();
      Rational den = parse_integer(d.text);
      if (den == 0) fail(d, "zero denominator");
      v /= den;
    }
    return v;
  }

  // product := ['-'] (number ['*' IDENT] | IDENT ['*' number])
  LinearExpr product() {
    bool neg = false;
    while (peek().kind == Tok::Minus) {
      take();
      neg = !neg;
    }
    LinearExpr e;
    if (peek().kind == Tok::Int) {
      Rational c = number();
      if (accept(Tok::Star)) {
        Token v = expect(Tok::Ident, "variable");
        e.add_term(Term::variable(v.text), c);
      } else {
        e.constant = c;
      }
    } else {
      Token v = expect(Tok::Ident, "variable or number");
      if (accept(Tok::Star)) {
        if (peek().kind == Tok::Ident) throw NonLinear(position(peek()) + "product of two variables");
        e.add_term(Term::variable(v.text), number());
      } else {
        e.add_term(Term::variable(v.text), Rational(1));
      }
    }
    if (peek().kind == Tok::Star) throw NonLinear(position(peek()) + "nonlinear product");
    if (neg) {
      LinearExpr n;
      n.add(e, Rational(-1));
      return n;
    }
    return e;
  }

  LinearExpr sum() {
    LinearExpr e = product();
    for (;;) {
      if (accept(Tok::Plus)) {
        e.add(product());
      } else if (accept(Tok::Minus)) {
        e.add(product(), Rational(-1));
      } else {
        return e;
      }
    }
  }

  Term argument() {
    if (peek().kind == Tok::Ident) return Term::variable(take().text);
    bool neg = accept(Tok::Minus);
    Rational v = number();
    return Term::number(neg ? Rational(-v) : v);
  }

  // Atom, truth constant or theory atom; `!` negates.
  Item item() {
    Item it;
    it.where = peek();
    if (accept(Tok::Not)) {
      Item inner = item();
      switch (inner.kind) {
        case Item::Atom: inner.literal.positive = !inner.literal.positive; break;
        case Item::Theory: inner.theory = inner.theory.complemented(); break;
        case Item::True: inner.kind = Item::False; break;
        case Item::False: inner.kind = Item::True; break;
        case Item::Formula: inner.formula = negate(inner.formula); break;
      }
      inner.where = it.where;
      return inner;
    }
    const Token& t = peek();
    if (t.kind == Tok::Ident && (t.text == "true" || t.text == "false") && !as_cmp(peek(1).kind) &&
        peek(1).kind != Tok::Plus && peek(1).kind != Tok::Minus && peek(1).kind != Tok::Star) {
      it.kind = take().text == "true" ? Item::True : Item::False;
      return it;
    }
    if (t.kind == Tok::Ident && peek(1).kind == Tok::LParen) {
      Token name = take();
      take();
      check_name(name);
      FreeAtom a{name.text, {}};
      if (!accept(Tok::RParen)) {
        do {
          a.args.push_back(argument());
        } while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
      }
      check_arity(name, a);
      it.kind = Item::Atom;
      it.literal = Literal{true, std::move(a)};
      return it;
    }
    if (t.kind == Tok::Ident && !as_cmp(peek(1).kind) && peek(1).kind != Tok::Plus &&
        peek(1).kind != Tok::Minus && peek(1).kind != Tok::Star) {
      Token name = take();
      check_name(name);
      FreeAtom a{name.text, {}};
      check_arity(name, a);
      it.kind = Item::Atom;
      it.literal = Literal{true, std::move(a)};
      return it;
    }
    LinearExpr lhs = sum();
    auto op = as_cmp(peek().kind);
    if (!op) fail(peek(), "expected comparison operator");
    take();
    LinearExpr rhs = sum();
    it.kind = Item::Theory;
    it.theory = TheoryAtom(lhs, *op, rhs);
    return it;
  }

  std::vector<Item> item_list(bool allow_or, bool allow_and) {
    std::vector<Item> out;
    out.push_back(item());
    for (;;) {
      if (accept(Tok::Comma) || (allow_or && accept(Tok::Or)) || (allow_and && accept(Tok::And))) {
        out.push_back(item());
      } else {
        return out;
      }
    }
  }

  // Constraint part: theory atoms in conjunction.
  void add_constraint(Clause& c, const std::vector<Item>& items) {
    for (const Item& it : items) {
      switch (it.kind) {
        case Item::Theory: c.constraint.push_back(it.theory); break;
        case Item::True: break;
        case Item::False: c.constraint.push_back(TheoryAtom::truth(false)); break;
        default: fail(it.where, "free atom in constraint part");
      }
    }
  }

  // Implication body: theory atoms join Λ, free atoms become negative literals.
  void add_body(Clause& c, const std::vector<Item>& items) {
    for (const Item& it : items) {
      switch (it.kind) {
        case Item::Theory: c.constraint.push_back(it.theory); break;
        case Item::True: break;
        case Item::False: c.constraint.push_back(TheoryAtom::truth(false)); break;
        case Item::Atom: c.literals.push_back(Literal{!it.literal.positive, it.literal.atom}); break;
        default: fail(it.where, "unexpected formula");
      }
    }
  }

  // Disjunction: theory atoms are complemented into Λ.
  void add_disjuncts(Clause& c, const std::vector<Item>& items) {
    for (const Item& it : items) {
      switch (it.kind) {
        case Item::Theory: c.constraint.push_back(it.theory.complemented()); break;
        case Item::True: c.constraint.push_back(TheoryAtom::truth(false)); break;
        case Item::False: break;
        case Item::Atom: c.literals.push_back(it.literal); break;
        default: fail(it.where, "unexpected formula");
      }
    }
  }

  Clause clause() {
    bool paren = false;
    // A leading '(' wraps the whole clause unless it belongs to nothing else.
    if (peek().kind == Tok::LParen) {
      paren = true;
      take();
    }
    Clause c;
    if (accept(Tok::Bar2)) {
      clause_rest(c);
    } else if (accept(Tok::Arrow)) {
      add_disjuncts(c, item_list(true, false));
    } else {
      std::vector<Item> first = item_list(true, true);
      if (accept(Tok::Bar2)) {
        add_constraint(c, first);
        clause_rest(c);
      } else if (accept(Tok::Arrow)) {
        add_body(c, first);
        add_disjuncts(c, item_list(true, false));
      } else {
        add_disjuncts(c, first);
      }
    }
    if (paren) expect(Tok::RParen, "')'");
    return c;
  }

  void clause_rest(Clause& c) {
    if (peek().kind == Tok::Dot || peek().kind == Tok::RParen) return;
    if (accept(Tok::Arrow)) {
      add_disjuncts(c, item_list(true, false));
      return;
    }
    std::vector<Item> second = item_list(true, true);
    if (accept(Tok::Arrow)) {
      add_body(c, second);
      add_disjuncts(c, item_list(true, false));
    } else {
      add_disjuncts(c, second);
    }
  }

  // ---- conjecture formulas

  Formula to_formula(const Item& it) {
    switch (it.kind) {
      case Item::Theory: return Formula::atom(it.theory);
      case Item::Atom: return Formula::lit(it.literal);
      case Item::True: return Formula::verum();
      case Item::False: return Formula::falsum();
      case Item::Formula: return it.formula;
    }
    return Formula::verum();
  }

  Formula unary() {
    if (peek().kind == Tok::Not && peek(1).kind == Tok::LParen) {
      take();
      return negate(unary());
    }
    if (accept(Tok::LParen)) {
      Formula f = group();
      expect(Tok::RParen, "')'");
      return f;
    }
    return to_formula(item());
  }

  Formula conj() {
    std::vector<Formula> parts{unary()};
    while (accept(Tok::And)) parts.push_back(unary());
    return parts.size() == 1 ? parts.front() : Formula::conj(std::move(parts));
  }

  Formula disj() {
    std::vector<Formula> parts{conj()};
    while (accept(Tok::Or)) parts.push_back(conj());
    return parts.size() == 1 ? parts.front() : Formula::disj(std::move(parts));
  }

  std::vector<Formula> formula_list() {
    std::vector<Formula> out{disj()};
    while (accept(Tok::Comma)) out.push_back(disj());
    return out;
  }

  // list ['||' list] ['->' list]
  Formula group() {
    std::vector<Formula> out;
    std::vector<Formula> first = formula_list();
    bool guarded = false;
    if (accept(Tok::Bar2)) {
      out.push_back(negate(Formula::conj(first)));
      guarded = true;
      if (peek().kind == Tok::RParen || peek().kind == Tok::Dot) return Formula::disj(std::move(out));
      if (accept(Tok::Arrow)) {
        for (Formula& f : formula_list()) out.push_back(std::move(f));
        return Formula::disj(std::move(out));
      }
      first = formula_list();
    }
    if (accept(Tok::Arrow)) {
      out.push_back(negate(Formula::conj(first)));
      for (Formula& f : formula_list()) out.push_back(std::move(f));
      return Formula::disj(std::move(out));
    }
    if (!guarded && first.size() == 1) return first.front();
    for (Formula& f : first) out.push_back(std::move(f));
    return Formula::disj(std::move(out));
  }

  Conjecture conjecture(const Token& head) {
    Conjecture c;
    Token q = expect(Tok::Ident, "'forall' or 'exists'");
    if (q.text == "forall") {
      c.quantifier = Quantifier::Universal;
    } else if (q.text == "exists") {
      c.quantifier = Quantifier::Existential;
    } else {
      fail(q, "expected 'forall' or 'exists'");
    }
    while (peek().kind == Tok::Ident) {
      Token v = take();
      if (std::find(c.variables.begin(), c.variables.end(), v.text) != c.variables.end())
        fail(v, "duplicate variable");
      c.variables.push_back(v.text);
      accept(Tok::Comma);
    }
    expect(Tok::Dot, "'.' after quantified variables");
    c.body = normalize(group());
    std::vector<std::string> used = variables(c.body);
    std::set<std::string> a(used.begin(), used.end()), b(c.variables.begin(), c.variables.end());
    if (a != b) fail(head, "conjecture variables do not match the quantified variables");
    return c;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Problem* problem_ = nullptr;
};

}  // namespace detail

/// Parses a problem. Clauses come back abstracted.
inline Problem parse_problem(std::string_view text) { return detail::Parser(text).parse(); }

inline std::string print_clause(const Clause& c) { return "clause " + to_string(c) + "."; }

/// Canonical text; `parse_problem(print_problem(p)) == p`.
inline std::string print_problem(const Problem& p) {
  std::string out;
  for (const std::string& name : p.declared)
    out += "declare " + name + "/" + std::to_string(p.arities.at(name)) + ".\n";
  for (const Clause& c : p.clauses) out += print_clause(c) + "\n";
  if (p.conjecture) out += "conjecture " + to_string(*p.conjecture) + ".\n";
  return out;
}

}  // namespace slrh
