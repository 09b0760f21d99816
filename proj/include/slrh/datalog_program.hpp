// Datalog programs with stratified negation and their text format:
//
//   % t_6c1b3d0e2a9f7c41 : _0 <= 1
//   t_6c1b3d0e2a9f7c41(a0_1).
//   p(X0) :- t_6c1b3d0e2a9f7c41(X0).
//   missing :- expected(X0), ~q(X0).
//   goal :- ~missing.
//   @query goal .
#pragma once

#include "slrh/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace slrh {

struct DlTerm {
  bool is_var = false;
  std::uint32_t var = 0;
  std::string constant;

  static DlTerm variable(std::uint32_t v) { return {true, v, {}}; }
  static DlTerm constant_of(std::string c) { return {false, 0, std::move(c)}; }

  friend bool operator==(const DlTerm& a, const DlTerm& b) {
    return a.is_var == b.is_var && (a.is_var ? a.var == b.var : a.constant == b.constant);
  }
  friend bool operator<(const DlTerm& a, const DlTerm& b) {
    if (a.is_var != b.is_var) return a.is_var < b.is_var;
    return a.is_var ? a.var < b.var : a.constant < b.constant;
  }
};

struct DlAtom {
  std::string predicate;
  std::vector<DlTerm> args;

  bool is_ground() const {
    return std::none_of(args.begin(), args.end(), [](const DlTerm& t) { return t.is_var; });
  }

  friend bool operator==(const DlAtom& a, const DlAtom& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
  friend bool operator<(const DlAtom& a, const DlAtom& b) {
    if (a.predicate != b.predicate) return a.predicate < b.predicate;
    return a.args < b.args;
  }
};

/// `head :- body, ~negated.` A missing head stands for a head-less clause
/// until the Goal transformation fills it in.
struct DlRule {
  std::optional<DlAtom> head;
  std::vector<DlAtom> body;
  std::vector<DlAtom> negated;

  friend bool operator==(const DlRule& a, const DlRule& b) {
    return a.head == b.head && a.body == b.body && a.negated == b.negated;
  }
};

struct DatalogProgram {
  std::vector<DlAtom> facts;
  std::vector<DlRule> rules;
  std::vector<DlRule> negation_rules;
  std::vector<std::string> annotations;
  std::string query = "goal";

  std::size_t size() const { return facts.size() + rules.size() + negation_rules.size(); }
};

inline std::string to_string(const DlTerm& t) {
  return t.is_var ? "X" + std::to_string(t.var) : t.constant;
}

inline std::string to_string(const DlAtom& a) {
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

inline std::string to_string(const DlRule& r) {
  std::string out = r.head ? to_string(*r.head) : std::string();
  if (r.body.empty() && r.negated.empty()) return out + (r.head ? "." : ":- .");
  out += r.head ? " :- " : ":- ";
  bool first = true;
  for (const DlAtom& a : r.body) {
    out += (first ? "" : ", ") + to_string(a);
    first = false;
  }
  for (const DlAtom& a : r.negated) {
    out += (first ? "~" : ", ~") + to_string(a);
    first = false;
  }
  return out + ".";
}

/// Renumbers variables by first occurrence (head, body, negated).
inline void canonicalize(DlRule& r) {
  std::map<std::uint32_t, std::uint32_t> ren;
  auto visit = [&](DlAtom& a) {
    for (DlTerm& t : a.args) {
      if (!t.is_var) continue;
      auto [it, inserted] = ren.emplace(t.var, static_cast<std::uint32_t>(ren.size()));
      t.var = it->second;
    }
  };
  if (r.head) visit(*r.head);
  for (DlAtom& a : r.body) visit(a);
  for (DlAtom& a : r.negated) visit(a);
}

/// Sorts facts and rules and removes duplicates.
inline void sort_program(DatalogProgram& p) {
  std::sort(p.facts.begin(), p.facts.end());
  p.facts.erase(std::unique(p.facts.begin(), p.facts.end()), p.facts.end());
  auto order = [](std::vector<DlRule>& rules) {
    for (DlRule& r : rules) canonicalize(r);
    std::sort(rules.begin(), rules.end(),
              [](const DlRule& a, const DlRule& b) { return to_string(a) < to_string(b); });
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
  };
  order(p.rules);
  order(p.negation_rules);
}

/// Byte-stable text; facts and rules are emitted in sorted order.
inline std::string export_datalog(const DatalogProgram& program) {
  DatalogProgram p = program;
  sort_program(p);
  std::string out;
  for (const std::string& a : p.annotations) out += "% " + a + "\n";
  for (const DlAtom& f : p.facts) out += to_string(f) + ".\n";
  for (const DlRule& r : p.rules) out += to_string(r) + "\n";
  for (const DlRule& r : p.negation_rules) out += to_string(r) + "\n";
  out += "@query " + p.query + " .\n";
  return out;
}

namespace detail {

class DatalogReader {
 public:
  explicit DatalogReader(std::string_view src) : src_(src) {}

  DatalogProgram read() {
    DatalogProgram p;
    bool query_seen = false;
    for (;;) {
      skip();
      if (pos_ >= src_.size()) break;
      if (src_[pos_] == '%') {
        std::size_t end = src_.find('\n', pos_);
        if (end == std::string_view::npos) end = src_.size();
        std::string_view text = src_.substr(pos_ + 1, end - pos_ - 1);
        if (!text.empty() && text.front() == ' ') text.remove_prefix(1);
        p.annotations.emplace_back(text);
        pos_ = end;
        continue;
      }
      if (src_[pos_] == '@') {
        ++pos_;
        if (ident() != "query") fail("expected @query");
        if (query_seen) fail("duplicate @query");
        p.query = ident();
        skip();
        expect('.');
        query_seen = true;
        continue;
      }
      vars_.clear();
      DlRule r;
      skip();
      if (!peek_is(":-")) r.head = atom();
      skip();
      if (peek_is(":-")) {
        pos_ += 2;
        for (;;) {
          skip();
          if (pos_ < src_.size() && src_[pos_] == '.') break;
          bool neg = false;
          if (pos_ < src_.size() && src_[pos_] == '~') {
            neg = true;
            ++pos_;
          }
          (neg ? r.negated : r.body).push_back(atom());
          skip();
          if (pos_ < src_.size() && src_[pos_] == ',') {
            ++pos_;
            continue;
          }
          break;
        }
      }
      skip();
      expect('.');
      if (r.head && r.body.empty() && r.negated.empty()) {
        if (!r.head->is_ground()) fail("non-ground fact");
        p.facts.push_back(std::move(*r.head));
      } else if (r.negated.empty()) {
        p.rules.push_back(std::move(r));
      } else {
        p.negation_rules.push_back(std::move(r));
      }
    }
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1 + static_cast<std::size_t>(std::count(src_.begin(), src_.begin() + pos_, '\n'));
    throw SyntaxError(line, 1, msg);
  }
  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool peek_is(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }
  void expect(char c) {
    if (pos_ >= src_.size() || src_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '-'))
      ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(src_.substr(start, pos_ - start));
  }
  DlAtom atom() {
    DlAtom a{ident(), {}};
    skip();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      ++pos_;
      for (;;) {
        std::string t = ident();
        if (std::isupper(static_cast<unsigned char>(t.front()))) {
          auto [it, inserted] = vars_.emplace(t, static_cast<std::uint32_t>(vars_.size()));
          a.args.push_back(DlTerm::variable(it->second));
        } else {
          a.args.push_back(DlTerm::constant_of(t));
        }
        skip();
        if (pos_ < src_.size() && src_[pos_] == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
    }
    return a;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::map<std::string, std::uint32_t> vars_;
};

}  // namespace detail

inline DatalogProgram parse_datalog(std::string_view text) { return detail::DatalogReader(text).read(); }

/// Equality after sorting; annotations are ignored.
inline bool same_program(const DatalogProgram& a, const DatalogProgram& b) {
  DatalogProgram x = a, y = b;
  sort_program(x);
  sort_program(y);
  return x.facts == y.facts && x.rules == y.rules && x.negation_rules == y.negation_rules && x.query == y.query;
}

}  // namespace slrh
