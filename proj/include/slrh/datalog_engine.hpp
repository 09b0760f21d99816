// Semi-naive bottom-up evaluation with stratified negation.
#pragma once

#include "slrh/datalog_program.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace slrh {

class ResourceLimit : public LimitExceeded {
 public:
  using LimitExceeded::LimitExceeded;
};

/// Tuple store for one predicate: flat rows, a dedup hash table and lazily
/// built per-column-mask indexes that are kept current on insert.
class Relation {
 public:
  explicit Relation(std::size_t arity = 0) : arity_(arity) {}

  std::size_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return rows_; }
  const std::uint32_t* row(std::size_t i) const noexcept { return data_.data() + i * arity_; }

  bool contains(const std::uint32_t* t) const { return find(t) != kEmpty; }

  bool insert(const std::uint32_t* t) {
    if (find(t) != kEmpty) return false;
    if ((rows_ + 1) * 2 > table_.size()) rehash(std::max<std::size_t>(16, table_.size() * 2));
    const std::uint32_t id = static_cast<std::uint32_t>(rows_);
    data_.insert(data_.end(), t, t + arity_);
    ++rows_;
    place(id);
    for (auto& [mask, index] : indexes_) index[key_hash(row(id), mask)].push_back(id);
    return true;
  }

  /// Row ids whose masked columns hash like `t`'s; callers re-check values.
  const std::vector<std::uint32_t>& bucket(std::uint64_t mask, const std::uint32_t* t) {
    auto it = indexes_.find(mask);
    if (it == indexes_.end()) {
      it = indexes_.emplace(mask, Index{}).first;
      for (std::uint32_t id = 0; id < rows_; ++id) it->second[key_hash(row(id), mask)].push_back(id);
    }
    auto b = it->second.find(key_hash(t, mask));
    return b == it->second.end() ? empty_ : b->second;
  }

 private:
  using Index = std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>;
  static constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();

  std::uint64_t key_hash(const std::uint32_t* t, std::uint64_t mask) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::size_t c = 0; c < arity_; ++c) {
      if (!(mask >> c & 1)) continue;
      h ^= t[c] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebull;
    return h ^ (h >> 31);
  }
  std::uint64_t full_hash(const std::uint32_t* t) const { return key_hash(t, ~0ull); }

  std::uint32_t find(const std::uint32_t* t) const {
    if (arity_ == 0) return rows_ ? 0 : kEmpty;
    if (table_.empty()) return kEmpty;
    std::size_t slot = full_hash(t) & (table_.size() - 1);
    for (;;) {
      std::uint32_t id = table_[slot];
      if (id == kEmpty) return kEmpty;
      if (std::equal(t, t + arity_, row(id))) return id;
      slot = (slot + 1) & (table_.size() - 1);
    }
  }

  void place(std::uint32_t id) {
    if (arity_ == 0) return;
    std::size_t slot = full_hash(row(id)) & (table_.size() - 1);
    while (table_[slot] != kEmpty) slot = (slot + 1) & (table_.size() - 1);
    table_[slot] = id;
  }

  void rehash(std::size_t n) {
    if (arity_ == 0) {
      table_.assign(n, kEmpty);
      return;
    }
    table_.assign(n, kEmpty);
    for (std::uint32_t id = 0; id < rows_; ++id) place(id);
  }

  std::size_t arity_;
  std::size_t rows_ = 0;
  std::vector<std::uint32_t> data_;
  std::vector<std::uint32_t> table_;
  std::map<std::uint64_t, Index> indexes_;
  std::vector<std::uint32_t> empty_;
};

/// Saturated model: relations over interned constants.
class Model {
 public:
  std::vector<std::string> constants;
  std::map<std::string, Relation> relations;

  bool holds(const std::string& predicate, const std::vector<std::string>& args) const {
    auto r = relations.find(predicate);
    if (r == relations.end()) return false;
    std::vector<std::uint32_t> t;
    for (const std::string& a : args) {
      auto it = ids_.find(a);
      if (it == ids_.end()) return false;
      t.push_back(it->second);
    }
    return r->second.contains(t.data());
  }

  bool holds(const DlAtom& a) const {
    std::vector<std::string> args;
    for (const DlTerm& t : a.args) args.push_back(t.constant);
    return holds(a.predicate, args);
  }

  std::vector<std::vector<std::string>> tuples(const std::string& predicate) const {
    std::vector<std::vector<std::string>> out;
    auto r = relations.find(predicate);
    if (r == relations.end()) return out;
    for (std::size_t i = 0; i < r->second.size(); ++i) {
      const std::uint32_t* row = r->second.row(i);
      std::vector<std::string> t;
      for (std::size_t c = 0; c < r->second.arity(); ++c) t.push_back(constants[row[c]]);
      out.push_back(std::move(t));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// All atoms, sorted.
  std::set<DlAtom> atoms() const {
    std::set<DlAtom> out;
    for (const auto& [name, rel] : relations)
      for (auto& t : tuples(name)) {
        DlAtom a{name, {}};
        for (auto& c : t) a.args.push_back(DlTerm::constant_of(std::move(c)));
        out.insert(std::move(a));
      }
    return out;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [name, rel] : relations) n += rel.size();
    return n;
  }

  std::uint32_t intern(const std::string& c) {
    auto [it, inserted] = ids_.emplace(c, static_cast<std::uint32_t>(constants.size()));
    if (inserted) constants.push_back(c);
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// ---------------------------------------------------------------------------
// Stratification

struct Stratification {
  /// Stratum of each predicate.
  std::map<std::string, std::size_t> level;
  /// Rule indexes (into rules followed by negation_rules) per stratum.
  std::vector<std::vector<std::size_t>> strata;
};

/// Level of a predicate = longest path in the dependency graph counting
/// negative edges; a negative edge inside a strongly connected component is
/// rejected.
inline Stratification stratify(const DatalogProgram& p) {
  std::vector<const DlRule*> rules;
  for (const DlRule& r : p.rules) rules.push_back(&r);
  for (const DlRule& r : p.negation_rules) rules.push_back(&r);

  std::map<std::string, std::size_t> id;
  auto node = [&](const std::string& name) {
    return id.emplace(name, id.size()).first->second;
  };
  for (const DlAtom& f : p.facts) node(f.predicate);
  struct Edge {
    std::size_t to;
    bool negative;
  };
  std::vector<std::vector<Edge>> out;
  auto edge = [&](std::size_t from, std::size_t to, bool neg) {
    if (out.size() <= std::max(from, to)) out.resize(std::max(from, to) + 1);
    out[from].push_back({to, neg});
  };
  for (const DlRule* r : rules) {
    if (!r->head) throw Error("rule without head; apply the Goal transformation first");
    std::size_t h = node(r->head->predicate);
    for (const DlAtom& a : r->body) edge(node(a.predicate), h, false);
    for (const DlAtom& a : r->negated) edge(node(a.predicate), h, true);
  }
  node(p.query);
  const std::size_t n = id.size();
  out.resize(n);

  // Tarjan, iterative.
  std::vector<std::size_t> comp(n, SIZE_MAX), low(n), idx(n, SIZE_MAX), stack;
  std::vector<bool> on(n, false);
  std::size_t counter = 0, ncomp = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (idx[s] != SIZE_MAX) continue;
    std::vector<std::pair<std::size_t, std::size_t>> call{{s, 0}};
    idx[s] = low[s] = counter++;
    stack.push_back(s);
    on[s] = true;
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e < out[v].size()) {
        std::size_t w = out[v][e++].to;
        if (idx[w] == SIZE_MAX) {
          idx[w] = low[w] = counter++;
          stack.push_back(w);
          on[w] = true;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
        continue;
      }
      if (low[v] == idx[v]) {
        for (;;) {
          std::size_t w = stack.back();
          stack.pop_back();
          on[w] = false;
          comp[w] = ncomp;
          if (w == v) break;
        }
        ++ncomp;
      }
      std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  // Tarjan numbers components in reverse topological order.
  std::vector<std::size_t> comp_level(ncomp, 0);
  std::vector<std::vector<std::size_t>> members(ncomp);
  for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(v);
  std::vector<std::string> names(n);
  for (const auto& [name, i] : id) names[i] = name;
  for (std::size_t c = ncomp; c-- > 0;) {
    for (std::size_t v : members[c]) {
      for (const Edge& e : out[v]) {
        if (comp[e.to] == c) {
          if (e.negative) throw NotStratified("negation inside a recursive cycle through " + names[v]);
          continue;
        }
        comp_level[comp[e.to]] = std::max(comp_level[comp[e.to]], comp_level[c] + (e.negative ? 1 : 0));
      }
    }
  }
  Stratification st;
  std::size_t top = 0;
  for (std::size_t v = 0; v < n; ++v) {
    st.level[names[v]] = comp_level[comp[v]];
    top = std::max(top, comp_level[comp[v]]);
  }
  st.strata.resize(top + 1);
  for (std::size_t i = 0; i < rules.size(); ++i) st.strata[st.level.at(rules[i]->head->predicate)].push_back(i);
  return st;
}

// ---------------------------------------------------------------------------
// Saturation

struct EngineOptions {
  std::size_t fact_cap = 80'000'000;
  /// Called after every iteration with (stratum, iteration, new facts).
  std::function<void(std::size_t, std::size_t, std::size_t)> trace;
};

struct EngineStats {
  std::size_t strata = 0;
  std::size_t iterations = 0;
  std::size_t derived = 0;
};

namespace detail {

struct CompiledAtom {
  Relation* rel = nullptr;
  /// >= 0: variable index; < 0: constant id -(c + 1).
  std::vector<std::int64_t> args;
  bool recursive = false;
};

struct CompiledRule {
  CompiledAtom head;
  std::vector<CompiledAtom> body;
  std::vector<CompiledAtom> negated;
  std::size_t vars = 0;
};

class Evaluator {
 public:
  Evaluator(Model& model, EngineOptions opt) : model_(model), opt_(std::move(opt)) {}

  EngineStats run(const DatalogProgram& p) {
    Stratification st = stratify(p);
    std::vector<const DlRule*> rules;
    for (const DlRule& r : p.rules) rules.push_back(&r);
    for (const DlRule& r : p.negation_rules) rules.push_back(&r);
    for (const DlAtom& f : p.facts) {
      if (!f.is_ground()) throw Error("non-ground fact " + to_string(f));
      Relation& rel = relation(f.predicate, f.args.size());
      std::vector<std::uint32_t> t;
      for (const DlTerm& a : f.args) t.push_back(model_.intern(a.constant));
      if (rel.insert(t.data())) ++total_;
    }
    for (const DlRule* r : rules) {
      relation(r->head->predicate, r->head->args.size());
      for (const DlAtom& a : r->body) relation(a.predicate, a.args.size());
      for (const DlAtom& a : r->negated) relation(a.predicate, a.args.size());
    }
    relation(p.query, 0);
    EngineStats stats;
    stats.strata = st.strata.size();
    for (std::size_t s = 0; s < st.strata.size(); ++s) {
      std::vector<CompiledRule> compiled;
      std::set<Relation*> in_stratum;
      for (std::size_t i : st.strata[s]) in_stratum.insert(&model_.relations.at(rules[i]->head->predicate));
      for (std::size_t i : st.strata[s]) compiled.push_back(compile(*rules[i], in_stratum));
      if (!compiled.empty()) run_stratum(s, compiled, in_stratum, stats);
    }
    return stats;
  }

 private:
  Relation& relation(const std::string& name, std::size_t arity) {
    auto it = model_.relations.find(name);
    if (it == model_.relations.end()) it = model_.relations.emplace(name, Relation(arity)).first;
    if (it->second.arity() != arity)
      throw Error("predicate " + name + " used with arities " + std::to_string(it->second.arity()) + " and " +
                  std::to_string(arity));
    return it->second;
  }

  CompiledAtom compile_atom(const DlAtom& a, const std::set<Relation*>& in_stratum) {
    CompiledAtom c;
    c.rel = &model_.relations.at(a.predicate);
    c.recursive = in_stratum.count(c.rel) != 0;
    for (const DlTerm& t : a.args)
      c.args.push_back(t.is_var ? static_cast<std::int64_t>(t.var) : -static_cast<std::int64_t>(model_.intern(t.constant)) - 1);
    return c;
  }

  CompiledRule compile(const DlRule& r, const std::set<Relation*>& in_stratum) {
    CompiledRule c;
    c.head = compile_atom(*r.head, in_stratum);
    for (const DlAtom& a : r.body) c.body.push_back(compile_atom(a, in_stratum));
    for (const DlAtom& a : r.negated) c.negated.push_back(compile_atom(a, in_stratum));
    std::set<std::int64_t> bound;
    auto note = [&](const CompiledAtom& a) {
      for (std::int64_t v : a.args)
        if (v >= 0) c.vars = std::max<std::size_t>(c.vars, static_cast<std::size_t>(v) + 1);
    };
    note(c.head);
    for (const CompiledAtom& a : c.body) {
      note(a);
      for (std::int64_t v : a.args)
        if (v >= 0) bound.insert(v);
    }
    for (const CompiledAtom& a : c.negated) note(a);
    auto check = [&](const CompiledAtom& a, const char* what) {
      for (std::int64_t v : a.args)
        if (v >= 0 && !bound.count(v)) throw Error(std::string("unsafe rule: unbound variable in ") + what + " of " + to_string(r));
    };
    check(c.head, "head");
    for (const CompiledAtom& a : c.negated) check(a, "negated atom");
    return c;
  }

  struct Range {
    std::size_t lo, hi;
  };

  struct Step {
    const CompiledAtom* atom;
    Range range;
    std::uint64_t mask = 0;  // bound columns
  };

  void run_stratum(std::size_t s, std::vector<CompiledRule>& rules, const std::set<Relation*>& in_stratum,
                   EngineStats& stats) {
    std::map<Relation*, Range> delta;
    for (Relation* r : in_stratum) delta[r] = {0, r->size()};
    auto snapshot = [&](Relation* r) -> Range {
      auto it = delta.find(r);
      return it == delta.end() ? Range{r->size(), r->size()} : it->second;
    };
    for (std::size_t iter = 0;; ++iter) {
      std::map<Relation*, std::size_t> before;
      for (Relation* r : in_stratum) before[r] = r->size();
      for (CompiledRule& rule : rules) {
        if (iter == 0) {
          std::vector<Range> ranges;
          for (const CompiledAtom& a : rule.body) {
            Range d = snapshot(a.rel);
            ranges.push_back({0, a.recursive ? d.hi : a.rel->size()});
          }
          evaluate(rule, ranges, SIZE_MAX);
          continue;
        }
        for (std::size_t i = 0; i < rule.body.size(); ++i) {
          const CompiledAtom& di = rule.body[i];
          if (!di.recursive) continue;
          Range d = snapshot(di.rel);
          if (d.lo == d.hi) continue;
          std::vector<Range> ranges;
          for (std::size_t j = 0; j < rule.body.size(); ++j) {
            const CompiledAtom& a = rule.body[j];
            if (!a.recursive) {
              ranges.push_back({0, a.rel->size()});
              continue;
            }
            Range r = snapshot(a.rel);
            if (j == i) {
              ranges.push_back(r);
            } else if (j < i) {
              ranges.push_back({0, r.lo});
            } else {
              ranges.push_back({0, r.hi});
            }
          }
          evaluate(rule, ranges, i);
        }
      }
      std::size_t fresh = 0;
      for (Relation* r : in_stratum) {
        delta[r] = {before[r], r->size()};
        fresh += r->size() - before[r];
      }
      ++stats.iterations;
      stats.derived += fresh;
      if (opt_.trace) opt_.trace(s, iter, fresh);
      if (iter > 0 && fresh == 0) break;
      if (iter == 0 && fresh == 0) break;
    }
  }

  // Joins the body of `rule` with atom `first` (or none) leading.
  void evaluate(CompiledRule& rule, const std::vector<Range>& ranges, std::size_t first) {
    for (const Range& r : ranges)
      if (r.lo >= r.hi) return;
    std::vector<Step> plan;
    std::vector<bool> used(rule.body.size(), false);
    std::vector<bool> bound(rule.vars, false);
    auto bound_count = [&](const CompiledAtom& a) {
      std::size_t k = 0;
      for (std::int64_t v : a.args)
        if (v < 0 || bound[static_cast<std::size_t>(v)]) ++k;
      return k;
    };
    auto push = [&](std::size_t j) {
      Step st{&rule.body[j], ranges[j], 0};
      for (std::size_t c = 0; c < st.atom->args.size(); ++c) {
        std::int64_t v = st.atom->args[c];
        if (v < 0 || bound[static_cast<std::size_t>(v)]) st.mask |= 1ull << c;
      }
      for (std::int64_t v : st.atom->args)
        if (v >= 0) bound[static_cast<std::size_t>(v)] = true;
      used[j] = true;
      plan.push_back(st);
    };
    if (first != SIZE_MAX) push(first);
    // Connected atoms first, fully bound ones before partially bound, then
    // smaller ranges.
    auto score = [&](std::size_t j) {
      const std::size_t b = bound_count(rule.body[j]);
      return std::make_tuple(b == 0, b != rule.body[j].args.size(), ranges[j].hi - ranges[j].lo);
    };
    while (plan.size() < rule.body.size()) {
      std::size_t best = SIZE_MAX;
      for (std::size_t j = 0; j < rule.body.size(); ++j)
        if (!used[j] && (best == SIZE_MAX || score(j) < score(best))) best = j;
      push(best);
    }
    std::vector<std::uint32_t> binding(rule.vars, 0);
    pending_.clear();
    join(rule, plan, 0, binding);
    Relation& head = *rule.head.rel;
    const std::size_t arity = head.arity();
    for (std::size_t k = 0; k < pending_count_; ++k) {
      if (head.insert(pending_.data() + k * arity) && ++total_ > opt_.fact_cap)
        throw ResourceLimit("fact cap of " + std::to_string(opt_.fact_cap) + " exceeded");
    }
    pending_count_ = 0;
  }

  void join(const CompiledRule& rule, const std::vector<Step>& plan, std::size_t k,
            std::vector<std::uint32_t>& binding) {
    if (k == plan.size()) {
      emit(rule, binding);
      return;
    }
    const Step& st = plan[k];
    const CompiledAtom& a = *st.atom;
    Relation& rel = *a.rel;
    const std::size_t arity = a.args.size();
    std::vector<std::uint32_t> key(arity, 0);
    for (std::size_t c = 0; c < arity; ++c) {
      std::int64_t v = a.args[c];
      if (v < 0) {
        key[c] = static_cast<std::uint32_t>(-v - 1);
      } else if (st.mask >> c & 1) {
        key[c] = binding[static_cast<std::size_t>(v)];
      }
    }
    auto visit = [&](std::uint32_t id) {
      const std::uint32_t* row = rel.row(id);
      for (std::size_t c = 0; c < arity; ++c)
        if ((st.mask >> c & 1) && row[c] != key[c]) return;
      // Bind fresh variables; a variable repeated within the atom must agree.
      for (std::size_t c = 0; c < arity; ++c) {
        std::int64_t v = a.args[c];
        if (v < 0 || (st.mask >> c & 1)) continue;
        std::size_t var = static_cast<std::size_t>(v);
        bool earlier = false;
        for (std::size_t e = 0; e < c; ++e)
          if (a.args[e] == v && !(st.mask >> e & 1)) earlier = true;
        if (earlier) {
          if (binding[var] != row[c]) return;
        } else {
          binding[var] = row[c];
        }
      }
      join(rule, plan, k + 1, binding);
    };
    if (arity == 0) {
      if (rel.size() > 0 && st.range.lo == 0 && st.range.hi >= 1) visit(0);
      return;
    }
    if (st.mask == 0) {
      for (std::size_t id = st.range.lo; id < st.range.hi; ++id) visit(static_cast<std::uint32_t>(id));
      return;
    }
    const std::vector<std::uint32_t>& b = rel.bucket(st.mask, key.data());
    auto it = std::lower_bound(b.begin(), b.end(), static_cast<std::uint32_t>(st.range.lo));
    for (; it != b.end() && *it < st.range.hi; ++it) visit(*it);
  }

  void emit(const CompiledRule& rule, const std::vector<std::uint32_t>& binding) {
    std::vector<std::uint32_t> t;
    for (const CompiledAtom& n : rule.negated) {
      t.clear();
      for (std::int64_t v : n.args) t.push_back(v < 0 ? static_cast<std::uint32_t>(-v - 1) : binding[static_cast<std::size_t>(v)]);
      if (n.rel->contains(t.data())) return;
    }
    t.clear();
    for (std::int64_t v : rule.head.args)
      t.push_back(v < 0 ? static_cast<std::uint32_t>(-v - 1) : binding[static_cast<std::size_t>(v)]);
    if (rule.head.rel->contains(t.data())) return;
    pending_.insert(pending_.end(), t.begin(), t.end());
    ++pending_count_;
  }

  Model& model_;
  EngineOptions opt_;
  std::vector<std::uint32_t> pending_;
  std::size_t pending_count_ = 0;
  std::size_t total_ = 0;
};

}  // namespace detail

/// Least model of a stratified program.
inline Model saturate(const DatalogProgram& p, EngineOptions opt = {}, EngineStats* stats = nullptr) {
  Model m;
  detail::Evaluator ev(m, std::move(opt));
  EngineStats s = ev.run(p);
  if (stats) *stats = s;
  return m;
}

inline bool query_goal(const Model& m, const std::string& query = "goal") { return m.holds(query, {}); }

}  // namespace slrh
