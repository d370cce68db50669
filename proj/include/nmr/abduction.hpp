#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nmr/cnf.hpp"
#include "nmr/error.hpp"
#include "nmr/formula.hpp"
#include "nmr/limits.hpp"
#include "nmr/model_set.hpp"
#include "nmr/parallel.hpp"
#include "nmr/theory.hpp"

namespace nmr {

enum class QueryKind { Proposition, Literal, Term, Clause, Formula };
enum class ExplanationMode { Literals, Positive };

inline std::string_view query_kind_name(QueryKind k) {
  switch (k) {
    case QueryKind::Proposition: return "proposition";
    case QueryKind::Literal: return "literal";
    case QueryKind::Term: return "term";
    case QueryKind::Clause: return "clause";
    case QueryKind::Formula: return "formula";
  }
  return "formula";
}

inline QueryKind parse_query_kind(std::string_view s) {
  for (auto k : {QueryKind::Proposition, QueryKind::Literal, QueryKind::Term, QueryKind::Clause, QueryKind::Formula})
    if (query_kind_name(k) == s) return k;
  throw InvalidInput("unknown query kind '" + std::string(s) + "'");
}

struct Explanation {
  std::vector<Literal> literals;  // sorted by variable

  std::size_t size() const { return literals.size(); }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < literals.size(); ++i) {
      if (i) s += ", ";
      s += (literals[i].positive ? "" : "!") + literals[i].var;
    }
    return s + "}";
  }

  friend bool operator==(const Explanation&, const Explanation&) = default;
  // Smaller sets first, then lexicographic.
  friend bool operator<(const Explanation& a, const Explanation& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.literals < b.literals;
  }
};

class AbductionInstance {
 public:
  AbductionInstance(Theory knowledge, std::set<std::string> hypotheses, Formula query,
                    QueryKind kind = QueryKind::Proposition, ExplanationMode mode = ExplanationMode::Literals)
      : knowledge_(std::move(knowledge)), hypotheses_(std::move(hypotheses)), query_(std::move(query)), kind_(kind),
        mode_(mode) {
    validate();
  }

  const Theory& knowledge() const noexcept { return knowledge_; }
  const std::set<std::string>& hypotheses() const noexcept { return hypotheses_; }
  const Formula& query() const noexcept { return query_; }
  QueryKind kind() const noexcept { return kind_; }
  ExplanationMode mode() const noexcept { return mode_; }

 private:
  static bool is_literal(const Formula& f) {
    return f.is_prop() || (f.is_apply() && f.function()->name() == "not" && f.args()[0].is_prop());
  }
  static bool is_junction_of_literals(const Formula& f, std::string_view op) {
    if (is_literal(f)) return true;
    return f.is_apply() && f.function()->name() == op && is_junction_of_literals(f.args()[0], op) &&
           is_junction_of_literals(f.args()[1], op);
  }

  void validate() const {
    const auto gv = vars(knowledge_);
    for (const auto& a : hypotheses_)
      if (!gv.count(a)) throw InvalidInput("hypothesis '" + a + "' does not occur in the knowledge base");
    if (has_belief(query_)) throw InvalidInput("query must be propositional");
    switch (kind_) {
      case QueryKind::Proposition:
        if (!query_.is_prop()) throw InvalidInput("proposition query expected");
        if (!gv.count(query_.name()) || hypotheses_.count(query_.name()))
          throw InvalidInput("query proposition must occur in the knowledge base and not be a hypothesis");
        break;
      case QueryKind::Literal:
        if (!is_literal(query_)) throw InvalidInput("literal query expected");
        break;
      case QueryKind::Term:
        if (!is_junction_of_literals(query_, "and")) throw InvalidInput("term query expected");
        break;
      case QueryKind::Clause:
        if (!is_junction_of_literals(query_, "or")) throw InvalidInput("clause query expected");
        break;
      case QueryKind::Formula:
        break;
    }
  }

  Theory knowledge_;
  std::set<std::string> hypotheses_;
  Formula query_;
  QueryKind kind_;
  ExplanationMode mode_;
};

namespace detail {

struct CompiledAbduction {
  Universe universe;
  ModelSet knowledge;
  ModelSet query;
  std::vector<Code> hyp_bits;  // in hypothesis order
  std::vector<std::string> hyp_names;
};

inline CompiledAbduction compile_abduction(const AbductionInstance& inst, const Limits& lim) {
  if (inst.hypotheses().size() > lim.max_hypotheses)
    throw CapExceeded("hypotheses", inst.hypotheses().size(), lim.max_hypotheses);
  auto names = inst.knowledge().universe();
  collect_vars(inst.query(), names);
  Universe u = checked_universe(names, lim);
  CompiledAbduction c{u, model_set(inst.knowledge(), u), compile(inst.query(), u), {}, {}};
  for (const auto& a : inst.hypotheses()) {
    c.hyp_bits.push_back(u.bit_of(a));
    c.hyp_names.push_back(a);
  }
  return c;
}

// pos/neg are bitmasks over hypothesis indices.
struct LiteralSet {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
};

inline ModelSet restrict(const CompiledAbduction& c, const ModelSet& base, LiteralSet e) {
  Code mask = 0, value = 0;
  for (std::size_t i = 0; i < c.hyp_bits.size(); ++i) {
    if (e.pos >> i & 1U) {
      mask |= c.hyp_bits[i];
      value |= c.hyp_bits[i];
    }
    if (e.neg >> i & 1U) mask |= c.hyp_bits[i];
  }
  return base & ModelSet::cube(c.universe.size(), mask, value);
}

inline bool explains(const CompiledAbduction& c, LiteralSet e) {
  const ModelSet m = restrict(c, c.knowledge, e);
  return !m.empty() && m.subset_of(c.query);
}

inline Explanation to_explanation(const CompiledAbduction& c, LiteralSet e) {
  Explanation out;
  for (std::size_t i = 0; i < c.hyp_names.size(); ++i) {
    if (e.pos >> i & 1U) out.literals.push_back({c.hyp_names[i], true});
    if (e.neg >> i & 1U) out.literals.push_back({c.hyp_names[i], false});
  }
  return out;
}

// Explanations extending `e` with choices for hypotheses from index i on.
// Inconsistent partial sets are cut: adding literals keeps them inconsistent.
inline void enumerate(const CompiledAbduction& c, bool literal_mode, std::size_t i, LiteralSet e, const ModelSet& ms,
                      std::vector<LiteralSet>& out) {
  if (ms.empty()) return;
  if (i == c.hyp_bits.size()) {
    if (ms.subset_of(c.query)) out.push_back(e);
    return;
  }
  enumerate(c, literal_mode, i + 1, e, ms, out);
  const std::size_t n = c.universe.size();
  enumerate(c, literal_mode, i + 1, {e.pos | (1U << i), e.neg}, ms & ModelSet::cube(n, c.hyp_bits[i], c.hyp_bits[i]),
            out);
  if (literal_mode)
    enumerate(c, literal_mode, i + 1, {e.pos, e.neg | (1U << i)}, ms & ModelSet::cube(n, c.hyp_bits[i], 0), out);
}

inline std::vector<LiteralSet> all_explanations(const CompiledAbduction& c, bool literal_mode, unsigned threads) {
  // One task per choice for the first hypothesis.
  if (c.hyp_bits.empty()) {
    std::vector<LiteralSet> out;
    enumerate(c, literal_mode, 0, {}, c.knowledge, out);
    return out;
  }
  const std::size_t n = c.universe.size();
  const std::size_t tasks = literal_mode ? 3 : 2;
  auto parts = parallel_map(tasks, threads, [&](std::size_t t) {
    std::vector<LiteralSet> out;
    const Code b = c.hyp_bits[0];
    if (t == 0) enumerate(c, literal_mode, 1, {}, c.knowledge, out);
    if (t == 1) enumerate(c, literal_mode, 1, {1U, 0U}, c.knowledge & ModelSet::cube(n, b, b), out);
    if (t == 2) enumerate(c, literal_mode, 1, {0U, 1U}, c.knowledge & ModelSet::cube(n, b, 0), out);
    return out;
  });
  std::vector<LiteralSet> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

inline bool is_minimal(const CompiledAbduction& c, LiteralSet e) {
  for (std::uint32_t r = e.pos; r; r &= r - 1)
    if (explains(c, {e.pos & ~(r & (~r + 1)), e.neg})) return false;
  for (std::uint32_t r = e.neg; r; r &= r - 1)
    if (explains(c, {e.pos, e.neg & ~(r & (~r + 1))})) return false;
  return true;
}

inline std::vector<Explanation> sorted_explanations(const CompiledAbduction& c, const std::vector<LiteralSet>& es) {
  std::vector<Explanation> out;
  for (auto e : es) out.push_back(to_explanation(c, e));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Γ ∪ E is consistent and entails the query.
inline bool is_explanation(const AbductionInstance& inst, const Explanation& e, const Limits& lim = {}) {
  const auto c = detail::compile_abduction(inst, lim);
  detail::LiteralSet ls;
  for (const auto& l : e.literals) {
    const auto it = std::find(c.hyp_names.begin(), c.hyp_names.end(), l.var);
    if (it == c.hyp_names.end()) throw InvalidInput("literal over '" + l.var + "' is not a hypothesis");
    if (!l.positive && inst.mode() == ExplanationMode::Positive)
      throw InvalidInput("positive mode admits no negative literals");
    const auto i = static_cast<std::size_t>(it - c.hyp_names.begin());
    (l.positive ? ls.pos : ls.neg) |= 1U << i;
  }
  return detail::explains(c, ls);
}

inline std::vector<Explanation> explanations(const AbductionInstance& inst, const Limits& lim = {}) {
  const auto c = detail::compile_abduction(inst, lim);
  return detail::sorted_explanations(c, detail::all_explanations(c, inst.mode() == ExplanationMode::Literals, lim.threads));
}

inline bool explanation_exists(const AbductionInstance& inst, const Limits& lim = {}) {
  return !explanations(inst, lim).empty();
}

inline std::vector<Explanation> subset_minimal_explanations(const AbductionInstance& inst, const Limits& lim = {}) {
  const auto c = detail::compile_abduction(inst, lim);
  std::vector<detail::LiteralSet> mins;
  for (auto e : detail::all_explanations(c, inst.mode() == ExplanationMode::Literals, lim.threads))
    if (detail::is_minimal(c, e)) mins.push_back(e);
  return detail::sorted_explanations(c, mins);
}

inline std::size_t count_explanations(const AbductionInstance& inst, const Limits& lim = {}) {
  const auto c = detail::compile_abduction(inst, lim);
  return detail::all_explanations(c, inst.mode() == ExplanationMode::Literals, lim.threads).size();
}

inline std::size_t count_subset_minimal(const AbductionInstance& inst, const Limits& lim = {}) {
  return subset_minimal_explanations(inst, lim).size();
}

}  // namespace nmr
