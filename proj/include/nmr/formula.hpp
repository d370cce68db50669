#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nmr/boolean_function.hpp"
#include "nmr/error.hpp"

namespace nmr {

enum class NodeKind { Proposition, Apply, Belief };

// Immutable formula tree. Copies share structure.
class Formula {
 public:
  static Formula prop(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Proposition;
    n->name = std::move(name);
    return Formula(std::move(n));
  }

  static Formula apply(FunctionPtr fn, std::vector<Formula> args) {
    if (!fn) throw InvalidInput("null function");
    if (args.size() != fn->arity())
      throw InvalidInput("function '" + fn->name() + "' expects " + std::to_string(fn->arity()) + " arguments, got " +
                         std::to_string(args.size()));
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Apply;
    n->fn = std::move(fn);
    n->args = std::move(args);
    return Formula(std::move(n));
  }

  static Formula belief(Formula arg) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Belief;
    n->args.push_back(std::move(arg));
    return Formula(std::move(n));
  }

  NodeKind kind() const noexcept { return node_->kind; }
  bool is_prop() const noexcept { return kind() == NodeKind::Proposition; }
  bool is_apply() const noexcept { return kind() == NodeKind::Apply; }
  bool is_belief() const noexcept { return kind() == NodeKind::Belief; }

  const std::string& name() const noexcept { return node_->name; }
  const FunctionPtr& function() const noexcept { return node_->fn; }
  const std::vector<Formula>& args() const noexcept { return node_->args; }
  const Formula& operand() const { return node_->args.front(); }

  // Arity-0 application whose single table entry is `value`.
  bool is_constant(bool value) const {
    return is_apply() && node_->fn->arity() == 0 && (*node_->fn)(0) == value;
  }

  bool same_node(const Formula& o) const noexcept { return node_ == o.node_; }

  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) { return compare(a, b); }
  friend bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }

 private:
  struct Node {
    NodeKind kind = NodeKind::Proposition;
    std::string name;
    FunctionPtr fn;
    std::vector<Formula> args;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::strong_ordering compare(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    switch (a.kind()) {
      case NodeKind::Proposition:
        return a.name() <=> b.name();
      case NodeKind::Apply: {
        if (a.function() == b.function()) break;
        const auto& fa = *a.function();
        const auto& fb = *b.function();
        if (auto c = fa.name() <=> fb.name(); c != 0) return c;
        if (auto c = fa.arity() <=> fb.arity(); c != 0) return c;
        if (auto c = fa.bits() <=> fb.bits(); c != 0) return c;
        break;
      }
      case NodeKind::Belief:
        break;
    }
    const auto& xs = a.args();
    const auto& ys = b.args();
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
      if (auto c = compare(xs[i], ys[i]); c != 0) return c;
    return xs.size() <=> ys.size();
  }

  std::shared_ptr<const Node> node_;
};

// Builders on top of the standard library functions.
namespace make {

inline FunctionPtr std_fn(const char* name) { return FunctionLibrary::standard().get(name); }

inline Formula var(std::string name) { return Formula::prop(std::move(name)); }
inline Formula constant(bool v) { return Formula::apply(std_fn(v ? "const1" : "const0"), {}); }
inline Formula neg(Formula a) { return Formula::apply(std_fn("not"), {std::move(a)}); }
inline Formula conj(Formula a, Formula b) { return Formula::apply(std_fn("and"), {std::move(a), std::move(b)}); }
inline Formula disj(Formula a, Formula b) { return Formula::apply(std_fn("or"), {std::move(a), std::move(b)}); }
inline Formula exor(Formula a, Formula b) { return Formula::apply(std_fn("xor"), {std::move(a), std::move(b)}); }
inline Formula equiv(Formula a, Formula b) { return Formula::apply(std_fn("eq"), {std::move(a), std::move(b)}); }
inline Formula impl(Formula a, Formula b) { return Formula::apply(std_fn("imp"), {std::move(a), std::move(b)}); }
inline Formula bel(Formula a) { return Formula::belief(std::move(a)); }

inline Formula literal(const std::string& v, bool positive) { return positive ? var(v) : neg(var(v)); }

// Left-nested fold; `empty` is returned for no operands.
inline Formula conj_all(const std::vector<Formula>& xs, Formula empty) {
  if (xs.empty()) return empty;
  Formula acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = conj(acc, xs[i]);
  return acc;
}
inline Formula disj_all(const std::vector<Formula>& xs, Formula empty) {
  if (xs.empty()) return empty;
  Formula acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = disj(acc, xs[i]);
  return acc;
}

}  // namespace make

inline void collect_vars(const Formula& f, std::set<std::string>& out) {
  if (f.is_prop()) {
    out.insert(f.name());
    return;
  }
  for (const auto& a : f.args()) collect_vars(a, out);
}

inline std::set<std::string> vars(const Formula& f) {
  std::set<std::string> out;
  collect_vars(f, out);
  return out;
}

inline void collect_functions(const Formula& f, std::map<std::string, FunctionPtr>& out) {
  if (f.is_apply()) out.emplace(f.function()->name(), f.function());
  for (const auto& a : f.args()) collect_functions(a, out);
}

inline bool has_belief(const Formula& f) {
  if (f.is_belief()) return true;
  for (const auto& a : f.args())
    if (has_belief(a)) return true;
  return false;
}

// Rebuild bottom-up; `fn` may return a replacement for a node (children already rewritten).
inline Formula rewrite(const Formula& f, const std::function<Formula(const Formula&)>& fn) {
  if (f.is_prop()) return fn(f);
  std::vector<Formula> args;
  args.reserve(f.args().size());
  bool changed = false;
  for (const auto& a : f.args()) {
    args.push_back(rewrite(a, fn));
    changed = changed || !args.back().same_node(a);
  }
  Formula rebuilt = !changed ? f : f.is_belief() ? Formula::belief(args.front()) : Formula::apply(f.function(), args);
  return fn(rebuilt);
}

inline Formula substitute(const Formula& f, const std::map<std::string, Formula>& by_name) {
  return rewrite(f, [&](const Formula& n) {
    if (n.is_prop()) {
      auto it = by_name.find(n.name());
      if (it != by_name.end()) return it->second;
    }
    return n;
  });
}

using Valuation = std::map<std::string, bool>;

// Bottom-up evaluation through each function's table. Belief nodes are rejected.
inline bool evaluate(const Formula& f, const Valuation& sigma) {
  switch (f.kind()) {
    case NodeKind::Proposition: {
      auto it = sigma.find(f.name());
      if (it == sigma.end()) throw UnboundProposition(f.name());
      return it->second;
    }
    case NodeKind::Apply: {
      std::size_t row = 0;
      for (const auto& a : f.args()) row = (row << 1) | (evaluate(a, sigma) ? 1U : 0U);
      return (*f.function())(row);
    }
    case NodeKind::Belief:
      break;
  }
  throw InvalidInput("belief operator cannot be evaluated propositionally");
}

// Returns a name not in `taken`: base, base_1, base_2, ...
inline std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (std::size_t k = 1;; ++k) {
    auto cand = base + "_" + std::to_string(k);
    if (!taken.count(cand)) return cand;
  }
}

}  // namespace nmr
