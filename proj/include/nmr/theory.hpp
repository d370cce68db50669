#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nmr/formula.hpp"
#include "nmr/limits.hpp"
#include "nmr/model_set.hpp"
#include "nmr/parser.hpp"

namespace nmr {

// Ordered, duplicate-free formula set over a declared universe.
class Theory {
 public:
  Theory() = default;
  explicit Theory(const std::vector<Formula>& fs, std::set<std::string> extra_universe = {})
      : universe_(std::move(extra_universe)) {
    for (const auto& f : fs) add(f);
  }

  // Returns false when an equal formula is already present.
  bool add(const Formula& f) {
    if (std::find(formulas_.begin(), formulas_.end(), f) != formulas_.end()) return false;
    formulas_.push_back(f);
    collect_vars(f, universe_);
    return true;
  }

  void declare(const std::string& v) { universe_.insert(v); }
  void declare(const std::set<std::string>& vs) { universe_.insert(vs.begin(), vs.end()); }

  const std::vector<Formula>& formulas() const noexcept { return formulas_; }
  const std::set<std::string>& universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return formulas_.size(); }
  bool empty() const noexcept { return formulas_.empty(); }

  friend bool operator==(const Theory&, const Theory&) = default;

 private:
  std::vector<Formula> formulas_;
  std::set<std::string> universe_;
};

inline std::set<std::string> vars(const Theory& t) {
  std::set<std::string> out;
  for (const auto& f : t.formulas()) collect_vars(f, out);
  return out;
}

inline Universe checked_universe(std::set<std::string> names, const Limits& lim) {
  lim.check_vars(names.size());
  return Universe(names);
}

// Conjunction of all members as a model set over `u`.
inline ModelSet model_set(const Theory& t, const Universe& u, const BeliefLookup* beliefs = nullptr) {
  ModelSet s(u.size(), true);
  for (const auto& f : t.formulas()) {
    s &= compile(f, u, beliefs);
    if (s.empty()) break;
  }
  return s;
}

inline ModelSet model_set(const Theory& t, const Limits& lim = {}) {
  return model_set(t, checked_universe(t.universe(), lim));
}

// Satisfying assignments over the theory's universe, in canonical order.
inline std::vector<Code> models(const Theory& t, const Limits& lim = {}) { return model_set(t, lim).codes(); }

inline std::size_t count_models(const Theory& t, const Limits& lim = {}) { return model_set(t, lim).count(); }

inline bool is_consistent(const Theory& t, const Limits& lim = {}) { return !model_set(t, lim).empty(); }

// Every model of t over universe(t) ∪ Vars(phi) satisfies phi.
inline bool entails(const Theory& t, const Formula& phi, const Limits& lim = {}) {
  auto names = t.universe();
  collect_vars(phi, names);
  const Universe u = checked_universe(names, lim);
  return model_set(t, u).subset_of(compile(phi, u));
}

// Replaces every arity-0 function with value 1 by a fresh proposition t and adds t.
// Identity when no such constant occurs.
inline Theory eliminate_constant_one(const Theory& t) {
  bool found = false;
  auto mark = [&](const Formula& n) {
    if (n.is_constant(true)) found = true;
    return n;
  };
  for (const auto& f : t.formulas()) rewrite(f, mark);
  if (!found) return t;

  auto taken = t.universe();
  const std::string fresh = fresh_name("t", taken);
  const Formula tv = Formula::prop(fresh);
  Theory out;
  out.declare(t.universe());
  for (const auto& f : t.formulas())
    out.add(rewrite(f, [&](const Formula& n) { return n.is_constant(true) ? tv : n; }));
  out.add(tv);
  return out;
}

inline Theory parse_theory(const std::vector<std::string>& lines, const FunctionLibrary& lib = FunctionLibrary::standard()) {
  Theory t;
  for (const auto& l : lines) t.add(parse_formula(l, lib));
  return t;
}

}  // namespace nmr
