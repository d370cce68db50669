#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nmr/cnf.hpp"
#include "nmr/error.hpp"
#include "nmr/formula.hpp"
#include "nmr/limits.hpp"
#include "nmr/model_set.hpp"
#include "nmr/parallel.hpp"
#include "nmr/post_lattice.hpp"
#include "nmr/schaefer.hpp"
#include "nmr/theory.hpp"

namespace nmr {

// premise : justification / conclusion
struct DefaultRule {
  Formula premise;
  Formula justification;
  Formula conclusion;

  friend bool operator==(const DefaultRule&, const DefaultRule&) = default;
};

class DefaultTheory {
 public:
  DefaultTheory() = default;
  DefaultTheory(Theory w, const std::vector<DefaultRule>& rules) : w_(std::move(w)) {
    for (const auto& r : rules) add_rule(r);
  }

  bool add_rule(const DefaultRule& r) {
    if (std::find(rules_.begin(), rules_.end(), r) != rules_.end()) return false;
    rules_.push_back(r);
    return true;
  }
  void add_fact(const Formula& f) { w_.add(f); }
  void declare(const std::string& v) { w_.declare(v); }

  const Theory& facts() const noexcept { return w_; }
  const std::vector<DefaultRule>& rules() const noexcept { return rules_; }

  std::set<std::string> universe() const {
    auto u = w_.universe();
    for (const auto& r : rules_) {
      collect_vars(r.premise, u);
      collect_vars(r.justification, u);
      collect_vars(r.conclusion, u);
    }
    return u;
  }

  std::vector<BooleanFunction> functions() const {
    std::map<std::string, FunctionPtr> fs;
    for (const auto& f : w_.formulas()) collect_functions(f, fs);
    for (const auto& r : rules_)
      for (const auto* f : {&r.premise, &r.justification, &r.conclusion}) collect_functions(*f, fs);
    std::vector<BooleanFunction> out;
    for (const auto& [name, fn] : fs) out.push_back(*fn);
    return out;
  }

  friend bool operator==(const DefaultTheory&, const DefaultTheory&) = default;

 private:
  Theory w_;
  std::vector<DefaultRule> rules_;
};

struct ExtensionWitness {
  std::vector<std::size_t> generating;  // rule indices, ascending
  Theory closure_base;                  // W plus the generating conclusions
  bool inconsistent = false;

  friend bool operator==(const ExtensionWitness&, const ExtensionWitness&) = default;
};

// Default theory whose facts and rule parts are constraint theories. An empty
// constraint theory stands for "true".
struct ConstraintDefaultRule {
  ConstraintTheory premise;
  ConstraintTheory justification;
  ConstraintTheory conclusion;
};

struct ConstraintDefaultTheory {
  ConstraintTheory facts;
  std::vector<ConstraintDefaultRule> rules;

  std::set<std::string> universe() const {
    auto u = facts.universe();
    for (const auto& r : rules)
      for (const auto* g : {&r.premise, &r.justification, &r.conclusion}) u.insert(g->universe().begin(), g->universe().end());
    return u;
  }
};

namespace detail {

using RuleMask = std::uint64_t;
inline constexpr std::size_t kMaxRuleMask = 64;

inline RuleMask rule_bit(std::size_t i) { return RuleMask{1} << i; }

struct CompiledDefaults {
  ModelSet facts;
  std::vector<ModelSet> premise, justification, conclusion;

  std::size_t size() const { return premise.size(); }
  RuleMask all() const { return size() == 64 ? ~RuleMask{0} : rule_bit(size()) - 1; }
};

struct Fixpoint {
  RuleMask fired = 0;
  ModelSet models;
};

inline void check_rule_count(std::size_t n, const Limits& lim) {
  if (n > lim.max_defaults) throw CapExceeded("default rules", n, lim.max_defaults);
  if (n > kMaxRuleMask) throw CapExceeded("default rules", n, kMaxRuleMask);
}

inline CompiledDefaults compile_defaults(const DefaultTheory& t, const Universe& u) {
  CompiledDefaults c{model_set(t.facts(), u), {}, {}, {}};
  // Shared subtrees are common (e.g. a single `1` premise), so reuse by node.
  std::vector<std::pair<const Formula*, const ModelSet*>> seen;
  auto add = [&](std::vector<ModelSet>& into, const Formula& f) {
    for (const auto& [g, m] : seen)
      if (g->same_node(f)) return into.push_back(*m);
    into.push_back(compile(f, u));
  };
  c.premise.reserve(t.rules().size());
  c.justification.reserve(t.rules().size());
  c.conclusion.reserve(t.rules().size());
  for (const auto& r : t.rules()) {
    add(c.premise, r.premise);
    seen.emplace_back(&r.premise, &c.premise.back());
    add(c.justification, r.justification);
    seen.emplace_back(&r.justification, &c.justification.back());
    add(c.conclusion, r.conclusion);
    seen.emplace_back(&r.conclusion, &c.conclusion.back());
  }
  return c;
}

inline CompiledDefaults compile_defaults(const ConstraintDefaultTheory& t, const Universe& u) {
  CompiledDefaults c{constraint_model_set(t.facts, u), {}, {}, {}};
  for (const auto& r : t.rules) {
    c.premise.push_back(constraint_model_set(r.premise, u));
    c.justification.push_back(constraint_model_set(r.justification, u));
    c.conclusion.push_back(constraint_model_set(r.conclusion, u));
  }
  return c;
}

// Least set of rules from `allowed` reachable by firing on entailed premises.
// Continues from `fp`, which must itself be reachable within `allowed`.
inline void extend_fixpoint(const CompiledDefaults& c, RuleMask allowed, Fixpoint& fp) {
  for (bool changed = true; changed;) {
    changed = false;
    for (RuleMask rest = allowed & ~fp.fired; rest; rest &= rest - 1) {
      const auto d = static_cast<std::size_t>(std::countr_zero(rest));
      if (fp.models.subset_of(c.premise[d])) {
        fp.fired |= rule_bit(d);
        fp.models &= c.conclusion[d];
        changed = true;
      }
    }
  }
}

inline Fixpoint least_fixpoint(const CompiledDefaults& c, RuleMask allowed) {
  Fixpoint fp{0, c.facts};
  extend_fixpoint(c, allowed, fp);
  return fp;
}

// Enumerates the sets J of rules with justification consistent with the
// extension. A J is kept iff the extension it generates agrees with J. `in`
// and `out` are decided rules; bounds on the final model set prune the rest.
class ExtensionSearch {
 public:
  explicit ExtensionSearch(const CompiledDefaults& c) : c_(c) {}

  void run(RuleMask in, RuleMask out, std::vector<Fixpoint>& found) const {
    RuleMask undecided = 0;
    Fixpoint lower{0, c_.facts};
    while (true) {
      undecided = c_.all() & ~in & ~out;
      extend_fixpoint(c_, in, lower);
      const ModelSet upper_models = least_fixpoint(c_, in | undecided).models;
      // The extension lies inside `big`, and it is consistent whenever W is.
      ModelSet big = lower.models;
      for (RuleMask r = out; r; r &= r - 1) big.subtract(c_.justification[std::countr_zero(r)]);
      if (big.empty() && !c_.facts.empty()) return;
      for (RuleMask r = in; r; r &= r - 1)
        if (!c_.justification[std::countr_zero(r)].intersects(big)) return;
      for (RuleMask r = out; r; r &= r - 1)
        if (c_.justification[std::countr_zero(r)].intersects(upper_models)) return;
      bool forced = false;
      for (RuleMask r = undecided; r; r &= r - 1) {
        const auto d = static_cast<std::size_t>(std::countr_zero(r));
        if (!c_.justification[d].intersects(big)) {
          out |= rule_bit(d);
          forced = true;
        } else if (c_.justification[d].intersects(upper_models) || (!c_.facts.empty() && big.subset_of(c_.justification[d]))) {
          in |= rule_bit(d);
          forced = true;
        }
      }
      if (!forced) break;
    }
    if (undecided == 0) {
      found.push_back(std::move(lower));
      return;
    }
    const RuleMask d = undecided & (~undecided + 1);
    run(in | d, out, found);
    run(in, out | d, found);
  }

 private:
  const CompiledDefaults& c_;
};

inline std::vector<Fixpoint> solve(const CompiledDefaults& c, unsigned threads) {
  // Fix the first few rules per task; tasks partition the search space.
  const std::size_t split = std::min<std::size_t>(c.size(), threads > 1 ? 4 : 0);
  const std::size_t tasks = std::size_t{1} << split;
  const RuleMask head = split == 0 ? 0 : rule_bit(split) - 1;
  auto parts = parallel_map(tasks, threads, [&](std::size_t t) {
    std::vector<Fixpoint> found;
    const RuleMask in = static_cast<RuleMask>(t) & head;
    ExtensionSearch(c).run(in, head & ~in, found);
    return found;
  });
  std::vector<Fixpoint> all;
  for (auto& p : parts)
    for (auto& f : p) all.push_back(std::move(f));
  return all;
}

inline std::vector<std::size_t> indices(RuleMask m) {
  std::vector<std::size_t> out;
  for (; m; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  return out;
}

// Lexicographic order of the ascending index lists of two masks.
inline bool mask_less(RuleMask a, RuleMask b) {
  const RuleMask x = a ^ b;
  if (!x) return false;
  const int i = std::countr_zero(x);
  const RuleMask above = ~RuleMask{0} << i << 1;
  return (a >> i & 1) ? (b & above) != 0 : (a & above) == 0;
}

inline RuleMask to_mask(const std::vector<std::size_t>& s, std::size_t n) {
  RuleMask m = 0;
  for (auto i : s) {
    if (i >= n) throw InvalidInput("rule index " + std::to_string(i) + " out of range");
    m |= rule_bit(i);
  }
  return m;
}

inline ExtensionWitness make_witness(const DefaultTheory& t, const Fixpoint& fp) {
  ExtensionWitness w{indices(fp.fired), t.facts(), fp.models.empty()};
  for (auto i : w.generating) w.closure_base.add(t.rules()[i].conclusion);
  return w;
}

inline bool witness_order(const ExtensionWitness& a, const ExtensionWitness& b) { return a.generating < b.generating; }

struct Solved {
  Universe universe;
  std::vector<Fixpoint> extensions;  // ordered by generating index vector
};

inline Solved solve_theory(const DefaultTheory& t, std::set<std::string> extra, const Limits& lim,
                           bool ordered = true) {
  check_rule_count(t.rules().size(), lim);
  auto names = t.universe();
  names.insert(extra.begin(), extra.end());
  Universe u = checked_universe(names, lim);
  auto exts = solve(compile_defaults(t, u), lim.threads);
  if (ordered)
    std::sort(exts.begin(), exts.end(), [](const Fixpoint& a, const Fixpoint& b) { return mask_less(a.fired, b.fired); });
  return {std::move(u), std::move(exts)};
}

}  // namespace detail

// Rules fire from W in stages when their premise is entailed and their
// justification is consistent with the candidate E = W ∪ γ(S). S is a
// generating set iff exactly the rules of S fire.
inline bool is_stable_extension(const DefaultTheory& t, const std::vector<std::size_t>& s, const Limits& lim = {}) {
  detail::check_rule_count(t.rules().size(), lim);
  const Universe u = checked_universe(t.universe(), lim);
  const auto c = detail::compile_defaults(t, u);
  const auto mask = detail::to_mask(s, c.size());
  ModelSet e = c.facts;
  for (auto i : detail::indices(mask)) e &= c.conclusion[i];
  detail::RuleMask applicable = 0;
  for (std::size_t d = 0; d < c.size(); ++d)
    if (c.justification[d].intersects(e)) applicable |= detail::rule_bit(d);
  return detail::least_fixpoint(c, applicable).fired == mask;
}

inline std::vector<ExtensionWitness> stable_extensions(const DefaultTheory& t, const Limits& lim = {}) {
  const auto solved = detail::solve_theory(t, {}, lim);
  std::vector<ExtensionWitness> out;
  for (const auto& fp : solved.extensions) out.push_back(detail::make_witness(t, fp));
  return out;
}

inline std::size_t count_stable_extensions(const DefaultTheory& t, const Limits& lim = {}) {
  return detail::solve_theory(t, {}, lim, false).extensions.size();
}

inline bool credulous(const DefaultTheory& t, const Formula& phi, const Limits& lim = {}) {
  std::set<std::string> extra;
  collect_vars(phi, extra);
  const auto solved = detail::solve_theory(t, extra, lim);
  const ModelSet q = compile(phi, solved.universe);
  return std::any_of(solved.extensions.begin(), solved.extensions.end(),
                     [&](const detail::Fixpoint& fp) { return fp.models.subset_of(q); });
}

inline bool skeptical(const DefaultTheory& t, const Formula& phi, const Limits& lim = {}) {
  std::set<std::string> extra;
  collect_vars(phi, extra);
  const auto solved = detail::solve_theory(t, extra, lim);
  const ModelSet q = compile(phi, solved.universe);
  return std::all_of(solved.extensions.begin(), solved.extensions.end(),
                     [&](const detail::Fixpoint& fp) { return fp.models.subset_of(q); });
}

// Theories over monotone functions: fire every rule whose premise is entailed
// and whose justification holds under all-ones. The result is the unique
// extension unless a fired conclusion is unsatisfiable.
inline std::optional<ExtensionWitness> monotone_unique_extension(const DefaultTheory& t, const Limits& lim = {}) {
  if (!clone_leq(clone_of(t.functions(), lim), Clone::fixed(CloneId::M)))
    throw InvalidInput("monotone_unique_extension requires monotone functions only");
  const Universe u = checked_universe(t.universe(), lim);
  Valuation ones;
  for (const auto& n : u.names()) ones[n] = true;

  ExtensionWitness w{{}, t.facts(), false};
  ModelSet g = model_set(t.facts(), u);
  if (g.empty()) {
    w.inconsistent = true;
    return w;
  }
  std::vector<bool> fired(t.rules().size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t d = 0; d < t.rules().size(); ++d) {
      const auto& r = t.rules()[d];
      if (fired[d] || !evaluate(r.justification, ones) || !g.subset_of(compile(r.premise, u))) continue;
      if (!evaluate(r.conclusion, ones)) return std::nullopt;
      fired[d] = true;
      g &= compile(r.conclusion, u);
      changed = true;
    }
  }
  for (std::size_t d = 0; d < fired.size(); ++d)
    if (fired[d]) {
      w.generating.push_back(d);
      w.closure_base.add(t.rules()[d].conclusion);
    }
  return w;
}

// (∅, D) with 1:x/x and 1:¬x/¬x per variable and ¬l1:¬l2/l3 per clause.
inline DefaultTheory sat_to_default(const Cnf& phi) {
  if (!phi.is_3cnf()) throw InvalidInput("sat_to_default expects exactly three literals per clause");
  DefaultTheory t;
  const Formula one = make::constant(true);
  std::map<std::string, std::pair<Formula, Formula>> lit;  // var -> (x, ¬x), shared across rules
  for (const auto& v : phi.vars()) {
    const Formula x = make::var(v), nx = make::neg(x);
    lit.emplace(v, std::pair{x, nx});
    t.add_rule({one, x, x});
    t.add_rule({one, nx, nx});
  }
  auto node = [&](const Literal& l) {
    const auto& [x, nx] = lit.at(l.var);
    return l.positive ? x : nx;
  };
  for (const auto& c : phi.clauses)
    t.add_rule({node(c[0].complement()), node(c[1].complement()), node(c[2])});
  return t;
}

// ---- Constraint form -------------------------------------------------------

inline Formula constraint_formula(const ConstraintTheory& g) {
  return make::conj_all(constraint_to_theory(g).formulas(), make::constant(true));
}

// The same theory with each constraint part replaced by its conjunction of
// characteristic-function applications.
inline DefaultTheory bridge(const ConstraintDefaultTheory& t) {
  DefaultTheory out(constraint_to_theory(t.facts), {});
  for (const auto& r : t.rules)
    out.add_rule({constraint_formula(r.premise), constraint_formula(r.justification), constraint_formula(r.conclusion)});
  for (const auto& v : t.universe()) out.declare(v);
  return out;
}

// Generating sets of the extensions, solved directly on relations.
inline std::vector<std::vector<std::size_t>> stable_extension_sets(const ConstraintDefaultTheory& t,
                                                                   const Limits& lim = {}) {
  detail::check_rule_count(t.rules.size(), lim);
  const Universe u = checked_universe(t.universe(), lim);
  std::vector<std::vector<std::size_t>> out;
  for (const auto& fp : detail::solve(detail::compile_defaults(t, u), lim.threads)) out.push_back(detail::indices(fp.fired));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace nmr
