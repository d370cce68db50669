#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nmr/error.hpp"
#include "nmr/formula.hpp"
#include "nmr/limits.hpp"
#include "nmr/model_set.hpp"
#include "nmr/parallel.hpp"
#include "nmr/parser.hpp"
#include "nmr/theory.hpp"

namespace nmr {

// Autoepistemic theories reuse Theory; members may contain Belief nodes.
using AETheory = Theory;

// L-prefixed subformulas in first-occurrence preorder, structurally deduplicated.
inline std::vector<Formula> l_subformulas(const AETheory& sigma) {
  std::vector<Formula> out;
  std::set<Formula> seen;
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    if (f.is_belief() && seen.insert(f).second) out.push_back(f);
    for (const auto& a : f.args()) walk(a);
  };
  for (const auto& f : sigma.formulas()) walk(f);
  return out;
}

// Sign map over SF_L: positive means Lψ ∈ Λ, negative means ¬Lψ ∈ Λ.
class FullSet {
 public:
  FullSet() = default;
  FullSet(std::vector<Formula> atoms, std::vector<bool> signs) : atoms_(std::move(atoms)), signs_(std::move(signs)) {
    if (atoms_.size() != signs_.size()) throw InvalidInput("sign map must cover every L-subformula exactly once");
    for (std::size_t i = 0; i < atoms_.size(); ++i) index_.emplace(atoms_[i], i);
  }

  // Atom i gets bit (k-1-i) of `code`, so atom 0 is the most significant.
  static FullSet from_code(std::vector<Formula> atoms, std::uint64_t code) {
    const std::size_t k = atoms.size();
    std::vector<bool> signs(k);
    for (std::size_t i = 0; i < k; ++i) signs[i] = (code >> (k - 1 - i)) & 1U;
    return FullSet(std::move(atoms), std::move(signs));
  }

  const std::vector<Formula>& atoms() const noexcept { return atoms_; }
  const std::vector<bool>& signs() const noexcept { return signs_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  std::optional<bool> sign_of(const Formula& belief) const {
    auto it = index_.find(belief);
    if (it == index_.end()) return std::nullopt;
    return signs_[it->second];
  }

  BeliefLookup lookup() const {
    return [this](const Formula& f) { return sign_of(f); };
  }

  // "+L(x), -L(y)" style rendering.
  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (i) s += ", ";
      s += (signs_[i] ? "+" : "-") + to_string(atoms_[i]);
    }
    return s;
  }

  friend bool operator==(const FullSet& a, const FullSet& b) { return a.atoms_ == b.atoms_ && a.signs_ == b.signs_; }

 private:
  std::vector<Formula> atoms_;
  std::vector<bool> signs_;
  std::map<Formula, std::size_t> index_;
};

namespace detail {

inline void check_beliefs_known(const Formula& psi, const FullSet& lambda) {
  if (psi.is_belief()) {
    if (!lambda.sign_of(psi)) throw InvalidInput("L-atom " + to_string(psi) + " does not occur in the theory");
    return;
  }
  for (const auto& a : psi.args()) check_beliefs_known(a, lambda);
}

// Objective models of Σ with each maximal Belief node fixed by Λ.
inline ModelSet objective_models(const AETheory& sigma, const FullSet& lambda, const Universe& u) {
  const BeliefLookup look = lambda.lookup();
  return model_set(sigma, u, &look);
}

inline bool entails_under(const ModelSet& base, const FullSet& lambda, const Formula& psi, const Universe& u) {
  const BeliefLookup look = lambda.lookup();
  return base.subset_of(compile(psi, u, &look));
}

inline bool full_given(const AETheory& sigma, const FullSet& lambda, const Universe& u) {
  const ModelSet base = objective_models(sigma, lambda, u);
  for (std::size_t i = 0; i < lambda.size(); ++i)
    if (entails_under(base, lambda, lambda.atoms()[i].operand(), u) != lambda.signs()[i]) return false;
  return true;
}

inline void check_atoms(std::size_t k, const Limits& lim) {
  if (k > lim.max_belief_atoms) throw CapExceeded("belief atoms", k, lim.max_belief_atoms);
  if (k > 62) throw CapExceeded("belief atoms", k, 62);
}

}  // namespace detail

// Σ ∪ Λ ⊨ ψ with maximal L-formulas read as atoms.
inline bool objective_entails(const AETheory& sigma, const FullSet& lambda, const Formula& psi, const Limits& lim = {}) {
  detail::check_beliefs_known(psi, lambda);
  auto names = sigma.universe();
  collect_vars(psi, names);
  const Universe u = checked_universe(names, lim);
  return detail::entails_under(detail::objective_models(sigma, lambda, u), lambda, psi, u);
}

inline bool is_full_set(const AETheory& sigma, const FullSet& lambda, const Limits& lim = {}) {
  if (lambda.atoms() != l_subformulas(sigma)) throw InvalidInput("sign map does not match the L-subformulas of the theory");
  return detail::full_given(sigma, lambda, checked_universe(sigma.universe(), lim));
}

// All Σ-full sets, in ascending sign-code order.
inline std::vector<FullSet> stable_expansions(const AETheory& sigma, const Limits& lim = {}) {
  const auto atoms = l_subformulas(sigma);
  detail::check_atoms(atoms.size(), lim);
  const Universe u = checked_universe(sigma.universe(), lim);
  const std::uint64_t total = std::uint64_t{1} << atoms.size();
  const std::uint64_t chunk = 256;
  const std::size_t tasks = static_cast<std::size_t>((total + chunk - 1) / chunk);
  auto parts = parallel_map(tasks, lim.threads, [&](std::size_t t) {
    std::vector<FullSet> found;
    const std::uint64_t end = std::min(total, (t + 1) * chunk);
    for (std::uint64_t code = t * chunk; code < end; ++code) {
      FullSet lambda = FullSet::from_code(atoms, code);
      if (detail::full_given(sigma, lambda, u)) found.push_back(std::move(lambda));
    }
    return found;
  });
  std::vector<FullSet> out;
  for (auto& p : parts)
    for (auto& f : p) out.push_back(std::move(f));
  return out;
}

inline std::size_t count_expansions(const AETheory& sigma, const Limits& lim = {}) {
  return stable_expansions(sigma, lim).size();
}

inline bool expansion_exists(const AETheory& sigma, const Limits& lim = {}) {
  return count_expansions(sigma, lim) > 0;
}

// Full sets whose expansion is the inconsistent one (every L-atom positive, Σ unsatisfiable).
inline bool is_inconsistent_expansion(const AETheory& sigma, const FullSet& lambda, const Limits& lim = {}) {
  return detail::objective_models(sigma, lambda, checked_universe(sigma.universe(), lim)).empty();
}

inline bool expansion_member(const AETheory& sigma, const FullSet& lambda, const Formula& phi, const Limits& lim = {}) {
  return objective_entails(sigma, lambda, phi, lim);
}

inline bool credulous(const AETheory& sigma, const Formula& phi, const Limits& lim = {}) {
  for (const auto& lambda : stable_expansions(sigma, lim))
    if (expansion_member(sigma, lambda, phi, lim)) return true;
  return false;
}

inline bool skeptical(const AETheory& sigma, const Formula& phi, const Limits& lim = {}) {
  for (const auto& lambda : stable_expansions(sigma, lim))
    if (!expansion_member(sigma, lambda, phi, lim)) return false;
  return true;
}

// Removes 1 as in constant elimination for plain theories, then replaces 0 by L(f) for a fresh f.
inline AETheory eliminate_constants(const AETheory& sigma) {
  const AETheory ones_gone = eliminate_constant_one(sigma);
  bool found = false;
  for (const auto& f : ones_gone.formulas())
    rewrite(f, [&](const Formula& n) {
      if (n.is_constant(false)) found = true;
      return n;
    });
  if (!found) return ones_gone;
  const Formula lf = make::bel(make::var(fresh_name("f", ones_gone.universe())));
  AETheory out;
  out.declare(ones_gone.universe());
  for (const auto& f : ones_gone.formulas())
    out.add(rewrite(f, [&](const Formula& n) { return n.is_constant(false) ? lf : n; }));
  return out;
}

// ---- QBF reductions --------------------------------------------------------

// ∃ exists ∀ forall matrix
struct Qbf {
  std::vector<std::string> exists;
  std::vector<std::string> forall;
  Formula matrix;
};

namespace detail {

inline void check_qbf(const Qbf& q) {
  std::set<std::string> bound;
  for (const auto* block : {&q.exists, &q.forall})
    for (const auto& v : *block)
      if (!bound.insert(v).second) throw InvalidInput("variable '" + v + "' is quantified twice");
  if (has_belief(q.matrix)) throw InvalidInput("QBF matrix must be propositional");
  for (const auto& v : vars(q.matrix))
    if (!bound.count(v)) throw InvalidInput("matrix variable '" + v + "' is not quantified");
}

inline bool is_nnf(const Formula& f) {
  if (f.is_prop()) return true;
  if (!f.is_apply()) return false;
  const auto& name = f.function()->name();
  if (name == "not") return f.args()[0].is_prop();
  if (name == "and" || name == "or") return is_nnf(f.args()[0]) && is_nnf(f.args()[1]);
  return false;
}

}  // namespace detail

// {L(x) <-> x | x ∃-bound} ∪ {L(matrix)}
inline AETheory qbf_to_ael(const Qbf& q) {
  detail::check_qbf(q);
  AETheory out;
  for (const auto& x : q.exists) out.add(make::equiv(make::bel(make::var(x)), make::var(x)));
  out.add(make::bel(q.matrix));
  for (const auto* block : {&q.exists, &q.forall}) out.declare(std::set<std::string>(block->begin(), block->end()));
  return out;
}

// Negation-free variant: each ¬v becomes a fresh v', and
// Σ = {L(matrix')} ∪ {L(x) | x', x | L(x') | x ∃-bound} ∪ {y | y' | y ∀-bound}.
inline AETheory qbf_to_monotone_ael(const Qbf& q) {
  detail::check_qbf(q);
  if (!detail::is_nnf(q.matrix)) throw InvalidInput("matrix must be in negation normal form over and, or, not");
  std::set<std::string> taken(q.exists.begin(), q.exists.end());
  taken.insert(q.forall.begin(), q.forall.end());
  std::map<std::string, std::string> primed;
  for (const auto* block : {&q.exists, &q.forall})
    for (const auto& v : *block) {
      primed[v] = fresh_name(v + "_n", taken);
      taken.insert(primed[v]);
    }
  const Formula m = rewrite(q.matrix, [&](const Formula& n) {
    if (n.is_apply() && n.function()->name() == "not") return make::var(primed.at(n.args()[0].name()));
    return n;
  });
  AETheory out;
  out.add(make::bel(m));
  for (const auto& x : q.exists) {
    const Formula xv = make::var(x), xp = make::var(primed.at(x));
    out.add(make::disj(make::bel(xv), xp));
    out.add(make::disj(xv, make::bel(xp)));
  }
  for (const auto& y : q.forall) out.add(make::disj(make::var(y), make::var(primed.at(y))));
  return out;
}

}  // namespace nmr
