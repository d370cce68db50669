#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nmr/error.hpp"
#include "nmr/formula.hpp"
#include "nmr/limits.hpp"
#include "nmr/model_set.hpp"
#include "nmr/post_lattice.hpp"
#include "nmr/theory.hpp"

namespace nmr {

// P is minimized, Q is fixed, Z varies freely.
struct VarPartition {
  std::set<std::string> p, q, z;

  std::set<std::string> universe() const {
    std::set<std::string> u = p;
    u.insert(q.begin(), q.end());
    u.insert(z.begin(), z.end());
    return u;
  }

  // Q is whatever of `universe` is in neither P nor Z.
  static VarPartition with_remainder(const std::set<std::string>& universe, std::set<std::string> p,
                                     std::set<std::string> z) {
    VarPartition part{std::move(p), {}, std::move(z)};
    for (const auto& v : part.p)
      if (part.z.count(v)) throw InvalidInput("proposition '" + v + "' is in both P and Z");
    for (const auto& v : universe)
      if (!part.p.count(v) && !part.z.count(v)) part.q.insert(v);
    return part;
  }
};

class CircProblem {
 public:
  CircProblem(Theory theory, VarPartition part) : theory_(std::move(theory)), part_(std::move(part)) {
    std::size_t total = part_.p.size() + part_.q.size() + part_.z.size();
    if (part_.universe().size() != total) throw InvalidInput("P, Q and Z must be pairwise disjoint");
    for (const auto& v : theory_.universe())
      if (!part_.universe().count(v)) throw InvalidInput("proposition '" + v + "' is not in P, Q or Z");
    theory_.declare(part_.universe());
  }

  const Theory& theory() const noexcept { return theory_; }
  const VarPartition& partition() const noexcept { return part_; }
  Universe universe() const { return Universe(theory_.universe()); }

 private:
  Theory theory_;
  VarPartition part_;
};

namespace detail {

struct PreorderMasks {
  Code p = 0;
  Code q = 0;
};

inline PreorderMasks masks_of(const VarPartition& part, const Universe& u) { return {u.mask_of(part.p), u.mask_of(part.q)}; }

// Packs the bits of `c` selected by `mask` into the low bits, most significant first.
inline std::uint32_t compress(Code c, Code mask) {
  std::uint32_t out = 0;
  for (int b = 31; b >= 0; --b)
    if (mask >> b & 1U) out = (out << 1) | ((c >> b) & 1U);
  return out;
}

// Minimal elements of `models`: no other model has a strictly smaller P-part with the same Q-part.
inline ModelSet minimal_subset(const ModelSet& models, const PreorderMasks& m) {
  const int np = std::popcount(m.p), nq = std::popcount(m.q);
  const std::size_t pw = std::size_t{1} << np;
  std::vector<std::uint8_t> below((std::size_t{1} << nq) * pw, 0);
  models.for_each([&](Code c) { below[compress(c, m.q) * pw + compress(c, m.p)] = 1; });
  // Subset closure per Q-block: below[q][s] = some model has P-part ⊆ s.
  for (std::size_t qi = 0; qi < (std::size_t{1} << nq); ++qi) {
    auto* blk = below.data() + qi * pw;
    for (int i = 0; i < np; ++i)
      for (std::size_t s = 0; s < pw; ++s)
        if (s >> i & 1U) blk[s] |= blk[s ^ (std::size_t{1} << i)];
  }
  ModelSet out(models.nvars());
  models.for_each([&](Code c) {
    const std::size_t s = compress(c, m.p);
    const auto* blk = below.data() + compress(c, m.q) * pw;
    for (int i = 0; i < np; ++i)
      if ((s >> i & 1U) && blk[s ^ (std::size_t{1} << i)]) return;
    out.set(c);
  });
  return out;
}

inline Code code_of(const Valuation& sigma, const Universe& u) {
  for (const auto& n : u.names())
    if (!sigma.count(n)) throw UnboundProposition(n);
  return u.encode(sigma);
}

}  // namespace detail

// σ ≤ σ' iff σ∩P ⊆ σ'∩P and σ∩Q = σ'∩Q.
inline bool leq_pz(const Valuation& s, const Valuation& t, const VarPartition& part) {
  auto val = [](const Valuation& v, const std::string& n) {
    auto it = v.find(n);
    if (it == v.end()) throw UnboundProposition(n);
    return it->second;
  };
  for (const auto& x : part.z) {
    val(s, x);
    val(t, x);
  }
  for (const auto& x : part.p)
    if (val(s, x) && !val(t, x)) return false;
  for (const auto& x : part.q)
    if (val(s, x) != val(t, x)) return false;
  return true;
}

inline bool strictly_less(const Valuation& s, const Valuation& t, const VarPartition& part) {
  return leq_pz(s, t, part) && !leq_pz(t, s, part);
}

inline ModelSet minimal_model_set(const CircProblem& prob, const Limits& lim = {}) {
  const Universe u = checked_universe(prob.theory().universe(), lim);
  return detail::minimal_subset(model_set(prob.theory(), u), detail::masks_of(prob.partition(), u));
}

// Codes over prob.universe(), ascending.
inline std::vector<Code> minimal_models(const CircProblem& prob, const Limits& lim = {}) {
  return minimal_model_set(prob, lim).codes();
}

inline std::size_t count_minimal_models(const CircProblem& prob, const Limits& lim = {}) {
  return minimal_model_set(prob, lim).count();
}

inline bool is_circ_model(const CircProblem& prob, const Valuation& sigma, const Limits& lim = {}) {
  const Universe u = checked_universe(prob.theory().universe(), lim);
  const Code c = detail::code_of(sigma, u);
  const ModelSet ms = model_set(prob.theory(), u);
  if (!ms.test(c)) return false;
  const auto m = detail::masks_of(prob.partition(), u);
  // Any strictly smaller model witnesses non-minimality.
  bool smaller = false;
  ms.for_each([&](Code d) {
    if ((d & m.q) == (c & m.q) && (d & m.p) != (c & m.p) && ((d & m.p) & ~(c & m.p)) == 0) smaller = true;
  });
  return !smaller;
}

// For theories over monotone functions: σ is minimal iff no σ^i is a model,
// where σ^i sets Z to 1 and one P-proposition true in σ to 0.
inline bool monotone_circ_check(const CircProblem& prob, const Valuation& sigma, const Limits& lim = {}) {
  std::map<std::string, FunctionPtr> fns;
  for (const auto& f : prob.theory().formulas()) collect_functions(f, fns);
  std::vector<BooleanFunction> fs;
  for (const auto& [n, fn] : fns) fs.push_back(*fn);
  if (!clone_leq(clone_of(fs, lim), Clone::fixed(CloneId::M)))
    throw InvalidInput("monotone_circ_check requires monotone functions only");
  auto holds = [&](const Valuation& v) {
    for (const auto& f : prob.theory().formulas())
      if (!evaluate(f, v)) return false;
    return true;
  };
  for (const auto& n : prob.theory().universe())
    if (!sigma.count(n)) throw UnboundProposition(n);
  if (!holds(sigma)) throw InvalidInput("assignment is not a model of the theory");
  for (const auto& x : prob.partition().p) {
    if (!sigma.at(x)) continue;
    Valuation si = sigma;
    for (const auto& zv : prob.partition().z) si[zv] = true;
    si[x] = false;
    if (holds(si)) return false;
  }
  return true;
}

// Every circumscriptive model satisfies φ.
inline bool circ_entails(const CircProblem& prob, const Formula& phi, const Limits& lim = {}) {
  for (const auto& v : vars(phi))
    if (!prob.theory().universe().count(v)) throw InvalidInput("query proposition '" + v + "' is not in P, Q or Z");
  const Universe u = checked_universe(prob.theory().universe(), lim);
  return minimal_model_set(prob, lim).subset_of(compile(phi, u));
}

// φ ∧ ⋀ (x ⊕ x') over fresh x', all propositions minimized. Minimal models
// correspond one-to-one with models of φ.
inline CircProblem sat_to_minmodels(const Formula& phi) {
  auto taken = vars(phi);
  std::vector<Formula> parts{phi};
  for (const auto& x : vars(phi)) {
    const std::string y = fresh_name(x + "_y", taken);
    taken.insert(y);
    parts.push_back(make::exor(make::var(x), make::var(y)));
  }
  Theory t;
  t.add(make::conj_all(parts, make::constant(true)));
  t.declare(taken);
  return CircProblem(t, VarPartition{taken, {}, {}});
}

}  // namespace nmr
