#pragma once

// Brute-force stable extensions: every candidate E (as a set of worlds) is
// run through the staged construction E_0 = W, E_{i+1} = Th(E_i) ∪ {γ | α ∈
// Th(E_i), ¬β ∉ E} and kept when the union equals E.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "nmr/default_logic.hpp"
#include "oracles.hpp"

namespace oracle {

using Worlds = std::set<std::size_t>;  // indices into all_valuations(names)

inline Worlds worlds_of(const std::vector<Formula>& fs, const std::vector<Valuation>& all) {
  Worlds out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (satisfies_all(fs, all[i])) out.insert(i);
  return out;
}

inline bool all_satisfy(const Worlds& w, const Formula& f, const std::vector<Valuation>& all) {
  for (auto i : w)
    if (!nmr::evaluate(f, all[i])) return false;
  return true;
}

inline bool some_satisfy(const Worlds& w, const Formula& f, const std::vector<Valuation>& all) {
  for (auto i : w)
    if (nmr::evaluate(f, all[i])) return true;
  return false;
}

// Model sets (over the theory universe) of all stable extensions, ascending.
inline std::vector<Worlds> default_extensions(const nmr::DefaultTheory& t) {
  const auto names = sorted(t.universe());
  const auto all = all_valuations(names);
  const std::size_t nw = all.size();
  std::vector<Worlds> out;
  for (std::uint64_t cand = 0; cand < (std::uint64_t{1} << nw); ++cand) {
    Worlds e;
    for (std::size_t i = 0; i < nw; ++i)
      if (cand >> i & 1U) e.insert(i);
    std::vector<Formula> stage = t.facts().formulas();
    std::vector<bool> used(t.rules().size(), false);
    for (bool grew = true; grew;) {
      grew = false;
      const Worlds cur = worlds_of(stage, all);
      for (std::size_t d = 0; d < t.rules().size(); ++d) {
        const auto& r = t.rules()[d];
        if (used[d]) continue;
        if (all_satisfy(cur, r.premise, all) && some_satisfy(e, r.justification, all)) {
          used[d] = true;
          stage.push_back(r.conclusion);
          grew = true;
        }
      }
    }
    if (worlds_of(stage, all) == e) out.push_back(e);
  }
  return out;
}

}  // namespace oracle
