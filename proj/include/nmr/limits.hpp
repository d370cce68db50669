#pragma once

#include <cstddef>

#include "nmr/error.hpp"

namespace nmr {

// Enumeration caps shared by every solver. Exceeding one raises CapExceeded.
struct Limits {
  std::size_t max_vars = 20;          // propositions per model enumeration
  std::size_t max_defaults = 16;      // default rules per subset search
  std::size_t max_belief_atoms = 20;  // L-subformulas per sign enumeration
  std::size_t max_arity = 8;          // truth-table property checks
  std::size_t max_hypotheses = 16;    // abduction hypotheses
  unsigned threads = 1;               // worker threads for enumeration; 0 or 1 = sequential

  void check_vars(std::size_t n) const {
    if (n > max_vars) throw CapExceeded("variable enumeration", n, max_vars);
  }
  void check_arity(std::size_t n) const {
    if (n > max_arity) throw CapExceeded("arity", n, max_arity);
  }
};

}  // namespace nmr
