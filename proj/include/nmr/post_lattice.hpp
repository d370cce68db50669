#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nmr/boolean_function.hpp"
#include "nmr/error.hpp"
#include "nmr/limits.hpp"

namespace nmr {

// Largest m such that every subset of f^{-1}(c) of size at most m is
// c-separating. `none` when m < 2; `infinite` when f^{-1}(c) itself is.
class SepDegree {
 public:
  static constexpr SepDegree none() { return SepDegree(0); }
  static constexpr SepDegree infinite() { return SepDegree(kInf); }
  static constexpr SepDegree finite(std::size_t m) { return m < 2 ? none() : SepDegree(m); }

  constexpr bool is_none() const { return v_ == 0; }
  constexpr bool is_infinite() const { return v_ == kInf; }
  constexpr std::size_t value() const { return v_; }

  // Degree-m separation holds.
  constexpr bool at_least(std::size_t m) const { return v_ >= m; }

  std::string str() const { return is_none() ? "none" : is_infinite() ? "inf" : std::to_string(v_); }

  friend constexpr auto operator<=>(SepDegree, SepDegree) = default;

 private:
  static constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  constexpr explicit SepDegree(std::size_t v) : v_(v) {}
  std::size_t v_;
};

struct PropertyProfile {
  bool reproducing0 = false;
  bool reproducing1 = false;
  bool monotone = false;
  bool self_dual = false;
  bool affine = false;
  bool essentially_unary = false;
  bool conjunction_or_constant = false;
  bool disjunction_or_constant = false;
  bool constant_or_projection = false;
  SepDegree sep0_degree = SepDegree::none();
  SepDegree sep1_degree = SepDegree::none();

  friend bool operator==(const PropertyProfile&, const PropertyProfile&) = default;
};

inline BooleanFunction dual(const BooleanFunction& f) {
  const std::size_t mask = f.rows() - 1;
  return BooleanFunction::from_rows("dual(" + f.name() + ")", f.arity(), [&](std::size_t row) { return !f(mask & ~row); });
}

namespace detail {

// Constants are treated as unary so that separation over the empty
// coordinate set does not arise.
inline BooleanFunction padded(const BooleanFunction& f) {
  if (f.arity() > 0) return f;
  const bool v = f(0);
  return BooleanFunction::from_rows(f.name(), 1, [v](std::size_t) { return v; });
}

inline SepDegree separating_degree_raw(const BooleanFunction& f, bool c) {
  const std::size_t n = f.arity();
  const std::size_t full = (std::size_t{1} << n) - 1;
  // For each row in f^{-1}(c): the coordinates where it differs from c.
  std::vector<bool> seen(full + 1, false);
  std::vector<std::size_t> masks;
  for (std::size_t row = 0; row < f.rows(); ++row) {
    if (f(row) != c) continue;
    const std::size_t m = c ? (~row & full) : row;
    if (!seen[m]) {
      seen[m] = true;
      masks.push_back(m);
    }
  }
  // A subset fails to separate iff its masks cover every coordinate.
  std::vector<std::size_t> dist(full + 1, std::numeric_limits<std::size_t>::max());
  dist[0] = 0;
  std::vector<std::size_t> frontier{0};
  for (std::size_t d = 0; !frontier.empty(); ++d) {
    if (dist[full] != std::numeric_limits<std::size_t>::max()) break;
    std::vector<std::size_t> next;
    for (auto s : frontier)
      for (auto m : masks) {
        const std::size_t t = s | m;
        if (dist[t] == std::numeric_limits<std::size_t>::max()) {
          dist[t] = d + 1;
          next.push_back(t);
        }
      }
    frontier = std::move(next);
  }
  if (dist[full] == std::numeric_limits<std::size_t>::max()) return SepDegree::infinite();
  return SepDegree::finite(dist[full] - 1);
}

inline std::size_t dependency_mask(const BooleanFunction& f) {
  const std::size_t n = f.arity();
  std::size_t dep = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t b = std::size_t{1} << (n - 1 - j);
    for (std::size_t row = 0; row < f.rows(); ++row)
      if (!(row & b) && f(row) != f(row | b)) {
        dep |= b;
        break;
      }
  }
  return dep;
}

inline bool is_constant_fn(const BooleanFunction& f) {
  const auto ones = f.count_ones();
  return ones == 0 || ones == f.rows();
}

// f equals the conjunction (disjunction when `disj`) of a nonempty variable set.
inline bool is_junction(const BooleanFunction& f, bool disj) {
  const std::size_t n = f.arity();
  if (n == 0) return false;
  const std::size_t full = f.rows() - 1;
  const std::size_t base = disj ? 0 : full;
  std::size_t s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t b = std::size_t{1} << (n - 1 - j);
    if (f(base ^ b) != f(base)) s |= b;
  }
  if (s == 0) return false;
  for (std::size_t row = 0; row < f.rows(); ++row) {
    const bool expect = disj ? (row & s) != 0 : (row & s) == s;
    if (f(row) != expect) return false;
  }
  return true;
}

}  // namespace detail

inline SepDegree separating_degree(const BooleanFunction& f, bool c, const Limits& lim = {}) {
  lim.check_arity(f.arity());
  return detail::separating_degree_raw(detail::padded(f), c);
}

inline PropertyProfile property_profile(const BooleanFunction& f0, const Limits& lim = {}) {
  lim.check_arity(f0.arity());
  const BooleanFunction f = detail::padded(f0);
  const std::size_t n = f.arity();
  const std::size_t full = f.rows() - 1;
  PropertyProfile p;
  p.reproducing0 = !f(0);
  p.reproducing1 = f(full);

  p.monotone = true;
  for (std::size_t row = 0; row < f.rows() && p.monotone; ++row)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t b = std::size_t{1} << j;
      if (!(row & b) && f(row) && !f(row | b)) {
        p.monotone = false;
        break;
      }
    }

  p.self_dual = true;
  for (std::size_t row = 0; row < f.rows(); ++row)
    if (f(row) == f(full & ~row)) {
      p.self_dual = false;
      break;
    }

  {
    const bool c = f(0);
    std::size_t s = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t b = std::size_t{1} << j;
      if (f(b) != c) s |= b;
    }
    p.affine = true;
    for (std::size_t row = 0; row < f.rows(); ++row)
      if (f(row) != (c ^ static_cast<bool>(std::popcount(row & s) & 1))) {
        p.affine = false;
        break;
      }
  }

  const std::size_t dep = detail::dependency_mask(f);
  const bool constant = detail::is_constant_fn(f);
  p.essentially_unary = std::popcount(dep) <= 1;
  p.conjunction_or_constant = constant || detail::is_junction(f, false);
  p.disjunction_or_constant = constant || detail::is_junction(f, true);
  p.constant_or_projection =
      constant || (std::popcount(dep) == 1 && [&] {
        for (std::size_t row = 0; row < f.rows(); ++row)
          if (f(row) != ((row & dep) != 0)) return false;
        return true;
      }());
  p.sep0_degree = detail::separating_degree_raw(f, false);
  p.sep1_degree = detail::separating_degree_raw(f, true);
  return p;
}

// ---- Clone names -----------------------------------------------------------

enum class CloneId {
  BF, R0, R1, R2, M, M0, M1, M2,
  S0, S02, S01, S00, S1, S12, S11, S10,
  D, D1, D2, L, L0, L1, L2, L3,
  E, E0, E1, E2, V, V0, V1, V2,
  N, N2, I, I0, I1, I2,
  // Parameterized families; the degree lives in Clone::degree.
  S0n, S02n, S01n, S00n, S1n, S12n, S11n, S10n,
};

inline constexpr std::array<CloneId, 38> kFixedClones = {
    CloneId::BF, CloneId::R0,  CloneId::R1,  CloneId::R2,  CloneId::M,  CloneId::M0,  CloneId::M1,  CloneId::M2,
    CloneId::S0, CloneId::S02, CloneId::S01, CloneId::S00, CloneId::S1, CloneId::S12, CloneId::S11, CloneId::S10,
    CloneId::D,  CloneId::D1,  CloneId::D2,  CloneId::L,   CloneId::L0, CloneId::L1,  CloneId::L2,  CloneId::L3,
    CloneId::E,  CloneId::E0,  CloneId::E1,  CloneId::E2,  CloneId::V,  CloneId::V0,  CloneId::V1,  CloneId::V2,
    CloneId::N,  CloneId::N2,  CloneId::I,   CloneId::I0,  CloneId::I1,  CloneId::I2};

inline constexpr std::array<CloneId, 8> kParamClones = {CloneId::S0n,  CloneId::S02n, CloneId::S01n, CloneId::S00n,
                                                        CloneId::S1n,  CloneId::S12n, CloneId::S11n, CloneId::S10n};

inline constexpr std::string_view clone_stem(CloneId id) {
  constexpr std::array<std::string_view, 46> names = {
      "BF", "R0", "R1", "R2", "M", "M0", "M1", "M2", "S0", "S02", "S01", "S00", "S1", "S12", "S11", "S10",
      "D",  "D1", "D2", "L",  "L0", "L1", "L2", "L3", "E", "E0",  "E1",  "E2",  "V",  "V0",  "V1",  "V2",
      "N",  "N2", "I",  "I0", "I1", "I2", "S0", "S02", "S01", "S00", "S1", "S12", "S11", "S10"};
  return names[static_cast<std::size_t>(id)];
}

inline constexpr bool is_parameterized(CloneId id) { return id >= CloneId::S0n; }

struct Clone {
  CloneId id = CloneId::I2;
  std::size_t degree = 0;  // >= 2 for parameterized families, 0 otherwise

  static Clone fixed(CloneId id) { return {id, 0}; }
  static Clone param(CloneId id, std::size_t degree) {
    if (!is_parameterized(id)) throw InvalidInput("clone has no degree parameter");
    if (degree < 2) throw InvalidInput("clone degree must be at least 2");
    return {id, degree};
  }

  std::string str() const {
    std::string s(clone_stem(id));
    if (is_parameterized(id)) s += "^" + std::to_string(degree);
    return s;
  }

  friend bool operator==(const Clone&, const Clone&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Clone& c) { return os << c.str(); }
};

inline Clone parse_clone(std::string_view tag) {
  const auto caret = tag.find('^');
  const std::string_view stem = tag.substr(0, caret);
  if (caret == std::string_view::npos) {
    for (auto id : kFixedClones)
      if (clone_stem(id) == stem) return Clone::fixed(id);
  } else {
    const std::string digits(tag.substr(caret + 1));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 6)
      throw InvalidInput("bad clone degree in '" + std::string(tag) + "'");
    for (auto id : kParamClones)
      if (clone_stem(id) == stem) return Clone::param(id, std::stoul(digits));
  }
  throw InvalidInput("unknown clone '" + std::string(tag) + "'");
}

// Every named clone, parameterized families instantiated at degrees lo..hi.
inline std::vector<Clone> all_clones(std::size_t lo = 2, std::size_t hi = 4) {
  std::vector<Clone> out;
  for (auto id : kFixedClones) out.push_back(Clone::fixed(id));
  for (auto id : kParamClones)
    for (std::size_t d = lo; d <= hi; ++d) out.push_back(Clone::param(id, d));
  return out;
}

// ---- Membership ------------------------------------------------------------

inline bool profile_in(const Clone& c, const PropertyProfile& p) {
  const bool r2 = p.reproducing0 && p.reproducing1;
  const bool s0 = p.sep0_degree.is_infinite();
  const bool s1 = p.sep1_degree.is_infinite();
  const bool s0n = p.sep0_degree.at_least(c.degree);
  const bool s1n = p.sep1_degree.at_least(c.degree);
  switch (c.id) {
    case CloneId::BF: return true;
    case CloneId::R0: return p.reproducing0;
    case CloneId::R1: return p.reproducing1;
    case CloneId::R2: return r2;
    case CloneId::M: return p.monotone;
    case CloneId::M0: return p.monotone && p.reproducing0;
    case CloneId::M1: return p.monotone && p.reproducing1;
    case CloneId::M2: return p.monotone && r2;
    case CloneId::S0: return s0;
    case CloneId::S02: return s0 && r2;
    case CloneId::S01: return s0 && p.monotone;
    case CloneId::S00: return s0 && r2 && p.monotone;
    case CloneId::S1: return s1;
    case CloneId::S12: return s1 && r2;
    case CloneId::S11: return s1 && p.monotone;
    case CloneId::S10: return s1 && r2 && p.monotone;
    case CloneId::S0n: return s0n;
    case CloneId::S02n: return s0n && r2;
    case CloneId::S01n: return s0n && p.monotone;
    case CloneId::S00n: return s0n && r2 && p.monotone;
    case CloneId::S1n: return s1n;
    case CloneId::S12n: return s1n && r2;
    case CloneId::S11n: return s1n && p.monotone;
    case CloneId::S10n: return s1n && r2 && p.monotone;
    case CloneId::D: return p.self_dual;
    case CloneId::D1: return p.self_dual && r2;
    case CloneId::D2: return p.self_dual && p.monotone;
    case CloneId::L: return p.affine;
    case CloneId::L0: return p.affine && p.reproducing0;
    case CloneId::L1: return p.affine && p.reproducing1;
    case CloneId::L2: return p.affine && r2;
    case CloneId::L3: return p.affine && p.self_dual;
    case CloneId::E: return p.conjunction_or_constant;
    case CloneId::E0: return p.conjunction_or_constant && p.reproducing0;
    case CloneId::E1: return p.conjunction_or_constant && p.reproducing1;
    case CloneId::E2: return p.conjunction_or_constant && r2;
    case CloneId::V: return p.disjunction_or_constant;
    case CloneId::V0: return p.disjunction_or_constant && p.reproducing0;
    case CloneId::V1: return p.disjunction_or_constant && p.reproducing1;
    case CloneId::V2: return p.disjunction_or_constant && r2;
    case CloneId::N: return p.essentially_unary;
    case CloneId::N2: return p.essentially_unary && p.self_dual;
    case CloneId::I: return p.constant_or_projection;
    case CloneId::I0: return p.constant_or_projection && p.reproducing0;
    case CloneId::I1: return p.constant_or_projection && p.reproducing1;
    case CloneId::I2: return p.constant_or_projection && r2;
  }
  return false;
}

inline bool clone_contains(const Clone& c, const BooleanFunction& f, const Limits& lim = {}) {
  return profile_in(c, property_profile(f, lim));
}

// ---- Bases -----------------------------------------------------------------

namespace detail {

template <class F>
BooleanFunction fn3(const char* name, F f) {
  return BooleanFunction::from_rows(name, 3, [&](std::size_t r) {
    return f(arg_bit(r, 3, 0), arg_bit(r, 3, 1), arg_bit(r, 3, 2));
  });
}

inline BooleanFunction named(const char* builtin_name) { return builtin::make(builtin_name); }

inline BooleanFunction dual_threshold(std::size_t n) {
  auto t = threshold(n + 1, n);
  return dual(t).renamed("dual(" + t.name() + ")");
}

}  // namespace detail

inline std::vector<BooleanFunction> base_of(const Clone& c) {
  using detail::fn3;
  using detail::named;
  if (is_parameterized(c.id) && c.degree + 1 > kMaxTableArity)
    throw CapExceeded("clone degree", c.degree, kMaxTableArity - 1);
  auto x_or_y_and_not_z = [] { return fn3("x|(y&!z)", [](bool x, bool y, bool z) { return x || (y && !z); }); };
  auto x_or_y_and_z = [] { return fn3("x|(y&z)", [](bool x, bool y, bool z) { return x || (y && z); }); };
  auto x_and_y_or_not_z = [] { return fn3("x&(y|!z)", [](bool x, bool y, bool z) { return x && (y || !z); }); };
  auto x_and_y_or_z = [] { return fn3("x&(y|z)", [](bool x, bool y, bool z) { return x && (y || z); }); };
  const std::size_t n = c.degree;
  switch (c.id) {
    case CloneId::BF: return {named("and"), named("not")};
    case CloneId::R0: return {named("and"), named("xor")};
    case CloneId::R1: return {named("or"), named("eq")};
    case CloneId::R2:
      return {named("or"), fn3("x&(y<->z)", [](bool x, bool y, bool z) { return x && (y == z); })};
    case CloneId::M: return {named("and"), named("or"), named("const0"), named("const1")};
    case CloneId::M0: return {named("and"), named("or"), named("const0")};
    case CloneId::M1: return {named("and"), named("or"), named("const1")};
    case CloneId::M2: return {named("and"), named("or")};
    case CloneId::S0: return {named("imp")};
    case CloneId::S0n: return {named("imp"), detail::dual_threshold(n)};
    case CloneId::S1: return {named("nimp")};
    case CloneId::S1n: return {named("nimp"), threshold(n + 1, n)};
    case CloneId::S02n: return {x_or_y_and_not_z(), detail::dual_threshold(n)};
    case CloneId::S02: return {x_or_y_and_not_z()};
    case CloneId::S01n: return {detail::dual_threshold(n), named("const1")};
    case CloneId::S01: return {x_or_y_and_z(), named("const1")};
    case CloneId::S00n: return {x_or_y_and_z(), detail::dual_threshold(n)};
    case CloneId::S00: return {x_or_y_and_z()};
    case CloneId::S12n: return {x_and_y_or_not_z(), threshold(n + 1, n)};
    case CloneId::S12: return {x_and_y_or_not_z()};
    case CloneId::S11n: return {threshold(n + 1, n), named("const0")};
    case CloneId::S11: return {x_and_y_or_z(), named("const0")};
    case CloneId::S10n: return {x_and_y_or_z(), threshold(n + 1, n)};
    case CloneId::S10: return {x_and_y_or_z()};
    case CloneId::D:
      return {fn3("(x&!y)|(x&!z)|(!y&!z)", [](bool x, bool y, bool z) { return (x && !y) || (x && !z) || (!y && !z); })};
    case CloneId::D1:
      return {fn3("(x&y)|(x&!z)|(y&!z)", [](bool x, bool y, bool z) { return (x && y) || (x && !z) || (y && !z); })};
    case CloneId::D2: return {named("maj")};
    case CloneId::L: return {named("xor"), named("const1")};
    case CloneId::L0: return {named("xor")};
    case CloneId::L1: return {named("eq")};
    case CloneId::L2: return {fn3("x^y^z", [](bool x, bool y, bool z) { return x ^ y ^ z; })};
    case CloneId::L3: return {fn3("x^y^z^1", [](bool x, bool y, bool z) { return !(x ^ y ^ z); })};
    case CloneId::E: return {named("and"), named("const0"), named("const1")};
    case CloneId::E0: return {named("and"), named("const0")};
    case CloneId::E1: return {named("and"), named("const1")};
    case CloneId::E2: return {named("and")};
    case CloneId::V: return {named("or"), named("const0"), named("const1")};
    case CloneId::V0: return {named("or"), named("const0")};
    case CloneId::V1: return {named("or"), named("const1")};
    case CloneId::V2: return {named("or")};
    case CloneId::N: return {named("not"), named("const0"), named("const1")};
    case CloneId::N2: return {named("not")};
    case CloneId::I: return {named("id"), named("const0"), named("const1")};
    case CloneId::I0: return {named("id"), named("const0")};
    case CloneId::I1: return {named("id"), named("const1")};
    case CloneId::I2: return {named("id")};
  }
  return {};
}

namespace detail {

// Base profiles are exact over the (uncapped) base arities; memoized per clone.
inline std::vector<PropertyProfile> base_profiles(const Clone& c) {
  static std::mutex mu;
  static std::map<std::pair<CloneId, std::size_t>, std::vector<PropertyProfile>> cache;
  const auto key = std::make_pair(c.id, c.degree);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  Limits wide;
  wide.max_arity = kMaxTableArity;
  std::vector<PropertyProfile> out;
  for (const auto& f : base_of(c)) out.push_back(property_profile(f, wide));
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(out)).first->second;
}

inline bool all_in(const std::vector<PropertyProfile>& ps, const Clone& c) {
  return std::all_of(ps.begin(), ps.end(), [&](const PropertyProfile& p) { return profile_in(c, p); });
}

}  // namespace detail

// A ⊆ B, decided as: every base function of A lies in B.
inline bool clone_leq(const Clone& a, const Clone& b) { return detail::all_in(detail::base_profiles(a), b); }

inline Clone clone_of_profiles(const std::vector<PropertyProfile>& ps) {
  if (ps.empty()) return Clone::fixed(CloneId::I2);
  std::vector<Clone> cands;
  for (auto id : kFixedClones) {
    const Clone c = Clone::fixed(id);
    if (detail::all_in(ps, c)) cands.push_back(c);
  }
  SepDegree d0 = SepDegree::infinite(), d1 = SepDegree::infinite();
  for (const auto& p : ps) {
    d0 = std::min(d0, p.sep0_degree);
    d1 = std::min(d1, p.sep1_degree);
  }
  auto add_family = [&](SepDegree d, std::array<CloneId, 4> fam) {
    if (d.is_none() || d.is_infinite()) return;  // infinite: the fixed S-rows already cover it
    for (auto id : fam) {
      const Clone c = Clone::param(id, d.value());
      if (detail::all_in(ps, c)) cands.push_back(c);
    }
  };
  add_family(d0, {CloneId::S0n, CloneId::S02n, CloneId::S01n, CloneId::S00n});
  add_family(d1, {CloneId::S1n, CloneId::S12n, CloneId::S11n, CloneId::S10n});

  std::vector<std::vector<PropertyProfile>> bases;
  bases.reserve(cands.size());
  for (const auto& c : cands) bases.push_back(detail::base_profiles(c));
  for (std::size_t i = 0; i < cands.size(); ++i) {
    bool least = true;
    for (std::size_t j = 0; j < cands.size() && least; ++j)
      if (i != j && !detail::all_in(bases[i], cands[j])) least = false;
    if (least) return cands[i];
  }
  throw Error("no least clone found (lattice data inconsistent)");
}

// The clone generated by B.
inline Clone clone_of(const std::vector<BooleanFunction>& fs, const Limits& lim = {}) {
  std::vector<PropertyProfile> ps;
  ps.reserve(fs.size());
  for (const auto& f : fs) ps.push_back(property_profile(f, lim));
  return clone_of_profiles(ps);
}

inline Clone dual_clone(const Clone& c) {
  std::vector<BooleanFunction> ds;
  for (const auto& f : base_of(c)) ds.push_back(dual(f));
  Limits wide;
  wide.max_arity = kMaxTableArity;
  return clone_of(ds, wide);
}

}  // namespace nmr
