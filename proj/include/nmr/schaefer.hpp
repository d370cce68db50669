#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nmr/boolean_function.hpp"
#include "nmr/error.hpp"
#include "nmr/formula.hpp"
#include "nmr/limits.hpp"
#include "nmr/model_set.hpp"
#include "nmr/theory.hpp"

namespace nmr {

// Finite Boolean relation. A tuple is encoded with its first coordinate as the
// most significant bit, matching truth-table row indices.
class BooleanRelation {
 public:
  BooleanRelation(std::string name, std::size_t arity, std::vector<std::uint32_t> tuples)
      : name_(std::move(name)), arity_(arity), tuples_(std::move(tuples)) {
    if (arity_ == 0) throw InvalidInput("relation '" + name_ + "' must have positive arity");
    if (arity_ > kMaxTableArity) throw CapExceeded("relation arity", arity_, kMaxTableArity);
    for (auto t : tuples_)
      if (t >> arity_) throw InvalidInput("tuple out of range for relation '" + name_ + "'");
    std::sort(tuples_.begin(), tuples_.end());
    tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
  }

  static BooleanRelation from_strings(std::string name, std::size_t arity, const std::vector<std::string>& tuples) {
    std::vector<std::uint32_t> codes;
    for (const auto& s : tuples) {
      if (s.size() != arity)
        throw InvalidInput("tuple '" + s + "' of relation '" + name + "' has length " + std::to_string(s.size()) +
                           ", expected " + std::to_string(arity));
      std::uint32_t c = 0;
      for (char ch : s) {
        if (ch != '0' && ch != '1') throw InvalidInput("tuple '" + s + "' is not a bit string");
        c = (c << 1) | (ch == '1' ? 1U : 0U);
      }
      codes.push_back(c);
    }
    return BooleanRelation(std::move(name), arity, std::move(codes));
  }

  // Relation of all satisfying rows of f.
  static BooleanRelation of_function(const BooleanFunction& f) {
    std::vector<std::uint32_t> codes;
    for (std::size_t r = 0; r < f.rows(); ++r)
      if (f(r)) codes.push_back(static_cast<std::uint32_t>(r));
    return BooleanRelation(f.name(), f.arity(), std::move(codes));
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t arity() const noexcept { return arity_; }
  const std::vector<std::uint32_t>& tuples() const noexcept { return tuples_; }
  std::size_t size() const noexcept { return tuples_.size(); }

  bool contains(std::uint32_t t) const { return std::binary_search(tuples_.begin(), tuples_.end(), t); }

  // Characteristic function, named after the relation.
  BooleanFunction characteristic() const {
    return BooleanFunction::from_rows(name_, arity_, [&](std::size_t r) { return contains(static_cast<std::uint32_t>(r)); });
  }

  std::string tuple_string(std::uint32_t t) const {
    std::string s(arity_, '0');
    for (std::size_t j = 0; j < arity_; ++j) s[j] = arg_bit(t, arity_, j) ? '1' : '0';
    return s;
  }

  friend bool operator==(const BooleanRelation&, const BooleanRelation&) = default;

 private:
  std::string name_;
  std::size_t arity_;
  std::vector<std::uint32_t> tuples_;
};

using RelationPtr = std::shared_ptr<const BooleanRelation>;

// f applied coordinatewise to any arity(f) tuples of R stays in R.
inline bool is_polymorphism(const BooleanRelation& r, const BooleanFunction& f) {
  const std::size_t k = f.arity();
  const std::size_t n = r.arity();
  const auto& ts = r.tuples();
  if (k == 0) {
    // A constant is a polymorphism iff the constant tuple is in R (or R is empty).
    if (ts.empty()) return true;
    return r.contains(f(0) ? static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1) : 0);
  }
  if (ts.empty()) return true;
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    std::uint32_t out = 0;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t row = 0;
      for (std::size_t a = 0; a < k; ++a) row = (row << 1) | (arg_bit(ts[idx[a]], n, j) ? 1U : 0U);
      out = (out << 1) | (f(row) ? 1U : 0U);
    }
    if (!r.contains(out)) return false;
    std::size_t a = k;
    while (a > 0 && ++idx[a - 1] == ts.size()) idx[--a] = 0;
    if (a == 0) return true;
  }
}

struct RelationFlags {
  bool horn = false;
  bool dual_horn = false;
  bool bijunctive = false;
  bool affine = false;
  bool valid0 = false;
  bool valid1 = false;
  bool definite_horn = false;
  bool negative_horn = false;
  bool ihsb_plus = false;
  bool ihsb_minus = false;

  bool schaefer() const { return horn || dual_horn || bijunctive || affine; }
  friend bool operator==(const RelationFlags&, const RelationFlags&) = default;
};

// Setwise report: each flag holds for every relation of the set.
struct SchaeferReport : RelationFlags {
  bool schaefer = true;
  friend bool operator==(const SchaeferReport&, const SchaeferReport&) = default;
};

namespace detail {

// Clause over n coordinates as two disjoint literal masks (MSB = coordinate 0).
struct Clause {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
  bool satisfied_by(std::uint32_t t) const { return (t & pos) || (~t & neg); }
};

enum class ClauseShape { NegativeHorn, DefiniteHorn, IhsbMinus, IhsbPlus };

inline bool shape_allows(ClauseShape s, const Clause& c) {
  const int p = std::popcount(c.pos);
  const int q = std::popcount(c.neg);
  if (p + q == 0) return false;
  switch (s) {
    case ClauseShape::NegativeHorn: return p == 0;
    case ClauseShape::DefiniteHorn: return p == 1;
    case ClauseShape::IhsbMinus: return (p == 1 && q == 0) || (p == 1 && q == 1) || p == 0;
    case ClauseShape::IhsbPlus: return (q == 1 && p == 0) || (p == 1 && q == 1) || q == 0;
  }
  return false;
}

// R is definable by clauses of a shape iff it equals the intersection of all
// such clauses it implies.
inline bool definable(const BooleanRelation& r, ClauseShape shape) {
  const std::size_t n = r.arity();
  const std::size_t rows = std::size_t{1} << n;
  std::vector<bool> closure(rows, true);
  // Enumerate literal assignments: each coordinate absent, positive or negative.
  std::vector<int> state(n, 0);
  while (true) {
    Clause c;
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint32_t b = std::uint32_t{1} << (n - 1 - j);
      if (state[j] == 1) c.pos |= b;
      if (state[j] == 2) c.neg |= b;
    }
    if (shape_allows(shape, c) &&
        std::all_of(r.tuples().begin(), r.tuples().end(), [&](std::uint32_t t) { return c.satisfied_by(t); }))
      for (std::size_t t = 0; t < rows; ++t)
        if (!c.satisfied_by(static_cast<std::uint32_t>(t))) closure[t] = false;
    std::size_t j = n;
    while (j > 0 && ++state[j - 1] == 3) state[--j] = 0;
    if (j == 0) break;
  }
  for (std::size_t t = 0; t < rows; ++t)
    if (closure[t] != r.contains(static_cast<std::uint32_t>(t))) return false;
  return true;
}

}  // namespace detail

inline RelationFlags classify_relation(const BooleanRelation& r, const Limits& lim = {}) {
  lim.check_arity(r.arity());
  RelationFlags f;
  f.horn = is_polymorphism(r, builtin::make("and"));
  f.dual_horn = is_polymorphism(r, builtin::make("or"));
  f.bijunctive = is_polymorphism(r, builtin::make("maj"));
  f.affine = is_polymorphism(r, BooleanFunction::from_rows("x^y^z", 3, [](std::size_t row) { return std::popcount(row) & 1; }));
  f.valid0 = r.contains(0);
  f.valid1 = r.contains(static_cast<std::uint32_t>((std::uint64_t{1} << r.arity()) - 1));
  f.negative_horn = detail::definable(r, detail::ClauseShape::NegativeHorn);
  f.definite_horn = detail::definable(r, detail::ClauseShape::DefiniteHorn);
  f.ihsb_minus = detail::definable(r, detail::ClauseShape::IhsbMinus);
  f.ihsb_plus = detail::definable(r, detail::ClauseShape::IhsbPlus);
  return f;
}

inline SchaeferReport classify_set(const std::vector<BooleanRelation>& rs, const Limits& lim = {}) {
  SchaeferReport rep;
  rep.horn = rep.dual_horn = rep.bijunctive = rep.affine = rep.valid0 = rep.valid1 = true;
  rep.definite_horn = rep.negative_horn = rep.ihsb_plus = rep.ihsb_minus = true;
  for (const auto& r : rs) {
    const auto f = classify_relation(r, lim);
    rep.horn = rep.horn && f.horn;
    rep.dual_horn = rep.dual_horn && f.dual_horn;
    rep.bijunctive = rep.bijunctive && f.bijunctive;
    rep.affine = rep.affine && f.affine;
    rep.valid0 = rep.valid0 && f.valid0;
    rep.valid1 = rep.valid1 && f.valid1;
    rep.definite_horn = rep.definite_horn && f.definite_horn;
    rep.negative_horn = rep.negative_horn && f.negative_horn;
    rep.ihsb_plus = rep.ihsb_plus && f.ihsb_plus;
    rep.ihsb_minus = rep.ihsb_minus && f.ihsb_minus;
  }
  rep.schaefer = rep.horn || rep.dual_horn || rep.bijunctive || rep.affine;
  return rep;
}

// ---- Constraint theories ---------------------------------------------------

struct ConstraintApplication {
  RelationPtr relation;
  std::vector<std::string> variables;

  ConstraintApplication(RelationPtr r, std::vector<std::string> vs) : relation(std::move(r)), variables(std::move(vs)) {
    if (!relation) throw InvalidInput("null relation");
    if (variables.size() != relation->arity())
      throw InvalidInput("relation '" + relation->name() + "' expects " + std::to_string(relation->arity()) +
                         " variables, got " + std::to_string(variables.size()));
  }

  friend bool operator==(const ConstraintApplication& a, const ConstraintApplication& b) {
    return *a.relation == *b.relation && a.variables == b.variables;
  }
};

class ConstraintTheory {
 public:
  ConstraintTheory() = default;
  explicit ConstraintTheory(std::vector<ConstraintApplication> apps) {
    for (auto& a : apps) add(std::move(a));
  }

  bool add(ConstraintApplication a) {
    if (std::find(apps_.begin(), apps_.end(), a) != apps_.end()) return false;
    universe_.insert(a.variables.begin(), a.variables.end());
    apps_.push_back(std::move(a));
    return true;
  }

  void declare(const std::string& v) { universe_.insert(v); }
  void declare(const std::set<std::string>& vs) { universe_.insert(vs.begin(), vs.end()); }

  const std::vector<ConstraintApplication>& applications() const noexcept { return apps_; }
  const std::set<std::string>& universe() const noexcept { return universe_; }
  bool empty() const noexcept { return apps_.empty(); }

 private:
  std::vector<ConstraintApplication> apps_;
  std::set<std::string> universe_;
};

inline bool satisfies(const Valuation& sigma, const ConstraintTheory& g) {
  for (const auto& a : g.applications()) {
    std::uint32_t t = 0;
    for (const auto& v : a.variables) {
      auto it = sigma.find(v);
      if (it == sigma.end()) throw UnboundProposition(v);
      t = (t << 1) | (it->second ? 1U : 0U);
    }
    if (!a.relation->contains(t)) return false;
  }
  return true;
}

// Model set computed directly from the relations (no formula detour).
inline ModelSet constraint_model_set(const ConstraintTheory& g, const Universe& u) {
  ModelSet s(u.size(), true);
  for (const auto& a : g.applications()) {
    std::vector<Code> bits;
    for (const auto& v : a.variables) bits.push_back(u.bit_of(v));
    ModelSet m(u.size());
    for (Code c = 0; c < static_cast<Code>(s.capacity()); ++c) {
      std::uint32_t t = 0;
      for (auto b : bits) t = (t << 1) | ((c & b) ? 1U : 0U);
      if (a.relation->contains(t)) m.set(c);
    }
    s &= m;
  }
  return s;
}

// Each application becomes its relation's characteristic function applied to the variables.
inline Theory constraint_to_theory(const ConstraintTheory& g) {
  Theory t;
  t.declare(g.universe());
  std::map<std::string, FunctionPtr> fns;
  for (const auto& a : g.applications()) {
    auto& fn = fns[a.relation->name()];
    if (!fn || !fn->same_table(a.relation->characteristic()))
      fn = std::make_shared<const BooleanFunction>(a.relation->characteristic());
    std::vector<Formula> args;
    for (const auto& v : a.variables) args.push_back(Formula::prop(v));
    t.add(Formula::apply(fn, std::move(args)));
  }
  return t;
}

}  // namespace nmr
