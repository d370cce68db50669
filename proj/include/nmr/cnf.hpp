#pragma once

#include <set>
#include <string>
#include <vector>

#include "nmr/error.hpp"
#include "nmr/formula.hpp"
#include "nmr/parser.hpp"

namespace nmr {

struct Literal {
  std::string var;
  bool positive = true;

  Formula formula() const { return make::literal(var, positive); }
  Literal complement() const { return {var, !positive}; }
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

struct Cnf {
  std::vector<Clause> clauses;

  bool is_3cnf() const {
    for (const auto& c : clauses)
      if (c.size() != 3) return false;
    return true;
  }

  std::set<std::string> vars() const {
    std::set<std::string> out;
    for (const auto& c : clauses)
      for (const auto& l : c) out.insert(l.var);
    return out;
  }

  Formula formula() const {
    std::vector<Formula> cs;
    for (const auto& c : clauses) {
      std::vector<Formula> ls;
      for (const auto& l : c) ls.push_back(l.formula());
      cs.push_back(make::disj_all(ls, make::constant(false)));
    }
    return make::conj_all(cs, make::constant(true));
  }
};

namespace detail {

inline void flatten_clause(const Formula& f, Clause& out) {
  if (f.is_prop()) {
    out.push_back({f.name(), true});
    return;
  }
  if (f.is_apply()) {
    const auto& fn = *f.function();
    if (fn.name() == "not" && f.args()[0].is_prop()) {
      out.push_back({f.args()[0].name(), false});
      return;
    }
    if (fn.name() == "or") {
      flatten_clause(f.args()[0], out);
      flatten_clause(f.args()[1], out);
      return;
    }
  }
  throw InvalidInput("not a clause: " + to_string(f));
}

}  // namespace detail

// One clause per line, written as a disjunction of literals: `x | !y | z`.
inline Cnf parse_cnf(const std::vector<std::string>& lines) {
  Cnf cnf;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
    Clause c;
    detail::flatten_clause(parse_formula(line, FunctionLibrary::standard(), Dialect::Propositional, i + 1), c);
    cnf.clauses.push_back(std::move(c));
  }
  return cnf;
}

}  // namespace nmr
