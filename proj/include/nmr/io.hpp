#pragma once

// Text formats for every solver input. Shared conventions: '#' starts a
// comment, blank lines are ignored, `NAME/ARITY=BITS` declares a function
// usable in later formulas, and `V: a b c` declares extra propositions.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nmr/abduction.hpp"
#include "nmr/autoepistemic.hpp"
#include "nmr/boolean_function.hpp"
#include "nmr/circumscription.hpp"
#include "nmr/cnf.hpp"
#include "nmr/default_logic.hpp"
#include "nmr/error.hpp"
#include "nmr/parser.hpp"
#include "nmr/schaefer.hpp"
#include "nmr/theory.hpp"

namespace nmr {

struct SourceLine {
  std::size_t number = 0;  // 1-based
  std::string text;        // trimmed, comment removed
};

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_names(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

inline std::set<std::string> name_set(std::string_view s, std::size_t line) {
  std::set<std::string> out;
  for (auto& n : split_names(s)) {
    if (!is_identifier(n)) throw ParseError("bad proposition name '" + n + "'", line, 1);
    out.insert(std::move(n));
  }
  return out;
}

// "KEY: rest" for a known header key (case-sensitive).
inline std::optional<std::string> header(const std::string& line, std::string_view key) {
  if (line.size() <= key.size() || line.compare(0, key.size(), key) != 0) return std::nullopt;
  std::size_t i = key.size();
  while (i < line.size() && line[i] == ' ') ++i;
  if (i >= line.size() || line[i] != ':') return std::nullopt;
  return trim(std::string_view(line).substr(i + 1));
}

template <class F>
auto at_line(std::size_t line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw e.at_line(line);
  } catch (const InvalidInput& e) {
    throw ParseError(e.what(), line, 1);
  }
}

}  // namespace detail

inline std::vector<SourceLine> content_lines(std::string_view text) {
  std::vector<SourceLine> out;
  std::size_t number = 0, pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++number;
    std::string_view raw = text.substr(pos, nl - pos);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (auto t = detail::trim(raw); !t.empty()) out.push_back({number, std::move(t)});
    pos = nl + 1;
  }
  return out;
}

// `NAME/ARITY=BITS`, e.g. `f/2=0110`.
inline std::optional<BooleanFunction> parse_inline_function(std::string_view text) {
  static const std::regex re(R"(^\s*([A-Za-z_][A-Za-z0-9_]*)\s*/\s*([0-9]+)\s*=\s*([01]+)\s*$)");
  std::cmatch m;
  if (!std::regex_match(text.begin(), text.end(), m, re)) return std::nullopt;
  const std::string digits = m[2].str();
  if (digits.size() > 2) throw CapExceeded("truth table arity", kMaxTableArity + 1, kMaxTableArity);
  return BooleanFunction::from_bits(m[1].str(), std::stoul(digits), m[3].str());
}

// Per-file state: a private function library and the `V:` declarations.
class FormulaFileReader {
 public:
  explicit FormulaFileReader(Dialect dialect = Dialect::Propositional) : dialect_(dialect) {}

  bool consume_common(const SourceLine& l) {
    if (auto f = detail::at_line(l.number, [&] { return parse_inline_function(l.text); })) {
      detail::at_line(l.number, [&] { return lib_.declare(std::move(*f)); });
      return true;
    }
    if (auto v = detail::header(l.text, "V")) {
      auto names = detail::name_set(*v, l.number);
      declared_.insert(names.begin(), names.end());
      return true;
    }
    return false;
  }

  Formula formula(std::string_view text, std::size_t line) const {
    return detail::at_line(line, [&] { return parse_formula(text, lib_, dialect_, line); });
  }

  const FunctionLibrary& library() const noexcept { return lib_; }
  const std::set<std::string>& declared() const noexcept { return declared_; }

 private:
  Dialect dialect_;
  FunctionLibrary lib_;
  std::set<std::string> declared_;
};

// Plain theory: one formula per line.
inline Theory read_theory(std::string_view text, Dialect dialect = Dialect::Propositional) {
  FormulaFileReader r(dialect);
  Theory t;
  for (const auto& l : content_lines(text)) {
    if (r.consume_common(l)) continue;
    t.add(r.formula(l.text, l.number));
  }
  t.declare(r.declared());
  return t;
}

inline AETheory read_ae_theory(std::string_view text) { return read_theory(text, Dialect::Autoepistemic); }

// `W:` section of formulas, `D:` section of `alpha : beta / gamma` rules.
inline DefaultTheory read_default_theory(std::string_view text) {
  FormulaFileReader r;
  DefaultTheory t;
  enum class Section { None, W, D } section = Section::None;
  for (const auto& l : content_lines(text)) {
    if (r.consume_common(l)) continue;
    if (auto h = detail::header(l.text, "W"); h && h->empty()) {
      section = Section::W;
      continue;
    }
    if (auto h = detail::header(l.text, "D"); h && h->empty()) {
      section = Section::D;
      continue;
    }
    switch (section) {
      case Section::None:
        throw ParseError("expected 'W:' or 'D:' section header", l.number, 1);
      case Section::W:
        t.add_fact(r.formula(l.text, l.number));
        break;
      case Section::D: {
        const auto colon = l.text.find(':');
        const auto slash = l.text.rfind('/');
        if (colon == std::string::npos || slash == std::string::npos || slash < colon)
          throw ParseError("default rule must read 'alpha : beta / gamma'", l.number, 1);
        t.add_rule({r.formula(l.text.substr(0, colon), l.number),
                    r.formula(l.text.substr(colon + 1, slash - colon - 1), l.number),
                    r.formula(l.text.substr(slash + 1), l.number)});
        break;
      }
    }
  }
  for (const auto& v : r.declared()) t.declare(v);
  return t;
}

// `exists x1 x2; forall y1; MATRIX`, possibly spread over several lines.
inline Qbf read_qbf(std::string_view text) {
  FormulaFileReader r;
  std::string joined;
  std::size_t first = 0;
  for (const auto& l : content_lines(text)) {
    if (r.consume_common(l)) continue;
    if (!first) first = l.number;
    joined += l.text + " ";
  }
  const auto s1 = joined.find(';');
  const auto s2 = s1 == std::string::npos ? s1 : joined.find(';', s1 + 1);
  if (s2 == std::string::npos) throw ParseError("QBF must read 'exists ...; forall ...; MATRIX'", first, 1);
  auto block = [&](std::string part, std::string_view kw) {
    part = detail::trim(part);
    if (part.compare(0, kw.size(), kw) != 0 || (part.size() > kw.size() && !std::isspace(static_cast<unsigned char>(part[kw.size()]))))
      throw ParseError("expected '" + std::string(kw) + "'", first, 1);
    const auto names = detail::split_names(std::string_view(part).substr(kw.size()));
    for (const auto& n : names)
      if (!detail::is_identifier(n)) throw ParseError("bad proposition name '" + n + "'", first, 1);
    return names;
  };
  Qbf q{block(joined.substr(0, s1), "exists"), block(joined.substr(s1 + 1, s2 - s1 - 1), "forall"),
        r.formula(joined.substr(s2 + 1), first)};
  detail::at_line(first, [&] {
    detail::check_qbf(q);
    return 0;
  });
  return q;
}

// Formula lines plus `P:` and `Z:` headers; Q is every other proposition.
inline CircProblem read_circ(std::string_view text) {
  FormulaFileReader r;
  Theory t;
  std::set<std::string> p, z;
  for (const auto& l : content_lines(text)) {
    if (r.consume_common(l)) continue;
    if (auto h = detail::header(l.text, "P")) {
      auto ns = detail::name_set(*h, l.number);
      p.insert(ns.begin(), ns.end());
      continue;
    }
    if (auto h = detail::header(l.text, "Z")) {
      auto ns = detail::name_set(*h, l.number);
      z.insert(ns.begin(), ns.end());
      continue;
    }
    t.add(r.formula(l.text, l.number));
  }
  t.declare(r.declared());
  t.declare(p);
  t.declare(z);
  return CircProblem(t, VarPartition::with_remainder(t.universe(), p, z));
}

namespace detail {

inline bool is_literal_formula(const Formula& f) {
  return f.is_prop() || (f.is_apply() && f.function()->name() == "not" && f.args()[0].is_prop());
}
inline bool is_junction_formula(const Formula& f, std::string_view op) {
  if (is_literal_formula(f)) return true;
  return f.is_apply() && f.function()->name() == op && is_junction_formula(f.args()[0], op) &&
         is_junction_formula(f.args()[1], op);
}

}  // namespace detail

// Most specific query kind the formula fits.
inline QueryKind infer_query_kind(const Formula& q, const Theory& gamma, const std::set<std::string>& hyps) {
  if (q.is_prop() && gamma.universe().count(q.name()) && !hyps.count(q.name())) return QueryKind::Proposition;
  if (detail::is_literal_formula(q)) return QueryKind::Literal;
  if (detail::is_junction_formula(q, "and")) return QueryKind::Term;
  if (detail::is_junction_formula(q, "or")) return QueryKind::Clause;
  return QueryKind::Formula;
}

// Formula lines plus `A:` hypotheses, `Q:` query, optional `mode:` and `kind:`.
inline AbductionInstance read_abduction(std::string_view text) {
  FormulaFileReader r;
  Theory t;
  std::set<std::string> hyps;
  std::optional<Formula> query;
  std::optional<QueryKind> kind;
  ExplanationMode mode = ExplanationMode::Literals;
  std::size_t query_line = 0;
  for (const auto& l : content_lines(text)) {
    if (r.consume_common(l)) continue;
    if (auto h = detail::header(l.text, "A")) {
      auto ns = detail::name_set(*h, l.number);
      hyps.insert(ns.begin(), ns.end());
    } else if (auto h = detail::header(l.text, "Q")) {
      if (query) throw ParseError("more than one 'Q:' line", l.number, 1);
      query = r.formula(*h, l.number);
      query_line = l.number;
    } else if (auto h = detail::header(l.text, "mode")) {
      if (*h == "literal")
        mode = ExplanationMode::Literals;
      else if (*h == "positive")
        mode = ExplanationMode::Positive;
      else
        throw ParseError("mode must be 'literal' or 'positive'", l.number, 1);
    } else if (auto h = detail::header(l.text, "kind")) {
      kind = detail::at_line(l.number, [&] { return parse_query_kind(*h); });
    } else {
      t.add(r.formula(l.text, l.number));
    }
  }
  t.declare(r.declared());
  if (!query) throw ParseError("missing 'Q:' line", 0, 0);
  const QueryKind k = kind ? *kind : infer_query_kind(*query, t, hyps);
  return detail::at_line(query_line, [&] { return AbductionInstance(t, hyps, *query, k, mode); });
}

struct RelationFile {
  std::vector<BooleanRelation> relations;  // declaration order
  ConstraintTheory constraints;
};

// `rel NAME/ARITY = t1,t2,...` declarations and `NAME(x,y,...)` constraint lines.
inline RelationFile read_relations(std::string_view text) {
  static const std::regex decl(R"(^rel\s+([A-Za-z_][A-Za-z0-9_]*)\s*/\s*([0-9]+)\s*=\s*(.*)$)");
  static const std::regex app(R"(^([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)$)");
  RelationFile out;
  std::map<std::string, RelationPtr> by_name;
  std::set<std::string> declared;
  for (const auto& l : content_lines(text)) {
    std::smatch m;
    if (auto v = detail::header(l.text, "V")) {
      auto ns = detail::name_set(*v, l.number);
      declared.insert(ns.begin(), ns.end());
    } else if (std::regex_match(l.text, m, decl)) {
      const std::string name = m[1].str();
      if (by_name.count(name)) throw ParseError("relation '" + name + "' declared twice", l.number, 1);
      if (m[2].str().size() > 2) throw ParseError("relation arity too large", l.number, 1);
      const std::size_t arity = std::stoul(m[2].str());
      auto rel = detail::at_line(l.number, [&] {
        return BooleanRelation::from_strings(name, arity, detail::split_names(m[3].str()));
      });
      out.relations.push_back(rel);
      by_name.emplace(name, std::make_shared<const BooleanRelation>(std::move(rel)));
    } else if (std::regex_match(l.text, m, app)) {
      auto it = by_name.find(m[1].str());
      if (it == by_name.end()) throw ParseError("unknown relation '" + m[1].str() + "'", l.number, 1);
      auto args = detail::split_names(m[2].str());
      for (const auto& a : args)
        if (!detail::is_identifier(a)) throw ParseError("bad proposition name '" + a + "'", l.number, 1);
      detail::at_line(l.number, [&] {
        out.constraints.add(ConstraintApplication(it->second, args));
        return 0;
      });
    } else {
      throw ParseError("expected 'rel NAME/ARITY = ...' or 'NAME(x, ...)'", l.number, 1);
    }
  }
  out.constraints.declare(declared);
  return out;
}

inline Cnf read_cnf(std::string_view text) {
  std::vector<std::string> lines;
  for (const auto& l : content_lines(text)) lines.push_back(l.text);
  return parse_cnf(lines);
}

// ---- Writers ---------------------------------------------------------------
// Output re-reads to an equal object through the matching reader.

namespace detail {

inline void collect_theory_functions(const Theory& t, std::map<std::string, FunctionPtr>& fns) {
  for (const auto& f : t.formulas()) collect_functions(f, fns);
}

inline std::string function_declarations(const std::map<std::string, FunctionPtr>& fns) {
  std::string out;
  const auto& std_lib = FunctionLibrary::standard();
  for (const auto& [name, fn] : fns) {
    auto builtin = std_lib.find(name);
    if (builtin && builtin->same_table(*fn)) continue;
    out += name + "/" + std::to_string(fn->arity()) + "=" + fn->bits() + "\n";
  }
  return out;
}

// Propositions of `universe` that no formula mentions.
inline std::string extra_declarations(const std::set<std::string>& universe, const std::set<std::string>& used) {
  std::string names;
  for (const auto& v : universe)
    if (!used.count(v)) names += (names.empty() ? "" : " ") + v;
  return names.empty() ? "" : "V: " + names + "\n";
}

inline std::string join(const std::set<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : " ") + x;
  return s;
}

}  // namespace detail

inline std::string write_theory(const Theory& t) {
  std::map<std::string, FunctionPtr> fns;
  detail::collect_theory_functions(t, fns);
  std::string out = detail::function_declarations(fns) + detail::extra_declarations(t.universe(), vars(t));
  for (const auto& f : t.formulas()) out += to_string(f) + "\n";
  return out;
}

inline std::string write_default_theory(const DefaultTheory& t) {
  std::map<std::string, FunctionPtr> fns;
  detail::collect_theory_functions(t.facts(), fns);
  std::set<std::string> used = vars(t.facts());
  for (const auto& r : t.rules())
    for (const auto* f : {&r.premise, &r.justification, &r.conclusion}) {
      collect_functions(*f, fns);
      collect_vars(*f, used);
    }
  std::string out = detail::function_declarations(fns) + detail::extra_declarations(t.universe(), used) + "W:\n";
  for (const auto& f : t.facts().formulas()) out += to_string(f) + "\n";
  out += "D:\n";
  for (const auto& r : t.rules())
    out += to_string(r.premise) + " : " + to_string(r.justification) + " / " + to_string(r.conclusion) + "\n";
  return out;
}

inline std::string write_circ(const CircProblem& prob) {
  const auto& part = prob.partition();
  std::string out = write_theory(prob.theory());
  std::string head;
  if (!part.p.empty()) head += "P: " + detail::join(part.p) + "\n";
  if (!part.z.empty()) head += "Z: " + detail::join(part.z) + "\n";
  return head + out;
}

inline std::string write_qbf(const Qbf& q) {
  std::string out = "exists";
  for (const auto& x : q.exists) out += " " + x;
  out += "; forall";
  for (const auto& y : q.forall) out += " " + y;
  return out + "; " + to_string(q.matrix) + "\n";
}

}  // namespace nmr
