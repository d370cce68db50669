#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "nmr/boolean_function.hpp"
#include "nmr/error.hpp"
#include "nmr/formula.hpp"

namespace nmr {

enum class Dialect { Propositional, Autoepistemic };

namespace detail {

// Recursive-descent parser. Precedence, loosest first: <->, -> (right), |, ^, &, !.
class FormulaParser {
 public:
  FormulaParser(std::string_view text, const FunctionLibrary& lib, Dialect dialect, std::size_t line)
      : text_(text), lib_(lib), dialect_(dialect), line_(line) {}

  Formula parse() {
    skip_ws();
    if (pos_ >= text_.size()) fail("empty formula");
    Formula f = parse_equiv();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) != tok) return false;
    // "->" must not be read as the tail of "<->"; callers try "<->" first.
    pos_ += tok.size();
    return true;
  }

  Formula binary(const char* fn, Formula a, Formula b) {
    return Formula::apply(lib_.get(fn), {std::move(a), std::move(b)});
  }

  Formula parse_equiv() {
    Formula lhs = parse_imp();
    while (accept("<->")) lhs = binary("eq", lhs, parse_imp());
    return lhs;
  }

  Formula parse_imp() {
    Formula lhs = parse_or();
    skip_ws();
    if (text_.substr(pos_, 2) == "->") {
      pos_ += 2;
      return binary("imp", lhs, parse_imp());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_xor();
    while (accept("|")) lhs = binary("or", lhs, parse_xor());
    return lhs;
  }

  Formula parse_xor() {
    Formula lhs = parse_and();
    while (accept("^")) lhs = binary("xor", lhs, parse_and());
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (accept("&")) lhs = binary("and", lhs, parse_unary());
    return lhs;
  }

  Formula parse_unary() {
    if (accept("!")) return Formula::apply(lib_.get("not"), {parse_unary()});
    return parse_atom();
  }

  Formula parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Formula inner = parse_equiv();
      if (!accept(")")) fail("expected ')'");
      return inner;
    }
    if (c == '0' || c == '1') {
      ++pos_;
      if (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) fail("malformed constant");
      return Formula::apply(lib_.get(c == '1' ? "const1" : "const0"), {});
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Formula parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string ident(text_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      if (ident == "L") {
        if (dialect_ != Dialect::Autoepistemic) throw ParseError("belief operator L outside autoepistemic input", line_, start + 1);
        Formula inner = parse_equiv();
        if (!accept(")")) fail("expected ')'");
        return Formula::belief(std::move(inner));
      }
      FunctionPtr fn = lib_.find(ident);
      if (!fn) throw UnknownFunction(ident, line_, start + 1);
      std::vector<Formula> args;
      skip_ws();
      if (!accept(")")) {
        do args.push_back(parse_equiv());
        while (accept(","));
        if (!accept(")")) fail("expected ',' or ')'");
      }
      if (args.size() != fn->arity())
        throw ArityMismatch("function '" + ident + "' expects " + std::to_string(fn->arity()) + " arguments, got " +
                                std::to_string(args.size()),
                            line_, start + 1);
      return Formula::apply(fn, std::move(args));
    }
    if (!std::islower(static_cast<unsigned char>(ident[0])))
      throw ParseError("proposition '" + ident + "' must start with a lowercase letter", line_, start + 1);
    for (char ch : ident)
      if (std::isupper(static_cast<unsigned char>(ch)))
        throw ParseError("proposition '" + ident + "' must be lowercase", line_, start + 1);
    return Formula::prop(ident);
  }

  std::string_view text_;
  const FunctionLibrary& lib_;
  Dialect dialect_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

// Binding strength used by the printer; larger binds tighter.
inline int infix_level(const std::string& fn) {
  if (fn == "eq") return 1;
  if (fn == "imp") return 2;
  if (fn == "or") return 3;
  if (fn == "xor") return 4;
  if (fn == "and") return 5;
  return 0;
}

inline const char* infix_symbol(const std::string& fn) {
  if (fn == "eq") return " <-> ";
  if (fn == "imp") return " -> ";
  if (fn == "or") return " | ";
  if (fn == "xor") return " ^ ";
  return " & ";
}

inline bool is_builtin_named(const Formula& f, const char* name) {
  if (!f.is_apply() || f.function()->name() != name) return false;
  static const FunctionLibrary& lib = FunctionLibrary::standard();
  return lib.get(name)->same_table(*f.function());
}

inline int level_of(const Formula& f) {
  if (!f.is_apply()) return 10;
  const auto& n = f.function()->name();
  if (int l = infix_level(n); l && is_builtin_named(f, n.c_str())) return l;
  if (is_builtin_named(f, "not")) return 6;
  return 10;
}

inline void print(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case NodeKind::Proposition:
      out += f.name();
      return;
    case NodeKind::Belief:
      out += "L(";
      print(f.operand(), out);
      out += ')';
      return;
    case NodeKind::Apply:
      break;
  }
  const auto& fn = *f.function();
  if (is_builtin_named(f, "const0")) {
    out += '0';
    return;
  }
  if (is_builtin_named(f, "const1")) {
    out += '1';
    return;
  }
  const int lvl = level_of(f);
  if (lvl == 6) {
    out += '!';
    const bool paren = level_of(f.operand()) < 6;
    if (paren) out += '(';
    print(f.operand(), out);
    if (paren) out += ')';
    return;
  }
  if (lvl >= 1 && lvl <= 5) {
    // imp is right-associative, the others left-associative.
    const bool right_assoc = lvl == 2;
    const auto& a = f.args()[0];
    const auto& b = f.args()[1];
    const bool pa = right_assoc ? level_of(a) <= lvl : level_of(a) < lvl;
    const bool pb = right_assoc ? level_of(b) < lvl : level_of(b) <= lvl;
    if (pa) out += '(';
    print(a, out);
    if (pa) out += ')';
    out += infix_symbol(fn.name());
    if (pb) out += '(';
    print(b, out);
    if (pb) out += ')';
    return;
  }
  out += fn.name();
  out += '(';
  for (std::size_t i = 0; i < f.args().size(); ++i) {
    if (i) out += ", ";
    print(f.args()[i], out);
  }
  out += ')';
}

}  // namespace detail

inline Formula parse_formula(std::string_view text, const FunctionLibrary& lib = FunctionLibrary::standard(),
                             Dialect dialect = Dialect::Propositional, std::size_t line = 0) {
  return detail::FormulaParser(text, lib, dialect, line).parse();
}

inline Formula parse_ae_formula(std::string_view text, const FunctionLibrary& lib = FunctionLibrary::standard(),
                                std::size_t line = 0) {
  return parse_formula(text, lib, Dialect::Autoepistemic, line);
}

inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print(f, out);
  return out;
}

}  // namespace nmr
