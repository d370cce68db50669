#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nmr/error.hpp"

namespace nmr {

inline constexpr std::size_t kMaxTableArity = 16;

// Finite Boolean function stored as a packed truth table. Row i holds the value
// on the input whose bits, most significant first, spell i; so x1 is the MSB.
class BooleanFunction {
 public:
  BooleanFunction(std::string name, std::size_t arity) : name_(std::move(name)), arity_(arity) {
    if (arity_ > kMaxTableArity) throw CapExceeded("truth table arity", arity_, kMaxTableArity);
    words_.assign(((std::size_t{1} << arity_) + 63) / 64, 0);
  }

  // `bits` lists the table from row 0 upward, e.g. "0001" for conjunction.
  static BooleanFunction from_bits(std::string name, std::size_t arity, std::string_view bits) {
    BooleanFunction f(std::move(name), arity);
    if (bits.size() != f.rows())
      throw InvalidInput("function '" + f.name_ + "' of arity " + std::to_string(arity) + " needs " +
                         std::to_string(f.rows()) + " table bits, got " + std::to_string(bits.size()));
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] != '0' && bits[i] != '1')
        throw InvalidInput("truth table of '" + f.name_ + "' contains '" + std::string(1, bits[i]) + "'");
      f.set(i, bits[i] == '1');
    }
    return f;
  }

  template <class F>
  static BooleanFunction from_rows(std::string name, std::size_t arity, F&& value_of_row) {
    BooleanFunction f(std::move(name), arity);
    for (std::size_t i = 0; i < f.rows(); ++i) f.set(i, static_cast<bool>(value_of_row(i)));
    return f;
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t arity() const noexcept { return arity_; }
  std::size_t rows() const noexcept { return std::size_t{1} << arity_; }

  bool operator()(std::size_t row) const { return (words_[row >> 6] >> (row & 63)) & 1U; }

  // Value on explicit arguments, x1 first.
  bool apply(const std::vector<bool>& args) const {
    std::size_t row = 0;
    for (bool a : args) row = (row << 1) | (a ? 1U : 0U);
    return (*this)(row);
  }

  std::size_t count_ones() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  std::string bits() const {
    std::string s(rows(), '0');
    for (std::size_t i = 0; i < rows(); ++i) s[i] = (*this)(i) ? '1' : '0';
    return s;
  }

  BooleanFunction renamed(std::string name) const {
    BooleanFunction f = *this;
    f.name_ = std::move(name);
    return f;
  }

  bool same_table(const BooleanFunction& o) const { return arity_ == o.arity_ && words_ == o.words_; }

  friend bool operator==(const BooleanFunction& a, const BooleanFunction& b) {
    return a.name_ == b.name_ && a.same_table(b);
  }

 private:
  void set(std::size_t row, bool v) {
    const auto bit = std::uint64_t{1} << (row & 63);
    if (v)
      words_[row >> 6] |= bit;
    else
      words_[row >> 6] &= ~bit;
  }

  std::string name_;
  std::size_t arity_;
  std::vector<std::uint64_t> words_;
};

using FunctionPtr = std::shared_ptr<const BooleanFunction>;

// Bit of argument j (0-based, x1 = 0) inside row index `row` of an arity-n table.
constexpr bool arg_bit(std::size_t row, std::size_t n, std::size_t j) { return (row >> (n - 1 - j)) & 1U; }

// T^{k}_{t}: 1 iff at least t of the k inputs are 1.
inline BooleanFunction threshold(std::size_t k, std::size_t t) {
  return BooleanFunction::from_rows("T" + std::to_string(k) + "_" + std::to_string(t), k,
                                    [t](std::size_t row) { return static_cast<std::size_t>(std::popcount(row)) >= t; });
}

namespace builtin {

inline BooleanFunction make(std::string_view name) {
  using B = BooleanFunction;
  if (name == "and") return B::from_bits("and", 2, "0001");
  if (name == "or") return B::from_bits("or", 2, "0111");
  if (name == "not") return B::from_bits("not", 1, "10");
  if (name == "xor") return B::from_bits("xor", 2, "0110");
  if (name == "eq") return B::from_bits("eq", 2, "1001");
  if (name == "imp") return B::from_bits("imp", 2, "1101");
  if (name == "nimp") return B::from_bits("nimp", 2, "0010");
  if (name == "const0") return B::from_bits("const0", 0, "0");
  if (name == "const1") return B::from_bits("const1", 0, "1");
  if (name == "id") return B::from_bits("id", 1, "01");
  if (name == "maj") return threshold(3, 2).renamed("maj");
  throw InvalidInput("no builtin function '" + std::string(name) + "'");
}

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> all = {"and", "or",     "not",    "xor", "eq", "imp",
                                               "nimp", "const0", "const1", "id",  "maj"};
  return all;
}

}  // namespace builtin

// Name -> function map. The builtins are always present and cannot be redefined.
class FunctionLibrary {
 public:
  FunctionLibrary() {
    for (const auto& n : builtin::names()) table_.emplace(n, std::make_shared<const BooleanFunction>(builtin::make(n)));
  }

  static const FunctionLibrary& standard() {
    static const FunctionLibrary lib;
    return lib;
  }

  FunctionPtr declare(BooleanFunction f) {
    if (f.name() == "L") throw InvalidInput("'L' is reserved for the belief operator");
    auto [it, inserted] = table_.emplace(f.name(), nullptr);
    if (!inserted) {
      if (it->second->same_table(f)) return it->second;
      throw InvalidInput("function '" + f.name() + "' is already defined");
    }
    it->second = std::make_shared<const BooleanFunction>(std::move(f));
    return it->second;
  }

  FunctionPtr find(std::string_view name) const {
    auto it = table_.find(std::string(name));
    return it == table_.end() ? nullptr : it->second;
  }

  FunctionPtr get(std::string_view name) const {
    auto f = find(name);
    if (!f) throw InvalidInput("unknown function '" + std::string(name) + "'");
    return f;
  }

  const std::map<std::string, FunctionPtr>& entries() const noexcept { return table_; }

 private:
  std::map<std::string, FunctionPtr> table_;
};

}  // namespace nmr
