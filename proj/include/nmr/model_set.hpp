#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nmr/error.hpp"
#include "nmr/formula.hpp"

namespace nmr {

// Assignment over a universe, encoded as an integer: variable i (in sorted
// order) is bit n-1-i, so the numeric order of codes is the canonical order.
using Code = std::uint32_t;

inline constexpr std::size_t kMaxUniverse = 26;

class Universe {
 public:
  Universe() = default;
  explicit Universe(const std::set<std::string>& names) : names_(names.begin(), names.end()) {
    if (names_.size() > kMaxUniverse) throw CapExceeded("universe size", names_.size(), kMaxUniverse);
    for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], i);
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::set<std::string> name_set() const { return {names_.begin(), names_.end()}; }

  std::optional<std::size_t> index_of(const std::string& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const std::string& v) const { return index_.count(v) != 0; }

  Code bit(std::size_t i) const { return Code{1} << (names_.size() - 1 - i); }
  Code bit_of(const std::string& v) const {
    auto i = index_of(v);
    if (!i) throw UnboundProposition(v);
    return bit(*i);
  }

  Code mask_of(const std::set<std::string>& vs) const {
    Code m = 0;
    for (const auto& v : vs) m |= bit_of(v);
    return m;
  }

  Code full_mask() const { return names_.empty() ? 0 : static_cast<Code>((std::uint64_t{1} << names_.size()) - 1); }

  Valuation decode(Code c) const {
    Valuation v;
    for (std::size_t i = 0; i < names_.size(); ++i) v.emplace(names_[i], (c & bit(i)) != 0);
    return v;
  }

  Code encode(const Valuation& v) const {
    Code c = 0;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      auto it = v.find(names_[i]);
      if (it == v.end()) throw UnboundProposition(names_[i]);
      if (it->second) c |= bit(i);
    }
    return c;
  }

  // Set view: the propositions that are true.
  std::vector<std::string> true_set(Code c) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (c & bit(i)) out.push_back(names_[i]);
    return out;
  }

  Code from_set(const std::set<std::string>& trues) const { return mask_of(trues); }

  std::string bits(Code c) const {
    std::string s(names_.size(), '0');
    for (std::size_t i = 0; i < names_.size(); ++i) s[i] = (c & bit(i)) ? '1' : '0';
    return s;
  }

  Code parse_bits(const std::string& s) const {
    if (s.size() != names_.size())
      throw InvalidInput("assignment '" + s + "' needs " + std::to_string(names_.size()) + " bits");
    Code c = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') throw InvalidInput("assignment '" + s + "' is not a bit string");
      if (s[i] == '1') c |= bit(i);
    }
    return c;
  }

  friend bool operator==(const Universe& a, const Universe& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
};

namespace detail {

// Bitset words with one inline word, which covers universes of up to six
// variables without touching the heap.
class WordBuffer {
 public:
  void assign(std::size_t n, std::uint64_t v) {
    size_ = n;
    small_ = v;
    if (n > 1)
      heap_.assign(n, v);
    else
      heap_.clear();
  }

  std::size_t size() const noexcept { return size_; }
  std::uint64_t* begin() noexcept { return size_ > 1 ? heap_.data() : &small_; }
  const std::uint64_t* begin() const noexcept { return size_ > 1 ? heap_.data() : &small_; }
  std::uint64_t* end() noexcept { return begin() + size_; }
  const std::uint64_t* end() const noexcept { return begin() + size_; }
  std::uint64_t& operator[](std::size_t i) noexcept { return begin()[i]; }
  std::uint64_t operator[](std::size_t i) const noexcept { return begin()[i]; }

  friend bool operator==(const WordBuffer& a, const WordBuffer& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }

 private:
  std::size_t size_ = 0;
  std::uint64_t small_ = 0;
  std::vector<std::uint64_t> heap_;
};

}  // namespace detail

// Set of assignments over an n-variable universe as a 2^n-bit bitset.
class ModelSet {
 public:
  ModelSet() : ModelSet(0) {}
  explicit ModelSet(std::size_t nvars, bool full = false) : nvars_(nvars) {
    if (nvars_ > kMaxUniverse) throw CapExceeded("universe size", nvars_, kMaxUniverse);
    words_.assign(word_count(nvars_), full ? ~std::uint64_t{0} : 0);
    trim();
  }

  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t capacity() const noexcept { return std::size_t{1} << nvars_; }
  std::size_t word_count() const noexcept { return words_.size(); }
  std::uint64_t word(std::size_t i) const { return words_[i]; }
  std::uint64_t& word(std::size_t i) { return words_[i]; }

  bool test(Code c) const { return (words_[c >> 6] >> (c & 63)) & 1U; }
  void set(Code c) { words_[c >> 6] |= std::uint64_t{1} << (c & 63); }
  void reset(Code c) { words_[c >> 6] &= ~(std::uint64_t{1} << (c & 63)); }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  bool subset_of(const ModelSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  bool intersects(const ModelSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  ModelSet& operator&=(const ModelSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  // this &= ~o without materialising the complement.
  ModelSet& subtract(const ModelSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  ModelSet& operator|=(const ModelSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  ModelSet& operator^=(const ModelSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  ModelSet& flip() {
    for (auto& w : words_) w = ~w;
    trim();
    return *this;
  }

  friend ModelSet operator&(ModelSet a, const ModelSet& b) { return a &= b; }
  friend ModelSet operator|(ModelSet a, const ModelSet& b) { return a |= b; }
  friend ModelSet operator~(ModelSet a) { return a.flip(); }
  friend bool operator==(const ModelSet& a, const ModelSet& b) = default;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        const auto b = static_cast<std::size_t>(std::countr_zero(w));
        f(static_cast<Code>(i * 64 + b));
        w &= w - 1;
      }
    }
  }

  std::vector<Code> codes() const {
    std::vector<Code> out;
    out.reserve(count());
    for_each([&](Code c) { out.push_back(c); });
    return out;
  }

  std::optional<Code> first() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return static_cast<Code>(i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i])));
    return std::nullopt;
  }

  // All codes c with (c & mask) == value.
  static ModelSet cube(std::size_t nvars, Code mask, Code value) {
    ModelSet s(nvars);
    for (std::size_t i = 0; i < s.words_.size(); ++i) s.words_[i] = cube_word(nvars, i, mask, value);
    s.trim();
    return s;
  }

  // Codes with bit `b` set, word `i`.
  static std::uint64_t bit_word(std::size_t b, std::size_t i) {
    static constexpr std::uint64_t low[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
                                             0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
    if (b < 6) return low[b];
    return ((i >> (b - 6)) & 1U) ? ~std::uint64_t{0} : 0;
  }

 private:
  static std::size_t word_count(std::size_t n) { return n <= 6 ? 1 : std::size_t{1} << (n - 6); }

  static std::uint64_t cube_word(std::size_t nvars, std::size_t i, Code mask, Code value) {
    std::uint64_t w = ~std::uint64_t{0};
    for (std::size_t b = 0; b < nvars; ++b) {
      const Code m = Code{1} << b;
      if (!(mask & m)) continue;
      const auto p = bit_word(b, i);
      w &= (value & m) ? p : ~p;
    }
    return w;
  }

  void trim() { normalize(); }

 public:
  // Clears bits beyond 2^n after raw word writes.
  void normalize() {
    if (nvars_ < 6) words_[0] &= (std::uint64_t{1} << (std::size_t{1} << nvars_)) - 1;
  }

  std::size_t nvars_;
  detail::WordBuffer words_;
};

// Truth value for a Belief node during compilation; nullopt means "not provided".
using BeliefLookup = std::function<std::optional<bool>(const Formula&)>;

namespace detail {

inline void compile_into(const Formula& f, const Universe& u, const BeliefLookup* beliefs, ModelSet& out) {
  const std::size_t n = u.size();
  switch (f.kind()) {
    case NodeKind::Proposition: {
      auto idx = u.index_of(f.name());
      if (!idx) throw UnboundProposition(f.name());
      const Code b = Code{1} << (n - 1 - *idx);
      out = ModelSet::cube(n, b, b);
      return;
    }
    case NodeKind::Belief: {
      std::optional<bool> v;
      if (beliefs && *beliefs) v = (*beliefs)(f);
      if (!v) throw InvalidInput("belief atom has no truth value in this context");
      out = ModelSet(n, *v);
      return;
    }
    case NodeKind::Apply:
      break;
  }
  const auto& fn = *f.function();
  const std::size_t k = fn.arity();
  if (k == 0) {
    out = ModelSet(n, fn(0));
    return;
  }
  std::vector<ModelSet> args(k, ModelSet(n));
  for (std::size_t j = 0; j < k; ++j) compile_into(f.args()[j], u, beliefs, args[j]);
  out = ModelSet(n);
  for (std::size_t i = 0; i < out.word_count(); ++i) {
    // Sum of minterms over the table rows that are 1.
    std::uint64_t r = 0;
    for (std::size_t row = 0; row < fn.rows(); ++row) {
      if (!fn(row)) continue;
      std::uint64_t m = ~std::uint64_t{0};
      for (std::size_t j = 0; j < k; ++j) m &= arg_bit(row, k, j) ? args[j].word(i) : ~args[j].word(i);
      r |= m;
    }
    out.word(i) = r;
  }
  out.normalize();
}

}  // namespace detail

// Set of assignments over `u` that satisfy `f`.
inline ModelSet compile(const Formula& f, const Universe& u, const BeliefLookup* beliefs = nullptr) {
  ModelSet out(u.size());
  detail::compile_into(f, u, beliefs, out);
  return out;
}

}  // namespace nmr
