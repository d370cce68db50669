#include <gtest/gtest.h>

#include <bit>
#include <map>

#include "nmr/post_lattice.hpp"

using namespace nmr;

namespace {

BooleanFunction fn(const char* n) { return builtin::make(n); }

// Direct definition: largest m such that every m-subset of f^{-1}(c) is
// c-separating (smaller subsets inherit separation); whole set separating = inf.
SepDegree sep_oracle(const BooleanFunction& f0, bool c) {
  const BooleanFunction f = f0.arity() ? f0 : BooleanFunction::from_rows(f0.name(), 1, [&](std::size_t) { return f0(0); });
  const std::size_t n = f.arity();
  std::vector<std::size_t> zs;
  for (std::size_t r = 0; r < f.rows(); ++r)
    if (f(r) == c) zs.push_back(r);
  auto separating = [&](const std::vector<std::size_t>& a) {
    for (std::size_t j = 0; j < n; ++j) {
      bool all = true;
      for (auto r : a) all = all && arg_bit(r, n, j) == c;
      if (all) return true;
    }
    return false;
  };
  if (separating(zs)) return SepDegree::infinite();
  for (std::size_t m = 1; m <= zs.size(); ++m) {
    // Enumerate m-subsets by index combination.
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    while (true) {
      std::vector<std::size_t> a;
      for (auto i : idx) a.push_back(zs[i]);
      if (!separating(a)) return SepDegree::finite(m - 1);
      std::size_t i = m;
      while (i > 0 && idx[i - 1] == zs.size() - m + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t k = i; k < m; ++k) idx[k] = idx[k - 1] + 1;
    }
  }
  return SepDegree::infinite();
}

}  // namespace

TEST(Dual, Examples) {
  EXPECT_TRUE(dual(fn("and")).same_table(fn("or")));
  EXPECT_TRUE(dual(fn("not")).same_table(fn("not")));
  EXPECT_TRUE(dual(threshold(3, 2)).same_table(threshold(3, 2)));
  EXPECT_TRUE(dual(fn("const0")).same_table(fn("const1")));
}

TEST(Dual, Involution) {
  for (std::size_t k = 0; k <= 3; ++k)
    for (std::size_t t = 0; t < (std::size_t{1} << (std::size_t{1} << k)); ++t) {
      auto f = BooleanFunction::from_rows("f", k, [&](std::size_t r) { return (t >> r) & 1U; });
      EXPECT_TRUE(dual(dual(f)).same_table(f));
    }
}

TEST(Profile, Examples) {
  const auto a = property_profile(fn("and"));
  EXPECT_TRUE(a.monotone);
  EXPECT_TRUE(a.reproducing0);
  EXPECT_TRUE(a.reproducing1);
  EXPECT_FALSE(a.affine);
  EXPECT_TRUE(property_profile(fn("imp")).sep0_degree.is_infinite());
  const auto x = property_profile(fn("xor"));
  EXPECT_TRUE(x.affine);
  EXPECT_TRUE(x.reproducing0);
  EXPECT_FALSE(x.reproducing1);
}

TEST(Profile, ArityCap) {
  EXPECT_THROW(property_profile(threshold(9, 8)), CapExceeded);
}

TEST(SeparatingDegree, Examples) {
  EXPECT_TRUE(separating_degree(fn("imp"), false).is_infinite());
  EXPECT_TRUE(separating_degree(fn("or"), false).is_infinite());
  EXPECT_TRUE(separating_degree(fn("xor"), false).is_none());
  // T^{n+1}_n is 1-separating of degree exactly n.
  for (std::size_t n = 2; n <= 5; ++n) {
    EXPECT_EQ(separating_degree(threshold(n + 1, n), true), SepDegree::finite(n));
    EXPECT_EQ(separating_degree(dual(threshold(n + 1, n)), false), SepDegree::finite(n));
  }
  // nand has a single zero (1,1) which no coordinate separates.
  EXPECT_TRUE(separating_degree(BooleanFunction::from_bits("nand", 2, "1110"), false).is_none());
  EXPECT_TRUE(separating_degree(fn("const1"), false).is_infinite());
  EXPECT_TRUE(separating_degree(fn("const0"), false).is_none());
}

TEST(SeparatingDegree, MatchesDefinitionUpToArity4) {
  for (std::size_t k = 0; k <= 4; ++k)
    for (std::size_t t = 0; t < (std::size_t{1} << (std::size_t{1} << k)); ++t) {
      auto f = BooleanFunction::from_rows("f", k, [&](std::size_t r) { return (t >> r) & 1U; });
      ASSERT_EQ(separating_degree(f, false), sep_oracle(f, false)) << f.bits();
      ASSERT_EQ(separating_degree(f, true), sep_oracle(f, true)) << f.bits();
    }
}

TEST(Profile, MatchesDefinitionsUpToArity3) {
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t t = 0; t < (std::size_t{1} << (std::size_t{1} << k)); ++t) {
      auto f = BooleanFunction::from_rows("f", k, [&](std::size_t r) { return (t >> r) & 1U; });
      const auto p = property_profile(f);
      const std::size_t rows = f.rows(), full = rows - 1;
      bool mono = true, sd = true;
      for (std::size_t a = 0; a < rows; ++a)
        for (std::size_t b = 0; b < rows; ++b)
          if ((a & b) == a && f(a) && !f(b)) mono = false;
      for (std::size_t a = 0; a < rows; ++a)
        if (f(a) != !f(full & ~a)) sd = false;
      bool aff = false;
      for (std::size_t s = 0; s < rows; ++s)
        for (int c = 0; c < 2; ++c) {
          bool ok = true;
          for (std::size_t a = 0; a < rows; ++a) ok = ok && f(a) == ((std::popcount(a & s) + c) % 2 == 1);
          aff = aff || ok;
        }
      bool conj = false, disj = false, proj = false;
      for (std::size_t s = 1; s < rows; ++s) {
        bool c1 = true, d1 = true;
        for (std::size_t a = 0; a < rows; ++a) {
          c1 = c1 && f(a) == ((a & s) == s);
          d1 = d1 && f(a) == ((a & s) != 0);
        }
        conj = conj || c1;
        disj = disj || d1;
        if (std::popcount(s) == 1) proj = proj || c1;
      }
      const bool constant = f.count_ones() == 0 || f.count_ones() == rows;
      std::size_t deps = 0;
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t b = std::size_t{1} << j;
        for (std::size_t a = 0; a < rows; ++a)
          if (f(a) != f(a ^ b)) {
            ++deps;
            break;
          }
      }
      EXPECT_EQ(p.monotone, mono);
      EXPECT_EQ(p.self_dual, sd);
      EXPECT_EQ(p.affine, aff);
      EXPECT_EQ(p.conjunction_or_constant, conj || constant);
      EXPECT_EQ(p.disjunction_or_constant, disj || constant);
      EXPECT_EQ(p.constant_or_projection, proj || constant);
      EXPECT_EQ(p.essentially_unary, deps <= 1);
      EXPECT_EQ(p.reproducing0, !f(0));
      EXPECT_EQ(p.reproducing1, f(full));
    }
}

TEST(CloneContains, Examples) {
  EXPECT_TRUE(clone_contains(Clone::fixed(CloneId::M), fn("and")));
  EXPECT_TRUE(clone_contains(Clone::fixed(CloneId::D), fn("not")));
  EXPECT_FALSE(clone_contains(Clone::fixed(CloneId::L), fn("and")));
}

TEST(CloneOf, Examples) {
  EXPECT_EQ(clone_of({fn("and"), fn("not")}).str(), "BF");
  EXPECT_EQ(clone_of({fn("or")}).str(), "V2");
  EXPECT_EQ(clone_of({fn("xor"), fn("const1")}).str(), "L");
  EXPECT_EQ(clone_of({fn("xor")}).str(), "L0");
  EXPECT_EQ(clone_of({}).str(), "I2");
  EXPECT_EQ(clone_of({fn("imp")}).str(), "S0");
  EXPECT_EQ(clone_of({threshold(3, 2)}).str(), "D2");
  EXPECT_EQ(clone_of({threshold(4, 3)}).str(), "S10^3");
}

TEST(CloneLeq, Examples) {
  EXPECT_TRUE(clone_leq(Clone::fixed(CloneId::I2), Clone::fixed(CloneId::BF)));
  EXPECT_TRUE(clone_leq(Clone::fixed(CloneId::E2), Clone::fixed(CloneId::E)));
  EXPECT_FALSE(clone_leq(Clone::fixed(CloneId::V2), Clone::fixed(CloneId::E2)));
  EXPECT_TRUE(clone_leq(Clone::fixed(CloneId::S0), Clone::param(CloneId::S0n, 3)));
  EXPECT_TRUE(clone_leq(Clone::param(CloneId::S0n, 4), Clone::param(CloneId::S0n, 3)));
  EXPECT_FALSE(clone_leq(Clone::param(CloneId::S0n, 3), Clone::param(CloneId::S0n, 4)));
  EXPECT_TRUE(clone_leq(Clone::fixed(CloneId::V2), Clone::fixed(CloneId::R1)));
}

TEST(BaseOf, Examples) {
  auto s10 = base_of(Clone::fixed(CloneId::S10));
  ASSERT_EQ(s10.size(), 1u);
  EXPECT_EQ(s10[0].bits(), "00000111");
  auto n2 = base_of(Clone::fixed(CloneId::N2));
  ASSERT_EQ(n2.size(), 1u);
  EXPECT_TRUE(n2[0].same_table(fn("not")));
  auto d2 = base_of(Clone::fixed(CloneId::D2));
  ASSERT_EQ(d2.size(), 1u);
  EXPECT_TRUE(d2[0].same_table(threshold(3, 2)));
}

TEST(GoldenTable, CloneOfBaseIsIdentity) {
  const auto clones = all_clones(2, 4);
  EXPECT_GE(clones.size(), 45u);
  for (const auto& c : clones) EXPECT_EQ(clone_of(base_of(c)), c) << c.str();
}

TEST(GoldenTable, ParseRoundTrip) {
  for (const auto& c : all_clones(2, 4)) EXPECT_EQ(parse_clone(c.str()), c);
  EXPECT_THROW(parse_clone("Q7"), InvalidInput);
  EXPECT_THROW(parse_clone("S0^1"), InvalidInput);
}

TEST(GoldenTable, DualityPairing) {
  const std::map<std::string, std::string> pairs = {
      {"BF", "BF"},   {"R0", "R1"},   {"R2", "R2"},   {"M", "M"},     {"M0", "M1"},   {"M2", "M2"},
      {"S0", "S1"},   {"S02", "S12"}, {"S01", "S11"}, {"S00", "S10"}, {"D", "D"},     {"D1", "D1"},
      {"D2", "D2"},   {"L", "L"},     {"L0", "L1"},   {"L2", "L2"},   {"L3", "L3"},   {"E", "V"},
      {"E0", "V1"},   {"E1", "V0"},   {"E2", "V2"},   {"N", "N"},     {"N2", "N2"},   {"I", "I"},
      {"I0", "I1"},   {"I2", "I2"},   {"S0^3", "S1^3"}, {"S02^2", "S12^2"}, {"S01^4", "S11^4"}, {"S00^3", "S10^3"}};
  for (const auto& [a, b] : pairs) {
    EXPECT_EQ(dual_clone(parse_clone(a)).str(), b) << a;
    EXPECT_EQ(dual_clone(parse_clone(b)).str(), a) << b;
  }
  for (const auto& c : all_clones(2, 4)) EXPECT_EQ(dual_clone(dual_clone(c)), c) << c.str();
}

TEST(GoldenTable, JoinWithConstantOne) {
  const BooleanFunction one = fn("const1");
  auto join1 = [&](const Clone& c) {
    auto b = base_of(c);
    b.push_back(one);
    return clone_of(b);
  };
  EXPECT_EQ(join1(Clone::fixed(CloneId::S1)).str(), "BF");
  EXPECT_EQ(join1(Clone::fixed(CloneId::D)).str(), "BF");
  for (const auto& c : all_clones(2, 4)) {
    auto b = base_of(c);
    for (const auto& f : base_of(Clone::fixed(CloneId::I1))) b.push_back(f);
    EXPECT_EQ(join1(c), clone_of(b)) << c.str();
    EXPECT_TRUE(clone_leq(c, join1(c)));
    EXPECT_TRUE(clone_leq(Clone::fixed(CloneId::I1), join1(c)));
  }
}

TEST(Properties, MonotoneFunctionsGenerateSubclonesOfM) {
  const Clone m = Clone::fixed(CloneId::M);
  for (std::size_t k = 0; k <= 3; ++k)
    for (std::size_t t = 0; t < (std::size_t{1} << (std::size_t{1} << k)); ++t) {
      auto f = BooleanFunction::from_rows("f", k, [&](std::size_t r) { return (t >> r) & 1U; });
      const Clone c = clone_of({f});
      EXPECT_EQ(property_profile(f).monotone, clone_leq(c, m)) << f.bits();
      EXPECT_TRUE(clone_contains(c, f));
    }
}

TEST(Properties, CloneOfIsLeastRowContainingB) {
  // For random pairs of small functions: every row containing B contains clone_of(B).
  const auto rows = all_clones(2, 4);
  std::size_t seed = 12345;
  for (int i = 0; i < 200; ++i) {
    std::vector<BooleanFunction> b;
    for (int j = 0; j < 2; ++j) {
      seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
      const std::size_t k = 1 + (seed >> 60) % 3;
      const std::size_t t = (seed >> 20) & ((std::size_t{1} << (std::size_t{1} << k)) - 1);
      b.push_back(BooleanFunction::from_rows("f", k, [&](std::size_t r) { return (t >> r) & 1U; }));
    }
    const Clone c = clone_of(b);
    for (const auto& f : b) EXPECT_TRUE(clone_contains(c, f));
    for (const auto& r : rows) {
      bool contains_all = true;
      for (const auto& f : b) contains_all = contains_all && clone_contains(r, f);
      if (contains_all) EXPECT_TRUE(clone_leq(c, r)) << c.str() << " vs " << r.str();
    }
  }
}
