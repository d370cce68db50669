#include <gtest/gtest.h>

#include <random>

#include "nmr/abduction.hpp"
#include "nmr/parser.hpp"
#include "oracles.hpp"

using namespace nmr;

namespace nmr {
void PrintTo(const Literal& l, std::ostream* os) { *os << (l.positive ? "" : "!") << l.var; }
}  // namespace nmr

namespace {

Theory th(std::initializer_list<const char*> fs) {
  Theory t;
  for (auto f : fs) t.add(parse_formula(f));
  return t;
}

Explanation ex(std::initializer_list<std::pair<const char*, bool>> ls) {
  Explanation e;
  for (auto [v, p] : ls) e.literals.push_back({v, p});
  return e;
}

// Every literal set over A checked directly on valuations.
struct OracleResult {
  std::vector<std::vector<Literal>> all;
  std::vector<std::vector<Literal>> minimal;
};

OracleResult oracle_explanations(const AbductionInstance& inst) {
  const std::vector<std::string> hyps(inst.hypotheses().begin(), inst.hypotheses().end());
  std::set<std::string> universe = inst.knowledge().universe();
  collect_vars(inst.query(), universe);
  const bool lits = inst.mode() == ExplanationMode::Literals;
  const std::size_t k = hyps.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= lits ? 3 : 2;

  auto is_expl = [&](const std::vector<Literal>& e) {
    auto fs = inst.knowledge().formulas();
    for (const auto& l : e) fs.push_back(l.formula());
    return !oracle::models(fs, universe).empty() && oracle::entails(fs, inst.query(), universe);
  };
  OracleResult out;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<Literal> e;
    std::size_t c = code;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t d = c % (lits ? 3 : 2);
      c /= lits ? 3 : 2;
      if (d == 1) e.push_back({hyps[i], true});
      if (d == 2) e.push_back({hyps[i], false});
    }
    if (is_expl(e)) out.all.push_back(e);
  }
  // Minimal: no proper subset (any size) is an explanation.
  for (const auto& e : out.all) {
    bool minimal = true;
    for (const auto& o : out.all) {
      if (o.size() >= e.size()) continue;
      if (std::includes(e.begin(), e.end(), o.begin(), o.end())) minimal = false;
    }
    if (minimal) out.minimal.push_back(e);
  }
  std::sort(out.all.begin(), out.all.end());
  std::sort(out.minimal.begin(), out.minimal.end());
  return out;
}

std::vector<std::vector<Literal>> as_sets(const std::vector<Explanation>& es) {
  std::vector<std::vector<Literal>> out;
  for (const auto& e : es) out.push_back(e.literals);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Abduction, TwoCauses) {
  const AbductionInstance inst(th({"x -> q", "y -> q"}), {"x", "y"}, parse_formula("q"));
  const auto all = explanations(inst);
  ASSERT_EQ(all.size(), 5u);
  EXPECT_EQ(all.front(), ex({{"x", true}}));
  EXPECT_EQ(count_explanations(inst), 5u);
  const auto mins = subset_minimal_explanations(inst);
  ASSERT_EQ(mins.size(), 2u);
  EXPECT_EQ(mins[0], ex({{"x", true}}));
  EXPECT_EQ(mins[1], ex({{"y", true}}));
  EXPECT_EQ(count_subset_minimal(inst), 2u);
  EXPECT_TRUE(is_explanation(inst, ex({{"x", true}, {"y", false}})));
  EXPECT_FALSE(is_explanation(inst, ex({{"x", false}})));
  EXPECT_FALSE(is_explanation(inst, ex({})));
  EXPECT_THROW(is_explanation(inst, ex({{"q", true}})), InvalidInput);
}

TEST(Abduction, EmptySetCountsWhenQueryAlreadyFollows) {
  const AbductionInstance inst(th({"q", "x | q"}), {"x"}, parse_formula("q"));
  const auto mins = subset_minimal_explanations(inst);
  ASSERT_EQ(mins.size(), 1u);
  EXPECT_TRUE(mins[0].literals.empty());
  EXPECT_EQ(count_explanations(inst), 3u);
}

TEST(Abduction, NoExplanation) {
  EXPECT_FALSE(explanation_exists(AbductionInstance(th({"!q", "x | q"}), {"x"}, parse_formula("q"))));
  EXPECT_FALSE(explanation_exists(AbductionInstance(th({"x -> !q", "q | y"}), {"x", "y"},
                                                    parse_formula("0"), QueryKind::Formula)));
}

TEST(Abduction, PositiveMode) {
  const AbductionInstance inst(th({"a -> q"}), {"a"}, parse_formula("q"), QueryKind::Proposition,
                               ExplanationMode::Positive);
  EXPECT_EQ(count_explanations(inst), 1u);
  EXPECT_EQ(count_subset_minimal(inst), 1u);
  EXPECT_THROW(is_explanation(inst, ex({{"a", false}})), InvalidInput);

  // Only a negative literal would explain q.
  const AbductionInstance neg(th({"!a -> q", "a -> !q"}), {"a"}, parse_formula("q"), QueryKind::Proposition,
                              ExplanationMode::Positive);
  EXPECT_FALSE(explanation_exists(neg));
}

TEST(Abduction, QueryShapes) {
  const Theory t = th({"x -> (q & r)", "y -> (q | r)"});
  const AbductionInstance term(t, {"x", "y"}, parse_formula("q & r"), QueryKind::Term);
  EXPECT_EQ(as_sets(subset_minimal_explanations(term)), (std::vector<std::vector<Literal>>{{{"x", true}}}));
  const AbductionInstance clause(t, {"x", "y"}, parse_formula("q | r"), QueryKind::Clause);
  EXPECT_EQ(count_subset_minimal(clause), 2u);
  const AbductionInstance lit(t, {"x", "y"}, parse_formula("!q"), QueryKind::Literal);
  EXPECT_FALSE(explanation_exists(lit));
}

TEST(Abduction, Validation) {
  const Theory t = th({"x -> q"});
  EXPECT_THROW(AbductionInstance(t, {"w"}, parse_formula("q")), InvalidInput);
  EXPECT_THROW(AbductionInstance(t, {"x"}, parse_formula("x")), InvalidInput);
  EXPECT_THROW(AbductionInstance(t, {"x"}, parse_formula("z")), InvalidInput);
  EXPECT_THROW(AbductionInstance(t, {"x"}, parse_formula("q & x")), InvalidInput);
  EXPECT_THROW(AbductionInstance(t, {"x"}, parse_formula("q | x"), QueryKind::Term), InvalidInput);
  EXPECT_THROW(AbductionInstance(t, {"x"}, parse_formula("q & x"), QueryKind::Clause), InvalidInput);
  EXPECT_THROW(AbductionInstance(t, {"x"}, parse_formula("q & x"), QueryKind::Literal), InvalidInput);
  EXPECT_NO_THROW(AbductionInstance(t, {"x"}, parse_formula("!q | !x"), QueryKind::Clause));
  EXPECT_EQ(parse_query_kind("term"), QueryKind::Term);
  EXPECT_THROW(parse_query_kind("cube"), InvalidInput);

  Limits lim;
  lim.max_hypotheses = 1;
  const AbductionInstance two(th({"x -> q", "y -> q"}), {"x", "y"}, parse_formula("q"));
  EXPECT_THROW(count_explanations(two, lim), CapExceeded);
}

TEST(Abduction, MatchesBruteForce) {
  auto pool = oracle::std_fns({"and", "or", "not", "imp", "xor"});
  const auto names = oracle::var_names(5);
  oracle::FormulaGen gen(51, names, pool);
  std::mt19937_64 rng(51);
  int nonempty = 0;
  for (int i = 0; i < 300; ++i) {
    Theory t;
    for (int k = 0; k < 1 + i % 3; ++k) t.add(gen.gen(3));
    const auto gv = vars(t);
    if (gv.size() < 2) continue;
    const std::vector<std::string> vs(gv.begin(), gv.end());
    const std::string q = vs[rng() % vs.size()];
    std::set<std::string> hyps;
    for (const auto& v : vs)
      if (v != q && rng() % 3 != 0) hyps.insert(v);
    const auto mode = i % 2 ? ExplanationMode::Positive : ExplanationMode::Literals;
    const AbductionInstance inst(t, hyps, Formula::prop(q), QueryKind::Proposition, mode);
    const auto ref = oracle_explanations(inst);
    Limits lim;
    lim.threads = i % 4 == 0 ? 3 : 1;
    EXPECT_EQ(as_sets(explanations(inst, lim)), ref.all) << i;
    EXPECT_EQ(as_sets(subset_minimal_explanations(inst, lim)), ref.minimal) << i;
    EXPECT_EQ(explanation_exists(inst), !ref.all.empty());
    nonempty += !ref.minimal.empty();
  }
  EXPECT_GT(nonempty, 30);
}

TEST(Abduction, OrderIsCanonical) {
  const AbductionInstance inst(th({"(a & b) -> q", "c -> q"}), {"a", "b", "c"}, parse_formula("q"));
  const auto all = explanations(inst);
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_TRUE(all[i - 1] < all[i]);
  Limits par;
  par.threads = 4;
  EXPECT_EQ(explanations(inst, par), all);
}
