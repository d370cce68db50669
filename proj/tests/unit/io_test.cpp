#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "nmr/io.hpp"

using namespace nmr;

namespace {

std::string sample(const std::string& name) {
  std::ifstream in(std::string(NMR_SAMPLES_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t error_line(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Io, ContentLines) {
  const auto ls = content_lines("a\n\n  # note\n b # tail\r\n");
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0].number, 1u);
  EXPECT_EQ(ls[1].number, 4u);
  EXPECT_EQ(ls[1].text, "b");
}

TEST(Io, InlineFunction) {
  auto f = parse_inline_function("g/2=0110");
  ASSERT_TRUE(f);
  EXPECT_EQ(f->name(), "g");
  EXPECT_EQ(f->bits(), "0110");
  EXPECT_FALSE(parse_inline_function("x | y"));
  EXPECT_THROW(parse_inline_function("g/2=011"), InvalidInput);
}

TEST(Io, DefaultTheoryFile) {
  const auto t = read_default_theory(sample("default_choice.txt"));
  EXPECT_TRUE(t.facts().empty());
  ASSERT_EQ(t.rules().size(), 2u);
  EXPECT_EQ(to_string(t.rules()[0].conclusion), "!y");
  EXPECT_EQ(count_stable_extensions(t), 2u);

  const auto back = read_default_theory(write_default_theory(t));
  EXPECT_EQ(back.rules(), t.rules());

  EXPECT_EQ(error_line([] { read_default_theory("x\n"); }), 1u);
  EXPECT_EQ(error_line([] { read_default_theory("W:\nx\nD:\nx / y\n"); }), 4u);
  EXPECT_EQ(error_line([] { read_default_theory("W:\nx &\n"); }), 2u);
  EXPECT_EQ(error_line([] { read_default_theory("W: x\n"); }), 1u);
}

TEST(Io, CustomFunctionRoundTrip) {
  const auto t = read_default_theory(sample("custom_function.txt"));
  const auto text = write_default_theory(t);
  EXPECT_NE(text.find("f/3=00010111"), std::string::npos);
  const auto back = read_default_theory(text);
  EXPECT_EQ(write_default_theory(back), text);
  EXPECT_EQ(count_stable_extensions(back), count_stable_extensions(t));
  EXPECT_EQ(error_line([] { read_theory("g/2=0110\ng/2=1001\n"); }), 2u);
}

TEST(Io, AeTheoryFile) {
  const auto s = read_ae_theory(sample("ael_two_expansions.txt"));
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(count_expansions(s), 2u);
  EXPECT_EQ(read_ae_theory(write_theory(s)), s);
  EXPECT_THROW(read_theory("L(x)\n"), ParseError);
}

TEST(Io, QbfFile) {
  const auto q = read_qbf(sample("qbf_nnf.txt"));
  EXPECT_EQ(q.exists, (std::vector<std::string>{"x1", "x2"}));
  EXPECT_EQ(q.forall, (std::vector<std::string>{"y1"}));
  const auto back = read_qbf(write_qbf(q));
  EXPECT_EQ(back.matrix, q.matrix);
  EXPECT_THROW(read_qbf("exists x; y; x | y"), ParseError);
  EXPECT_THROW(read_qbf("exists x; forall y"), ParseError);
  EXPECT_THROW(read_qbf("exists x; forall y; x | z"), ParseError);
  const auto empty = read_qbf("exists ; forall y; y | !y");
  EXPECT_TRUE(empty.exists.empty());
}

TEST(Io, CircFile) {
  const auto p = read_circ(sample("circ_minimize_x.txt"));
  EXPECT_EQ(p.partition().p, (std::set<std::string>{"x"}));
  EXPECT_EQ(p.partition().z, (std::set<std::string>{"y", "z"}));
  EXPECT_TRUE(p.partition().q.empty());
  EXPECT_EQ(count_minimal_models(p), 4u);
  const auto back = read_circ(write_circ(p));
  EXPECT_EQ(back.partition().p, p.partition().p);
  EXPECT_EQ(back.partition().z, p.partition().z);
  EXPECT_EQ(back.theory(), p.theory());

  const auto q = read_circ("P: a\nV: c\na | b\n");
  EXPECT_EQ(q.partition().q, (std::set<std::string>{"b", "c"}));
  EXPECT_EQ(read_circ(write_circ(q)).partition().q, q.partition().q);
  EXPECT_THROW(read_circ("P: a\nZ: a\na\n"), InvalidInput);
}

TEST(Io, AbductionFile) {
  const auto inst = read_abduction(sample("abduce_two_causes.txt"));
  EXPECT_EQ(inst.kind(), QueryKind::Proposition);
  EXPECT_EQ(count_explanations(inst), 5u);
  const auto pos = read_abduction(sample("abduce_positive.txt"));
  EXPECT_EQ(pos.mode(), ExplanationMode::Positive);

  EXPECT_EQ(read_abduction("x -> q & r\nA: x\nQ: q & r\n").kind(), QueryKind::Term);
  EXPECT_EQ(read_abduction("x -> q\nA: x\nQ: !q | x\n").kind(), QueryKind::Clause);
  EXPECT_EQ(read_abduction("x -> q\nA: x\nQ: !q\n").kind(), QueryKind::Literal);
  EXPECT_EQ(read_abduction("x -> q\nA: x\nQ: q <-> x\n").kind(), QueryKind::Formula);
  EXPECT_EQ(read_abduction("x -> q\nA: x\nQ: q\nkind: formula\n").kind(), QueryKind::Formula);
  EXPECT_THROW(read_abduction("x -> q\nA: x\n"), ParseError);
  EXPECT_EQ(error_line([] { read_abduction("x -> q\nA: x\nQ: q\nmode: some\n"); }), 4u);
  EXPECT_EQ(error_line([] { read_abduction("x -> q\nA: w\nQ: q\n"); }), 3u);
}

TEST(Io, RelationFile) {
  const auto rf = read_relations(sample("relations.txt"));
  ASSERT_EQ(rf.relations.size(), 2u);
  EXPECT_EQ(rf.relations[0].name(), "IMP");
  EXPECT_EQ(rf.constraints.applications().size(), 2u);
  EXPECT_EQ(rf.constraints.universe(), (std::set<std::string>{"x", "y", "z"}));
  EXPECT_EQ(error_line([] { read_relations("rel R/2 = 00,1\n"); }), 1u);
  EXPECT_EQ(error_line([] { read_relations("rel R/2 = 00\nS(x, y)\n"); }), 2u);
  EXPECT_EQ(error_line([] { read_relations("rel R/2 = 00\nR(x)\n"); }), 2u);
  EXPECT_EQ(error_line([] { read_relations("rel R/1 = 0\nrel R/1 = 1\n"); }), 2u);
}

TEST(Io, CnfFile) {
  const auto c = read_cnf(sample("cnf.txt"));
  EXPECT_EQ(c.clauses.size(), 3u);
  EXPECT_TRUE(c.is_3cnf());
}
