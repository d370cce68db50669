#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "nmr/boolean_function.hpp"
#include "nmr/error.hpp"
#include "nmr/limits.hpp"
#include "nmr/post_lattice.hpp"
#include "nmr/schaefer.hpp"

namespace nmr {

enum class ProblemId {
  DefaultExtensionExistence,
  DefaultCredulous,
  DefaultSkeptical,
  DefaultCount,
  AelExpansionExistence,
  AelCredulous,
  AelSkeptical,
  AelCount,
  CircModelCheck,
  CircInference,
  CircCountMinimal,
  AbductionExists,
  AbductionCount,
  AbductionCountPositive,
  AbductionCountMinimal,
};

inline constexpr std::array<ProblemId, 15> kAllProblems = {
    ProblemId::DefaultExtensionExistence, ProblemId::DefaultCredulous,      ProblemId::DefaultSkeptical,
    ProblemId::DefaultCount,              ProblemId::AelExpansionExistence, ProblemId::AelCredulous,
    ProblemId::AelSkeptical,              ProblemId::AelCount,              ProblemId::CircModelCheck,
    ProblemId::CircInference,             ProblemId::CircCountMinimal,      ProblemId::AbductionExists,
    ProblemId::AbductionCount,            ProblemId::AbductionCountPositive, ProblemId::AbductionCountMinimal};

inline std::string_view problem_name(ProblemId p) {
  constexpr std::array<std::string_view, 15> names = {
      "default.extension_existence", "default.credulous", "default.skeptical", "default.count",
      "ael.expansion_existence",     "ael.credulous",     "ael.skeptical",     "ael.count",
      "circ.model_check",            "circ.inference",    "circ.count_minimal", "abduction.exists",
      "abduction.count",             "abduction.count_positive", "abduction.count_minimal"};
  return names[static_cast<std::size_t>(p)];
}

inline ProblemId parse_problem(std::string_view s) {
  for (auto p : kAllProblems)
    if (problem_name(p) == s) return p;
  throw InvalidInput("unknown problem id '" + std::string(s) + "'");
}

struct ComplexityVerdict {
  std::string problem;
  std::string fragment;
  std::string class_name;
  int theorem = 0;
  int case_no = 0;

  std::string citation() const { return "Theorem " + std::to_string(theorem) + "." + std::to_string(case_no); }
  std::string str() const { return class_name + " (" + citation() + ")"; }
};

template <class Fragment>
struct VerdictCase {
  int case_no;
  std::string_view class_name;
  std::function<bool(const Fragment&)> when;  // empty: the catch-all "other cases"
};

template <class Fragment>
struct CaseTable {
  int theorem = 0;
  std::vector<VerdictCase<Fragment>> cases;
};

namespace detail {

inline Clone C(CloneId id) { return Clone::fixed(id); }
inline bool above(const Clone& b, CloneId x) { return clone_leq(C(x), b); }
inline bool below(const Clone& b, CloneId y) { return clone_leq(b, C(y)); }
inline bool between(const Clone& b, CloneId x, CloneId y) { return above(b, x) && below(b, y); }
inline bool is_one_of(const Clone& b, std::initializer_list<CloneId> ids) {
  for (auto id : ids)
    if (b == C(id)) return true;
  return false;
}

using CC = VerdictCase<Clone>;
using RC = VerdictCase<SchaeferReport>;

inline bool s1_or_d(const Clone& b) { return above(b, CloneId::S1) || above(b, CloneId::D); }
inline bool s02_s12_d1(const Clone& b) {
  return above(b, CloneId::S02) || above(b, CloneId::S12) || above(b, CloneId::D1);
}
inline bool d2_s00_s10(const Clone& b) {
  return above(b, CloneId::D2) || above(b, CloneId::S00) || above(b, CloneId::S10);
}
inline bool affine_fragment(const Clone& b) {
  return is_one_of(b, {CloneId::N, CloneId::N2, CloneId::L, CloneId::L0, CloneId::L3});
}
inline bool s11_to_m(const Clone& b) { return between(b, CloneId::S11, CloneId::M); }

inline CaseTable<Clone> clone_table(ProblemId p) {
  const bool skeptical = p == ProblemId::DefaultSkeptical || p == ProblemId::AelSkeptical;
  switch (p) {
    case ProblemId::DefaultExtensionExistence:
      return {3,
              {CC{1, "Sigma2P-complete", s1_or_d}, CC{2, "Delta2P-complete", s11_to_m},
               CC{3, "NP-complete", affine_fragment},
               CC{4, "P-complete", [](const Clone& b) { return is_one_of(b, {CloneId::V, CloneId::V0, CloneId::E, CloneId::E0}); }},
               CC{5, "NL-complete", [](const Clone& b) { return is_one_of(b, {CloneId::I, CloneId::I0}); }},
               CC{6, "trivial", {}}}};
    case ProblemId::DefaultCredulous:
    case ProblemId::DefaultSkeptical:
      return {5,
              {CC{1, skeptical ? "Pi2P-complete" : "Sigma2P-complete", s1_or_d},
               CC{2, "Delta2P-complete", s11_to_m},
               CC{3, "coNP-complete",
                  [](const Clone& b) {
                    return below(b, CloneId::R1) &&
                           (above(b, CloneId::S00) || above(b, CloneId::S10) || above(b, CloneId::D2));
                  }},
               CC{4, skeptical ? "coNP-complete" : "NP-complete", affine_fragment},
               CC{5, "P-complete",
                  [](const Clone& b) {
                    return between(b, CloneId::V2, CloneId::V) || between(b, CloneId::E2, CloneId::E) ||
                           is_one_of(b, {CloneId::L1, CloneId::L2});
                  }},
               CC{6, "NL-complete", {}}}};
    case ProblemId::DefaultCount:
      return {8,
              {CC{1, "#coNP-complete", s1_or_d}, CC{2, "Delta2P-complete(counting)", s11_to_m},
               CC{3, "#P-complete", affine_fragment}, CC{4, "FP", {}}}};
    case ProblemId::AelExpansionExistence:
    case ProblemId::AelCredulous:
    case ProblemId::AelSkeptical:
      return {7,
              {CC{1, skeptical ? "Pi2P-complete" : "Sigma2P-complete", d2_s00_s10},
               CC{2, skeptical ? "coNP-complete" : "NP-complete",
                  [](const Clone& b) { return between(b, CloneId::V2, CloneId::V); }},
               CC{3, "ParityL-hard-in-P", [](const Clone& b) { return between(b, CloneId::L2, CloneId::L); }},
               CC{4, "L", {}}}};
    case ProblemId::AelCount:
      return {9,
              {CC{1, "#coNP-complete", d2_s00_s10},
               CC{2, "#P-complete", [](const Clone& b) { return between(b, CloneId::V2, CloneId::V); }},
               CC{3, "FP", {}}}};
    case ProblemId::CircModelCheck:
      return {11, {CC{1, "coNP-complete", s02_s12_d1}, CC{2, "in-P", {}}}};
    case ProblemId::CircInference:
      return {13,
              {CC{1, "Pi2P-complete", s02_s12_d1},
               CC{2, "coNP-complete",
                  [](const Clone& b) {
                    for (auto x : {CloneId::V2, CloneId::S10, CloneId::D2, CloneId::L2})
                      for (auto y : {CloneId::M, CloneId::L})
                        if (between(b, x, y)) return true;
                    return false;
                  }},
               CC{3, "in-P", {}}}};
    case ProblemId::CircCountMinimal:
      return {14,
              {CC{1, "#coNP-complete", s02_s12_d1},
               CC{2, "#P-complete",
                  [](const Clone& b) {
                    return between(b, CloneId::S00, CloneId::M) || between(b, CloneId::S10, CloneId::M) ||
                           between(b, CloneId::D2, CloneId::M);
                  }},
               CC{3, "#P-complete",
                  [](const Clone& b) { return between(b, CloneId::V2, CloneId::V) || between(b, CloneId::L2, CloneId::L); }},
               CC{4, "FP", {}}}};
    case ProblemId::AbductionExists:
      return {15,
              {CC{1, "Sigma2P-complete", s02_s12_d1},
               CC{2, "NP-complete",
                  [](const Clone& b) {
                    return between(b, CloneId::S00, CloneId::M) || between(b, CloneId::S10, CloneId::M) ||
                           between(b, CloneId::D2, CloneId::M);
                  }},
               CC{3, "in-P", {}}}};
    case ProblemId::AbductionCount:
    case ProblemId::AbductionCountPositive: {
      std::vector<CC> cases;
      if (p == ProblemId::AbductionCountPositive) {
        cases.push_back(CC{4, "FP", [](const Clone& b) { return between(b, CloneId::V2, CloneId::V); }});
        cases.push_back(CC{5, "open", [](const Clone& b) { return between(b, CloneId::L2, CloneId::L); }});
      }
      cases.push_back(CC{1, "#coNP-complete", s02_s12_d1});
      cases.push_back(CC{2, "#P-complete", [](const Clone& b) {
                           return between(b, CloneId::V2, CloneId::M) || between(b, CloneId::S10, CloneId::M) ||
                                  between(b, CloneId::D2, CloneId::M);
                         }});
      cases.push_back(CC{3, "FP", {}});
      return {17, std::move(cases)};
    }
    case ProblemId::AbductionCountMinimal:
      // Only the unrestricted language is classified.
      return {16, {CC{1, "#coNP-complete", [](const Clone& b) { return b == C(CloneId::BF); }}, CC{2, "open", {}}}};
  }
  throw InvalidInput("unknown problem id");
}

inline CaseTable<SchaeferReport> relation_table(ProblemId p) {
  using S = SchaeferReport;
  const bool skeptical = p == ProblemId::DefaultSkeptical;
  auto not_schaefer = [](const S& s) { return !s.schaefer; };
  auto schaefer = [](const S& s) { return s.schaefer; };
  switch (p) {
    case ProblemId::DefaultExtensionExistence:
      return {4,
              {RC{1, "Sigma2P-complete", not_schaefer},
               RC{2, "NP-complete", [](const S& s) { return s.schaefer && !s.valid0 && !s.valid1; }},
               RC{3, "in-P", {}}}};
    case ProblemId::DefaultCredulous:
    case ProblemId::DefaultSkeptical:
      // Case 1 excludes 0-/1-valid sets so that case 3 can apply.
      return {6,
              {RC{1, skeptical ? "Pi2P-complete" : "Sigma2P-complete",
                  [](const S& s) { return !s.schaefer && !s.valid0 && !s.valid1; }},
               RC{2, skeptical ? "coNP-complete" : "NP-complete",
                  [](const S& s) { return s.schaefer && !s.valid0 && !s.valid1; }},
               RC{3, "coNP-complete", [](const S& s) { return !s.schaefer && (s.valid0 || s.valid1); }},
               RC{4, "in-P", {}}}};
    case ProblemId::CircModelCheck:
      return {10, {RC{1, "coNP-complete", not_schaefer}, RC{2, "in-P", {}}}};
    case ProblemId::CircInference:
      return {12,
              {RC{1, "Pi2P-complete", not_schaefer},
               RC{2, "coNP-complete",
                  [](const S& s) {
                    return s.schaefer && !s.negative_horn && !(s.bijunctive && s.affine) && !(s.horn && s.dual_horn);
                  }},
               RC{3, "in-P", {}}}};
    case ProblemId::CircCountMinimal:
      return {14,
              {RC{5, "FP", [](const S& s) { return s.bijunctive && s.affine; }},
               RC{6, "#P-complete", schaefer}, RC{7, "#coNP-complete", {}}}};
    case ProblemId::AbductionExists:
      return {15,
              {RC{4, "Sigma2P-complete", not_schaefer},
               RC{5, "NP-complete",
                  [](const S& s) {
                    return (s.horn || s.dual_horn) && !s.bijunctive && !s.affine && !s.definite_horn && !s.ihsb_plus &&
                           !s.ihsb_minus;
                  }},
               RC{6, "in-P", {}}}};
    case ProblemId::AbductionCount:
      return {16,
              {RC{3, "FP", [](const S& s) { return s.affine; }},
               RC{4, "#P-complete", [](const S& s) { return s.horn || s.dual_horn || s.bijunctive; }},
               RC{5, "open", {}}}};
    case ProblemId::AbductionCountPositive:
      return {16,
              {RC{4, "#P-complete", [](const S& s) { return s.horn || s.dual_horn || s.bijunctive; }},
               RC{5, "open", {}}}};
    case ProblemId::AbductionCountMinimal:
      return {16, {RC{6, "#P-complete", schaefer}, RC{7, "open", {}}}};
    default:
      throw InvalidInput("no classification over relations for " + std::string(problem_name(p)));
  }
}

template <class Fragment>
ComplexityVerdict first_match(ProblemId p, const CaseTable<Fragment>& table, const Fragment& frag, std::string label) {
  for (const auto& c : table.cases)
    if (!c.when || c.when(frag))
      return {std::string(problem_name(p)), std::move(label), std::string(c.class_name), table.theorem, c.case_no};
  throw InvalidInput("no case matches");  // unreachable: every table ends in a catch-all
}

inline std::string report_label(const SchaeferReport& s) {
  std::string out;
  auto add = [&](bool f, const char* n) {
    if (!f) return;
    if (!out.empty()) out += ",";
    out += n;
  };
  add(s.horn, "horn");
  add(s.dual_horn, "dual-horn");
  add(s.bijunctive, "bijunctive");
  add(s.affine, "affine");
  add(s.valid0, "0-valid");
  add(s.valid1, "1-valid");
  add(s.definite_horn, "definite-horn");
  add(s.negative_horn, "negative-horn");
  add(s.ihsb_plus, "ihsb+");
  add(s.ihsb_minus, "ihsb-");
  return "relations{" + out + "}";
}

}  // namespace detail

inline ComplexityVerdict predict(ProblemId p, const Clone& b) {
  return detail::first_match(p, detail::clone_table(p), b, b.str());
}

inline ComplexityVerdict predict(ProblemId p, const SchaeferReport& s) {
  return detail::first_match(p, detail::relation_table(p), s, detail::report_label(s));
}

inline ComplexityVerdict predict_from_functions(ProblemId p, const std::vector<BooleanFunction>& fs,
                                                const Limits& lim = {}) {
  return predict(p, clone_of(fs, lim));
}

inline ComplexityVerdict predict_from_relations(ProblemId p, const std::vector<BooleanRelation>& rels,
                                                const Limits& lim = {}) {
  return predict(p, classify_set(rels, lim));
}

// Number of guarded (non catch-all) cases whose condition holds for b.
inline std::size_t explicit_matches(ProblemId p, const Clone& b) {
  std::size_t n = 0;
  for (const auto& c : detail::clone_table(p).cases)
    if (c.when && c.when(b)) ++n;
  return n;
}

}  // namespace nmr
