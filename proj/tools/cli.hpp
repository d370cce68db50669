#pragma once

// Command-line front end. run_cli() takes the arguments after the program
// name and writes to the given streams, so tests can drive it in-process.
//
// Exit codes: 0 success, 1 negative decision answer, 2 usage/parse/input
// error, 3 enumeration cap exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nmr/nmr.hpp"

namespace nmr::cli {

enum ExitCode : int { kOk = 0, kNo = 1, kUsage = 2, kCap = 3 };

namespace detail {

using nlohmann::ordered_json;

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline BooleanFunction function_arg(const std::string& s) {
  if (auto f = parse_inline_function(s)) return *f;
  return builtin::make(s);
}

inline std::vector<BooleanFunction> function_list(const std::string& csv) {
  std::vector<BooleanFunction> out;
  std::stringstream ss(csv);
  for (std::string item; std::getline(ss, item, ',');) {
    item = nmr::detail::trim(item);
    if (!item.empty()) out.push_back(function_arg(item));
  }
  if (out.empty()) throw InvalidInput("empty function list");
  return out;
}

inline std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

inline std::vector<std::string> formula_strings(const Theory& t) {
  std::vector<std::string> out;
  for (const auto& f : t.formulas()) out.push_back(to_string(f));
  return out;
}

inline ordered_json profile_json(const BooleanFunction& f, const PropertyProfile& p) {
  return {{"name", f.name()},           {"arity", f.arity()},
          {"bits", f.bits()},           {"r0", p.reproducing0},
          {"r1", p.reproducing1},       {"monotone", p.monotone},
          {"self_dual", p.self_dual},   {"affine", p.affine},
          {"unary", p.essentially_unary}, {"conj", p.conjunction_or_constant},
          {"disj", p.disjunction_or_constant}, {"proj", p.constant_or_projection},
          {"sep0", p.sep0_degree.str()}, {"sep1", p.sep1_degree.str()}};
}

inline ordered_json flags_json(const RelationFlags& r) {
  return {{"horn", r.horn},
          {"dual_horn", r.dual_horn},
          {"bijunctive", r.bijunctive},
          {"affine", r.affine},
          {"schaefer", r.schaefer()},
          {"valid0", r.valid0},
          {"valid1", r.valid1},
          {"definite_horn", r.definite_horn},
          {"negative_horn", r.negative_horn},
          {"ihsb_plus", r.ihsb_plus},
          {"ihsb_minus", r.ihsb_minus}};
}

// "key=value" pairs for the text rendering of a flat JSON object, skipping `skip` leading keys.
inline std::string kv_line(const ordered_json& j, std::size_t skip) {
  std::string s;
  std::size_t i = 0;
  for (const auto& [k, v] : j.items()) {
    if (i++ < skip) continue;
    if (!s.empty()) s += ' ';
    s += k + "=" + (v.is_boolean() ? std::string(v.get<bool>() ? "1" : "0") : v.get<std::string>());
  }
  return s;
}

struct Options {
  bool json = false;
  unsigned threads = 1;
  std::string action;
  std::string file;
  std::string query;
  std::string assign;
  bool monotone = false;
  bool minimal = false;
  std::vector<std::string> functions;
  std::string problem;
  std::string clone_tag;
  std::string funcs;
  std::string relations;
};

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) { lim_.threads = o.threads; }

  int clone() {
    std::vector<BooleanFunction> fs;
    for (const auto& a : o_.functions) fs.push_back(function_arg(a));
    const Clone c = clone_of(fs, lim_);
    ordered_json j{{"clone", c.str()}, {"functions", ordered_json::array()}};
    for (const auto& f : fs) j["functions"].push_back(profile_json(f, property_profile(f, lim_)));
    if (o_.json) return emit(j);
    out_ << c.str() << '\n';
    for (const auto& f : j["functions"])
      out_ << f["name"].get<std::string>() << '/' << f["arity"].get<std::size_t>() << '=' << f["bits"].get<std::string>()
           << ' ' << kv_line(f, 3) << '\n';
    return kOk;
  }

  int classify_relations() {
    const auto rf = read_relations(slurp(o_.file));
    if (rf.relations.empty()) throw InvalidInput("no relations declared");
    ordered_json j{{"relations", ordered_json::array()}};
    for (const auto& r : rf.relations) {
      ordered_json e{{"name", r.name()}};
      e.update(flags_json(classify_relation(r, lim_)));
      j["relations"].push_back(e);
    }
    const auto set = classify_set(rf.relations, lim_);
    j["set"] = flags_json(set);
    if (o_.json) return emit(j);
    for (const auto& r : j["relations"]) out_ << r["name"].get<std::string>() << ' ' << kv_line(r, 1) << '\n';
    out_ << "set " << kv_line(j["set"], 0) << '\n';
    return kOk;
  }

  int default_logic() {
    const auto t = read_default_theory(slurp(o_.file));
    if (o_.action == "extensions") {
      ordered_json list = ordered_json::array();
      for (const auto& w : stable_extensions(t, lim_)) {
        std::vector<std::string> rules;
        for (auto i : w.generating) rules.push_back("d" + std::to_string(i));
        list.push_back({{"rules", rules}, {"inconsistent", w.inconsistent}, {"base", formula_strings(w.closure_base)}});
      }
      if (o_.json) return emit({{"extensions", list}});
      for (const auto& e : list) {
        out_ << '[' << join(e["rules"].get<std::vector<std::string>>(), " ") << "] ";
        out_ << (e["inconsistent"].get<bool>() ? std::string("inconsistent")
                                               : join(e["base"].get<std::vector<std::string>>(), "; "))
             << '\n';
      }
      return kOk;
    }
    if (o_.action == "count") return count(count_stable_extensions(t, lim_));
    const Formula q = parse_formula(required_query());
    return decide(o_.action == "credulous" ? credulous(t, q, lim_) : skeptical(t, q, lim_));
  }

  int ael() {
    const auto s = read_ae_theory(slurp(o_.file));
    if (o_.action == "expansions") {
      ordered_json list = ordered_json::array();
      for (const auto& e : stable_expansions(s, lim_)) list.push_back(e.str());
      if (o_.json) return emit({{"expansions", list}});
      for (const auto& e : list) out_ << '{' << e.get<std::string>() << "}\n";
      return kOk;
    }
    if (o_.action == "count") return count(count_expansions(s, lim_));
    const Formula q = parse_ae_formula(required_query());
    return decide(o_.action == "credulous" ? credulous(s, q, lim_) : skeptical(s, q, lim_));
  }

  int circ() {
    const auto prob = read_circ(slurp(o_.file));
    const Universe u = prob.universe();
    if (o_.action == "check") {
      if (o_.assign.empty()) throw InvalidInput("circ check needs --assign BITS over " + join(u.names(), " "));
      return decide(is_circ_model(prob, u.decode(u.parse_bits(o_.assign)), lim_));
    }
    if (o_.action == "infer") return decide(circ_entails(prob, parse_formula(required_query()), lim_));
    if (o_.action == "count") return count(count_minimal_models(prob, lim_));
    std::vector<std::string> models;
    for (auto c : minimal_models(prob, lim_)) models.push_back(u.bits(c));
    if (o_.json) return emit({{"vars", u.names()}, {"models", models}});
    out_ << join(u.names(), " ") << '\n';
    for (const auto& m : models) out_ << m << '\n';
    return kOk;
  }

  int abduce() {
    const auto inst = read_abduction(slurp(o_.file));
    if (o_.action == "exists") return decide(explanation_exists(inst, lim_));
    if (o_.action == "count")
      return count(o_.minimal ? count_subset_minimal(inst, lim_) : count_explanations(inst, lim_));
    const auto es = o_.action == "minimal" ? subset_minimal_explanations(inst, lim_) : explanations(inst, lim_);
    ordered_json list = ordered_json::array();
    for (const auto& e : es) list.push_back(e.str());
    if (o_.json) return emit({{"explanations", list}});
    for (const auto& e : list) out_ << e.get<std::string>() << '\n';
    return kOk;
  }

  int reduce() {
    const std::string text = slurp(o_.file);
    std::string result;
    if (o_.action == "sat2default") {
      result = write_default_theory(sat_to_default(read_cnf(text)));
    } else if (o_.action == "qbf2ael") {
      const auto q = read_qbf(text);
      result = write_theory(o_.monotone ? qbf_to_monotone_ael(q) : qbf_to_ael(q));
    } else {
      const auto t = read_theory(text);
      if (t.empty()) throw InvalidInput("formula file is empty");
      result = write_circ(sat_to_minmodels(make::conj_all(t.formulas(), make::constant(true))));
    }
    if (o_.json) return emit({{"output", result}});
    out_ << result;
    return kOk;
  }

  int predict_cmd() {
    const ProblemId p = parse_problem(o_.problem);
    const int given = !o_.clone_tag.empty() + !o_.funcs.empty() + !o_.relations.empty();
    if (given != 1) throw InvalidInput("predict needs exactly one of --clone, --funcs, --relations");
    ComplexityVerdict v;
    if (!o_.clone_tag.empty())
      v = predict(p, parse_clone(o_.clone_tag));
    else if (!o_.funcs.empty())
      v = predict_from_functions(p, function_list(o_.funcs), lim_);
    else
      v = predict_from_relations(p, read_relations(slurp(o_.relations)).relations, lim_);
    if (o_.json)
      return emit({{"verdict", v.class_name}, {"citation", v.citation()}, {"fragment", v.fragment}, {"problem", v.problem}});
    out_ << v.str() << '\n';
    return kOk;
  }

 private:
  const std::string& required_query() const {
    if (o_.query.empty()) throw InvalidInput(o_.action + " needs --query FORMULA");
    return o_.query;
  }

  int emit(const ordered_json& j) {
    out_ << j.dump(2) << '\n';
    return kOk;
  }

  int count(std::size_t n) {
    if (o_.json) return emit({{"count", n}});
    out_ << n << '\n';
    return kOk;
  }

  int decide(bool yes) {
    if (o_.json)
      emit({{"answer", yes}});
    else
      out_ << (yes ? "yes" : "no") << '\n';
    return yes ? kOk : kNo;
  }

  const Options& o_;
  std::ostream& out_;
  Limits lim_;
};

inline void add_file_command(CLI::App* sub, Options& o, std::vector<std::string> actions, const char* file_desc) {
  sub->add_option("action", o.action, "Operation")->required()->check(CLI::IsMember(std::move(actions)));
  sub->add_option("file", o.file, file_desc)->required();
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  detail::Options o;
  CLI::App app{"Nonmonotonic reasoning toolkit: solvers and complexity prediction for Boolean fragments", "nmr"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_flag("--json", o.json, "Structured output");
  app.add_option("--threads", o.threads, "Worker threads for enumeration")->check(CLI::Range(1u, 256u));

  auto* clone = app.add_subcommand("clone", "Clone generated by functions (names or NAME/ARITY=BITS)");
  clone->add_option("functions", o.functions, "Functions")->required();

  auto* rels = app.add_subcommand("classify-relations", "Schaefer flags of a relation file");
  rels->add_option("file", o.file, "Relation file")->required();

  auto* dl = app.add_subcommand("default", "Default logic");
  detail::add_file_command(dl, o, {"extensions", "count", "credulous", "skeptical"}, "Default theory file");
  dl->add_option("--query", o.query, "Query formula");

  auto* ael = app.add_subcommand("ael", "Autoepistemic logic");
  detail::add_file_command(ael, o, {"expansions", "count", "credulous", "skeptical"}, "AE theory file");
  ael->add_option("--query", o.query, "Query formula");

  auto* circ = app.add_subcommand("circ", "Circumscription");
  detail::add_file_command(circ, o, {"check", "infer", "minmodels", "count"}, "Circumscription problem file");
  circ->add_option("--assign", o.assign, "Assignment bits in sorted variable order");
  circ->add_option("--query", o.query, "Query formula");

  auto* abd = app.add_subcommand("abduce", "Propositional abduction");
  detail::add_file_command(abd, o, {"exists", "list", "minimal", "count"}, "Abduction instance file");
  abd->add_flag("--minimal", o.minimal, "Count subset-minimal explanations only");

  auto* red = app.add_subcommand("reduce", "Hardness reductions");
  detail::add_file_command(red, o, {"sat2default", "qbf2ael", "sat2minmodels"}, "Input file");
  red->add_flag("--monotone", o.monotone, "Use the monotone QBF encoding");

  auto* pred = app.add_subcommand("predict", "Complexity verdict for a problem and fragment");
  pred->add_option("problem", o.problem, "Problem id")->required();
  pred->add_option("--clone", o.clone_tag, "Clone tag");
  pred->add_option("--funcs", o.funcs, "Comma-separated functions");
  pred->add_option("--relations", o.relations, "Relation file");

  std::vector<const char*> argv{"nmr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  detail::Runner run(o, out);
  try {
    if (clone->parsed()) return run.clone();
    if (rels->parsed()) return run.classify_relations();
    if (dl->parsed()) return run.default_logic();
    if (ael->parsed()) return run.ael();
    if (circ->parsed()) return run.circ();
    if (abd->parsed()) return run.abduce();
    if (red->parsed()) return run.reduce();
    return run.predict_cmd();
  } catch (const CapExceeded& e) {
    err << "nmr: " << e.what() << '\n';
    return kCap;
  } catch (const Error& e) {
    err << "nmr: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace nmr::cli
