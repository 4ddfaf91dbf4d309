// galimage: JSON frontend over the library.  Exit codes: 0 success, 1 failed
// check, 2 parse or domain error, 3 computational cap.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "galimage/bounds.hpp"
#include "galimage/cohom.hpp"
#include "galimage/ellkummer.hpp"
#include "galimage/errors.hpp"
#include "galimage/matalg.hpp"
#include "galimage/matgrp.hpp"
#include "galimage/scalars.hpp"
#include "galimage/verification.hpp"

using namespace galimage;
using json = nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

json matrix_json(const Mat2& m) { return json::array({json::array({m.a(), m.b()}), json::array({m.c(), m.d()})}); }

json exponents_json(const PrimeExponents& f) {
  json out = json::object();
  for (auto [p, e] : f) {
    if (e != 0) out[std::to_string(p)] = e;
  }
  return out;
}

json poly_json(const poly::ZPoly& f) {
  json out = json::array();
  for (const auto& c : f) out.push_back(c.get_str());
  return out;
}

/// "gl2:N", "sl2:N", "borel:N" or "modulus=N; gens=a,b,c,d | ...".
FiniteMatrixGroup parse_group(const std::string& text, std::size_t cap) {
  const auto colon = text.find(':');
  if (colon != std::string::npos && text.find('=') == std::string::npos) {
    const std::string kind = text.substr(0, colon);
    std::uint32_t n = 0;
    try {
      n = static_cast<std::uint32_t>(std::stoul(text.substr(colon + 1)));
    } catch (const std::exception&) {
      throw DomainError("bad modulus in group name");
    }
    if (n < 2 || n >= (1u << 16)) throw DomainError("group modulus out of range");
    if (kind == "gl2") return gl2(n, cap);
    if (kind == "sl2") return sl2(n, cap);
    if (kind == "borel") return borel(n, cap);
    throw DomainError("unknown group name " + kind);
  }
  return group_from_text(text, cap);
}

json group_summary(const FiniteMatrixGroup& g) {
  return json{{"modulus", g.modulus()},
              {"order", g.order()},
              {"generators", g.to_text()},
              {"scalars", g.scalar_subgroup()},
              {"determinant_image", g.determinant_image()}};
}

json report_json(const CriterionReport& r) {
  return json{{"ell", r.ell},
              {"level", r.level},
              {"applicable", r.applicable},
              {"hypotheses", r.hypotheses},
              {"conclusions", r.conclusions},
              {"witnesses", r.witnesses},
              {"min_scalar_valuation", r.min_scalar_valuation},
              {"hypotheses_hold", r.hypotheses_hold()}};
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"galimage: Galois image computations at finite level"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = poly::kDefaultSeed;
  unsigned threads = 1;
  std::size_t cap = kDefaultClosureCap;
  app.add_option("--seed", seed, "Seed for randomized steps (default 0x5eed5eed for factoring)")->capture_default_str();
  app.add_option("--threads", threads, "Upper bound on worker threads")->check(CLI::Range(1u, 64u))->capture_default_str();
  app.add_option("--closure-cap", cap, "Largest group order built by closure")->capture_default_str();

  std::string group_text;
  auto add_group = [&](CLI::App* sub) {
    sub->add_option("--group", group_text, "modulus=N; gens=a,b,c,d | ...  or gl2:N, sl2:N, borel:N")->required();
  };

  auto* closure = app.add_subcommand("closure", "Close a generating set and summarize the group");
  add_group(closure);
  bool list_elements = false;
  closure->add_flag("--elements", list_elements, "Include every element");

  auto* scalars = app.add_subcommand("scalars", "Scalar-lifting criteria");
  add_group(scalars);
  std::string criterion = "lifting";
  scalars->add_option("--criterion", criterion, "lifting, cartan or surjective")
      ->check(CLI::IsMember({"lifting", "cartan", "surjective"}))
      ->capture_default_str();

  auto* classify = app.add_subcommand("classify", "Dickson type and irreducibility of a mod-p group");
  add_group(classify);

  auto* cartan_cmd = app.add_subcommand("cartan", "Cartan subgroup or normalizer models");
  CartanSpec spec;
  bool normalizer = false, cube = false;
  cartan_cmd->add_option("--ell", spec.ell, "Prime")->required();
  cartan_cmd->add_option("--delta", spec.delta, "Non-square for the nonsplit model, 1 for split")->capture_default_str();
  cartan_cmd->add_flag("--starred", spec.starred, "Conjugated model");
  cartan_cmd->add_flag("--normalizer", normalizer, "Return the normalizer");
  cartan_cmd->add_flag("--cube", cube, "Return the index-3 cube subgroup of the normalizer");

  auto* h1_cmd = app.add_subcommand("h1", "H^1(G, (Z/M)^2)");
  add_group(h1_cmd);
  std::uint32_t module_n = 0;
  std::size_t h1_cap = kDefaultH1Cap;
  h1_cmd->add_option("--module", module_n, "Module modulus M dividing the group modulus")->required();
  h1_cmd->add_option("--cap", h1_cap, "Largest group order")->capture_default_str();

  auto* algebra = app.add_subcommand("algebra", "Z/N-span of a group inside M2(Z/N)");
  add_group(algebra);
  bool preimage_gens = false;
  std::uint32_t working = 0;
  algebra->add_option("--preimage", working, "Work with the full preimage at this modulus");
  algebra->add_flag("--generators-only", preimage_gens, "Span the preimage generators without closing");

  auto* bounds = app.add_subcommand("bounds", "Named constants");
  std::string constant = "e";
  unsigned class_number = 0, disc = 0;
  std::uint32_t ell = 0, pgl_p = 0;
  bounds->add_option("--constant", constant, "e, a, B, profile, exp-pgl2 or e-cm")
      ->check(CLI::IsMember({"e", "a", "B", "profile", "exp-pgl2", "e-cm"}))
      ->capture_default_str();
  bounds->add_option("--p", pgl_p, "Prime for exp-pgl2");
  bounds->add_option("--class-number", class_number, "Class number for e-cm");
  bounds->add_option("--disc", disc, "|discriminant| for e-cm");
  bounds->add_option("--ell", ell, "Prime for e-cm");

  auto* kummer = app.add_subcommand("kummer", "Divisibility of P through phi_l - x(P) psi_l^2");
  std::string curve_text, point_text;
  std::uint32_t kummer_ell = 3;
  int degree_cap = poly::kDefaultDegreeCap;
  kummer->add_option("--curve", curve_text, "a1,a2,a3,a4,a6")->required();
  kummer->add_option("--point", point_text, "x,y")->required();
  kummer->add_option("--ell", kummer_ell, "Odd prime")->capture_default_str();
  kummer->add_option("--degree-cap", degree_cap, "Largest degree factored")->capture_default_str();

  auto* appendix = app.add_subcommand("appendix", "Pro-p scalar criterion, key-lemma iteration and slices");
  add_group(appendix);
  int appendix_k = 1;
  std::size_t trace_steps = 0;
  appendix->add_option("--k", appendix_k, "Level exponent k")->capture_default_str();
  appendix->add_option("--trace-steps", trace_steps, "Also trace the iteration for each generator");

  auto* verify = app.add_subcommand("verify-paper", "Run the reproducibility checks");
  int only = 0;
  std::string report_path = "galimage_report.md";
  verify->add_option("--only", only, "Single check id")->check(CLI::Range(1, kCheckCount));
  verify->add_option("--report", report_path, "Markdown report path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    json out;
    int code = 0;
    if (*closure) {
      auto g = parse_group(group_text, cap);
      out = group_summary(g);
      if (list_elements) {
        json el = json::array();
        for (const Mat2& m : g.elements()) el.push_back(matrix_json(m));
        out["elements"] = el;
      }
    } else if (*scalars) {
      auto g = parse_group(group_text, cap);
      if (criterion == "lifting") {
        out = report_json(check_scalar_lifting_criterion(g));
      } else if (criterion == "cartan") {
        out = report_json(check_cartan_scalar_criterion(g));
      } else {
        out = json{{"surjective", check_surjective_lift(g)}};
      }
    } else if (*classify) {
      auto g = parse_group(group_text, cap);
      auto v = dickson_classify(g);
      json lines = json::array();
      for (const auto& l : stable_lines(g)) lines.push_back(json::array({l[0], l[1]}));
      out = json{{"type", to_string(v.tag)},
                 {"projective_order", v.projective_order},
                 {"witness", v.witness_text},
                 {"irreducibility", to_string(irreducibility_report(g))},
                 {"stable_lines", lines}};
    } else if (*cartan_cmd) {
      FiniteMatrixGroup g = cube ? cartan_cube_subgroup(spec) : normalizer ? cartan_normalizer(spec) : cartan(spec);
      out = group_summary(g);
    } else if (*h1_cmd) {
      auto g = parse_group(group_text, cap);
      auto r = h1(g, GModule::natural(module_n), h1_cap);
      out = json{{"invariant_factors", r.invariant_factors}, {"exponent", r.exponent}};
    } else if (*algebra) {
      AlgebraSpan a;
      if (working != 0) {
        auto g = parse_group(group_text, cap);
        auto gens = full_preimage_generators(g, working);
        a = preimage_gens ? algebra_span(working, gens) : algebra_span(full_preimage(g, working, cap));
      } else {
        auto g = parse_group(group_text, cap);
        a = algebra_span(g);
      }
      out = json{{"ell", a.ell},
                 {"level", a.level},
                 {"log_size", a.log_size},
                 {"min_m", a.min_m},
                 {"nontrivial_containment", a.nontrivial_containment}};
    } else if (*bounds) {
      if (constant == "e") {
        auto e = exponent_constant_e(threads);
        out = json{{"e", exponents_json(e.factorization)},
                   {"e_value", e.value.get_str()},
                   {"e_quoted", exponents_json(e.quoted)},
                   {"e_matches_quoted", e.matches_quoted},
                   {"n", exponents_json(e.n)},
                   {"m", exponents_json(e.m)},
                   {"a", exponents_json(e.a)}};
      } else if (constant == "a") {
        out = json{{"a", exponents_json(a_valuations(threads))}};
      } else if (constant == "B") {
        auto non_cm = kummer_bound_factorization(quoted_exponent_e(), algebra_exponent_table_non_cm());
        auto cm = kummer_bound_factorization(cm_exponent_e(), algebra_exponent_table_cm());
        out = json{{"B_nonCM", exponents_json(non_cm)},
                   {"B_nonCM_value", expand(non_cm).get_str()},
                   {"B_CM", exponents_json(cm)},
                   {"B_CM_value", expand(cm).get_str()}};
      } else if (constant == "exp-pgl2") {
        if (pgl_p == 0) throw DomainError("exp-pgl2 needs --p");
        out = json{{"p", pgl_p}, {"exponent", exp_pgl2(pgl_p, threads)}};
      } else if (constant == "e-cm") {
        if (ell == 0 || class_number == 0 || disc == 0) throw DomainError("e-cm needs --class-number, --disc and --ell");
        out = json{{"e_ell", cm_e_ell(class_number, disc, ell)}};
      } else {
        auto b = bound_profile(threads);
        out = json{{"T0", b.t0},
                   {"s", exponents_json(b.s)},
                   {"n", exponents_json(b.n)},
                   {"n_cm", exponents_json(b.n_cm)},
                   {"m_non_cm", exponents_json(b.m_non_cm)},
                   {"m_cm", exponents_json(b.m_cm)},
                   {"a", exponents_json(b.a)},
                   {"e", exponents_json(b.e.factorization)},
                   {"e_matches_quoted", b.e.matches_quoted},
                   {"B_nonCM", exponents_json(b.b_non_cm)},
                   {"B_CM", exponents_json(b.b_cm)}};
      }
    } else if (*kummer) {
      auto e = parse_curve(curve_text);
      auto p = parse_point(point_text);
      auto r = kummer_divisibility(e, p, kummer_ell, degree_cap, seed);
      json factors = json::array();
      for (const auto& f : r.factorization.factors) {
        factors.push_back(json{{"coefficients", poly_json(f.poly)},
                               {"multiplicity", f.multiplicity},
                               {"certificate", f.certificate}});
      }
      out = json{{"verdict", r.verdict},
                 {"ell", r.ell},
                 {"g", poly_json(r.g)},
                 {"factor_degrees", r.factor_degrees},
                 {"factors", factors},
                 {"witness", poly_json(r.witness)}};
    } else if (*appendix) {
      auto g = parse_group(group_text, cap);
      out = report_json(check_pro_p_scalar_criterion(g, appendix_k));
      json slices = json::array();
      for (const auto& s : lie_slices(g)) {
        slices.push_back(json{{"level", s.level},
                              {"size", s.elements.size()},
                              {"dimension", s.dimension},
                              {"diagonal_dimension", s.diagonal_dimension},
                              {"antidiagonal_dimension", s.antidiagonal_dimension}});
      }
      out["slices"] = slices;
      if (trace_steps > 0) {
        json traces = json::array();
        for (const Mat2& m : g.generators()) {
          auto tr = key_lemma_trace(m, trace_steps);
          json steps = json::array();
          for (const auto& s : tr.steps) steps.push_back(matrix_json(s.m));
          traces.push_back(json{{"start", matrix_json(m)},
                                {"steps", steps},
                                {"diagonal_from_n", tr.diagonal_from_n},
                                {"det_subgroup_invariant", tr.det_subgroup_invariant},
                                {"recurrences_hold", tr.recurrences_hold}});
        }
        out["traces"] = traces;
      }
    } else if (*verify) {
      CheckOptions opts;
      opts.threads = threads;
      if (app.get_option("--seed")->count() > 0) opts.seed = seed;
      std::vector<CheckResult> results;
      if (only != 0) {
        results.push_back(run_check(only, opts));
      } else {
        results = run_all_checks(opts);
      }
      std::ofstream report(report_path);
      if (!report) throw DomainError("cannot write report to " + report_path);
      report << checks_markdown(results);
      json checks = json::array();
      bool all = true;
      for (const auto& r : results) {
        all = all && r.pass;
        checks.push_back(json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
      }
      out = json{{"checks", checks}, {"all_pass", all}, {"report", report_path}};
      code = all ? 0 : 1;
    }
    out["schema_version"] = kSchemaVersion;
    emit(out);
    return code;
  } catch (const CapExceeded& e) {
    std::cerr << json{{"error", "cap_exceeded"}, {"message", e.what()}}.dump() << "\n";
    return 3;
  } catch (const HypothesisError& e) {
    std::cerr << json{{"error", "hypothesis"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << json{{"error", "domain"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
}
