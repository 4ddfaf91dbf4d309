#include "galimage/verification.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "galimage/bounds.hpp"
#include "galimage/cohom.hpp"
#include "galimage/ellkummer.hpp"
#include "galimage/errors.hpp"
#include "galimage/matalg.hpp"
#include "galimage/matgrp.hpp"
#include "galimage/residue.hpp"
#include "galimage/scalars.hpp"

namespace galimage {
namespace {

std::string factorization_text(const PrimeExponents& f) {
  if (f.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (auto [p, e] : f) {
    if (e == 0) continue;
    if (!first) os << "*";
    os << p << "^" << e;
    first = false;
  }
  return first ? "1" : os.str();
}

PrimeExponents nonzero(PrimeExponents f) {
  for (auto it = f.begin(); it != f.end();) it = it->second == 0 ? f.erase(it) : std::next(it);
  return f;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// 1. Exponent e rebuilt from n, m = n + v(4) and recomputed v(a).
Outcome exponent_e(const CheckOptions& opts) {
  const ExponentConstant ec = exponent_constant_e(opts.threads);
  const PrimeExponents expected_a{{2, 4}, {3, 2}, {5, 1}, {7, 1}};
  std::ostringstream os;
  bool table_ok = true;
  std::set<std::uint32_t> primes{2, 3, 5, 7, 11};
  for (auto [p, v] : ec.a) primes.insert(p);
  for (std::uint32_t p : primes) {
    const int want = expected_a.count(p) ? expected_a.at(p) : 0;
    const int got = ec.a.count(p) ? ec.a.at(p) : 0;
    if (want != got) {
      table_ok = false;
      os << "v_" << p << "(a_" << p << ") = " << got << " (expected " << want << "); ";
    }
  }
  const PrimeExponents expected_e{{2, 12}, {3, 8}, {5, 3}, {7, 3}, {11, 2}};
  const bool e_ok = nonzero(ec.factorization) == expected_e && ec.value == expand(expected_e);
  os << "e = " << factorization_text(ec.factorization) << ", expected " << factorization_text(expected_e);
  return {table_ok && e_ok && ec.matches_quoted, os.str()};
}

// 2. Kummer bounds for the non-CM and CM cases.
Outcome kummer_bounds(const CheckOptions&) {
  const PrimeExponents non_cm = kummer_bound_factorization(quoted_exponent_e(), algebra_exponent_table_non_cm());
  const PrimeExponents cm = kummer_bound_factorization(cm_exponent_e(), algebra_exponent_table_cm());
  mpz_class want_non_cm = expand({{2, 24}, {3, 16}, {5, 6}, {7, 6}, {11, 4}}) *
                          expand({{2, 4}, {3, 2}, {5, 2}, {7, 1}, {11, 1}, {13, 1}, {17, 1}, {37, 1}});
  mpz_class want_cm = expand({{2, 4}, {3, 2}}) *
                      expand({{2, 3}, {3, 3}, {7, 1}, {11, 1}, {19, 1}, {43, 1}, {67, 1}, {163, 1}});
  const bool ok = expand(non_cm) == want_non_cm && expand(cm) == want_cm &&
                  kummer_bound(quoted_exponent_e(), algebra_exponent_table_non_cm()) == want_non_cm &&
                  kummer_bound(cm_exponent_e(), algebra_exponent_table_cm()) == want_cm;
  return {ok, "B_nonCM = " + factorization_text(non_cm) + ", B_CM = " + factorization_text(cm)};
}

// 3. H^1(GL2(Z/8), (Z/2)^2).
Outcome h1_gl2_mod8(const CheckOptions&) {
  const FiniteMatrixGroup g = gl2(8);
  const CohomologyResult r = h1(g, GModule::natural(2));
  std::ostringstream os;
  os << "|G| = " << g.order() << ", invariant factors [";
  for (std::size_t i = 0; i < r.invariant_factors.size(); ++i) os << (i ? "," : "") << r.invariant_factors[i];
  os << "]";
  return {r.invariant_factors == std::vector<std::uint64_t>{2} && r.exponent == 2, os.str()};
}

// 4. Sah bound on every subgroup of GL2(F_3) and GL2(F_5).
Outcome sah_suite(const CheckOptions&) {
  std::size_t total = 0, bad = 0;
  for (std::uint32_t p : {3u, 5u}) {
    for (const auto& h : enumerate_subgroups(gl2(p))) {
      ++total;
      const CohomologyResult r = h1(h, GModule::natural(p));
      std::uint64_t ell_part = 1;
      for (std::uint64_t e = r.exponent; e % p == 0; e /= p) ell_part *= p;
      const int bound = sah_multiplier(h, GModule::natural(p)).at(p);
      if (ipow(p, static_cast<unsigned>(bound)) % ell_part != 0) ++bad;
    }
  }
  std::ostringstream os;
  os << total << " subgroups, " << bad << " violations";
  return {total > 0 && bad == 0, os.str()};
}

// 5. The mod-27 group meeting all four pro-p hypotheses with trivial scalars.
Outcome pro_p_counterexample(const CheckOptions&) {
  const FiniteMatrixGroup h = FiniteMatrixGroup::closure(27, {Mat2(27, 10, 0, 0, 16), Mat2(27, 10, 9, 23, 10)});
  const CriterionReport rep = check_pro_p_scalar_criterion(h, 3);
  std::ostringstream os;
  bool hyp = true;
  for (const char* key : {"p_group", "order_mod_p_is_p", "not_triangular_at_level_k", "det_is_one_mod_p",
                          "normalized_by_c"}) {
    const bool v = rep.hypotheses.at(key);
    hyp = hyp && v;
    if (!v) os << key << " fails; ";
  }
  const bool trivial = h.scalar_subgroup() == std::vector<std::uint32_t>{1};
  os << "|H| = " << h.order() << ", scalars " << (trivial ? "{1}" : "nontrivial");
  return {hyp && trivial, os.str()};
}

Mat2 conjugate_by_c(const Mat2& m) {
  const std::uint32_t n = m.modulus();
  return Mat2(n, m.a(), (n - m.b()) % n, (n - m.c()) % n, m.d());
}

/// Random C-stable 3-subgroup of the Sylow preimage of the upper or lower
/// unitriangular group mod 3.
FiniteMatrixGroup random_c_stable_3group(std::uint32_t n, std::mt19937_64& rng) {
  const bool lower = rng() % 2 == 1;
  std::vector<Mat2> gens;
  const int count = 1 + static_cast<int>(rng() % 2);
  for (int i = 0; i < count; ++i) {
    auto r = [&] { return static_cast<std::int64_t>(rng() % (n / 3)) * 3; };
    const auto off = static_cast<std::int64_t>(rng() % n);
    Mat2 x = lower ? Mat2(n, 1 + r(), r(), off, 1 + r()) : Mat2(n, 1 + r(), off, r(), 1 + r());
    gens.push_back(x);
    gens.push_back(conjugate_by_c(x));
  }
  return FiniteMatrixGroup::closure(n, gens);
}

// 6. Key-lemma iteration on random elements of C-normalized 3-subgroups.
Outcome key_lemma_suite(const CheckOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::size_t samples = 0, groups = 0, bad = 0;
  for (std::uint32_t n : {9u, 27u}) {
    const int level = n == 9 ? 2 : 3;
    const Mat2 c = Mat2::diag(n, 1, -1);
    std::size_t here = 0;
    while (here < 500) {
      const FiniteMatrixGroup g = random_c_stable_3group(n, rng);
      ++groups;
      if (!normalized_by_c(g)) ++bad;
      for (int j = 0; j < 10 && here < 500; ++j, ++here, ++samples) {
        const Mat2& m = g.elements()[rng() % g.order()];
        const KeyLemmaTrace tr = key_lemma_trace(m, static_cast<std::size_t>(level) + 3);
        bool ok = tr.diagonal_from_n && tr.det_subgroup_invariant && tr.recurrences_hold;
        Mat2 x = m;
        for (int i = 0; i < level + 3; ++i) {
          if (i >= level && !x.is_diagonal()) ok = false;
          x = x * c * x * c;
        }
        if (!ok) ++bad;
      }
    }
  }
  std::ostringstream os;
  os << samples << " elements from " << groups << " groups, " << bad << " failures";
  return {samples == 1000 && bad == 0, os.str()};
}

// 7. Subgroups of GL2(F_3) with diag(1,-1), full determinant and irreducible action.
Outcome three_adic_classes(const CheckOptions&) {
  SubgroupEnumerationOptions o;
  o.up_to_conjugacy = true;
  const Mat2 c = Mat2::diag(3, 1, -1);
  o.filter = [&](const FiniteMatrixGroup& h) {
    return h.contains(c) && h.determinant_image().size() == 2 &&
           irreducibility_report(h) != Irreducibility::kReducible;
  };
  const auto classes = enumerate_subgroups(gl2(3), o);
  std::ostringstream os;
  os << classes.size() << " classes, orders";
  for (const auto& h : classes) os << " " << h.order();
  return {classes.size() == 3, os.str()};
}

// 8. Subgroups of the order-288 group mod 13 in the class under study.
Outcome mod13_class(const CheckOptions&) {
  const FiniteMatrixGroup g = s4_type_group_mod13();
  SubgroupEnumerationOptions o;
  o.filter = s4_class_filter;
  const Mat2 s(13, 0, 1, 1, 0), t(13, 0, 1, -1, 0);
  std::size_t count = 0, bad = 0;
  for (const auto& h : enumerate_subgroups(g, o)) {
    ++count;
    if (!h.contains(s) || !h.contains(t)) ++bad;
  }
  std::ostringstream os;
  os << "|G| = " << g.order() << ", " << count << " subgroups in the class, " << bad << " missing an element";
  return {g.order() == 288 && count > 0 && bad == 0, os.str()};
}

// 9. Kummer divisibility on the bundled curves.
Outcome kummer_rows(const CheckOptions& opts) {
  std::ostringstream os;
  bool ok = true;
  for (const auto& fx : default_kummer_fixtures()) {
    const KummerReport r = kummer_divisibility(fx.curve, fx.point, fx.ell, poly::kDefaultDegreeCap, opts.seed);
    const int l2 = static_cast<int>(fx.ell * fx.ell);
    const bool row = r.verdict && poly::degree(r.g) == l2 && 2 * poly::degree(r.witness) < l2;
    ok = ok && row;
    os << fx.label << " l=" << fx.ell << " degrees [";
    for (std::size_t i = 0; i < r.factor_degrees.size(); ++i) os << (i ? "," : "") << r.factor_degrees[i];
    os << "] " << (row ? "ok" : "bad") << "; ";
  }
  return {ok, os.str()};
}

std::vector<std::uint64_t> random_good_primes(const EllipticCurve& e, std::size_t count, std::mt19937_64& rng) {
  std::set<std::uint64_t> chosen;
  while (chosen.size() < count) {
    const std::uint64_t p = 5 + rng() % 995;
    if (is_prime(p) && has_good_reduction(e, p)) chosen.insert(p);
  }
  return {chosen.begin(), chosen.end()};
}

// 10. phi_l / psi_l^2 against the [l]-map on F_p points.
Outcome division_oracle(const CheckOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::size_t points = 0, bad = 0, primes = 0;
  for (const auto& fx : default_kummer_fixtures()) {
    const auto ell = static_cast<int>(fx.ell);
    const DivisionPolynomialSet s = division_polynomials(fx.curve, ell);
    const auto i = static_cast<std::size_t>(ell);
    for (std::uint64_t p : random_good_primes(fx.curve, 20, rng)) {
      ++primes;
      const ReducedCurve rc(fx.curve, p);
      for (const FpPoint& q : rc.points()) {
        if (q.inf) continue;
        ++points;
        const FpPoint lq = rc.multiply(q, fx.ell);
        const std::uint64_t psq = eval_mod_p(s.psi_sq[i], q.x, p);
        if (lq.inf != (psq == 0)) {
          ++bad;
        } else if (!lq.inf && lq.x * psq % p != eval_mod_p(s.phi[i], q.x, p)) {
          ++bad;
        }
      }
    }
  }
  std::ostringstream os;
  os << primes << " primes, " << points << " points, " << bad << " mismatches";
  return {bad == 0 && points > 0, os.str()};
}

Mat2 random_invertible(std::uint32_t n, std::mt19937_64& rng) {
  for (;;) {
    Mat2 m(n, static_cast<std::int64_t>(rng() % n), static_cast<std::int64_t>(rng() % n),
           static_cast<std::int64_t>(rng() % n), static_cast<std::int64_t>(rng() % n));
    if (m.is_invertible()) return m;
  }
}

// 11. Index of the submodule generated by v divides l^(m + 2d).
Outcome submodule_suite(const CheckOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::size_t pairs = 0, bad = 0, skipped = 0;
  while (pairs < 200) {
    const std::uint32_t ell = rng() % 2 == 0 ? 3 : 5;
    const int k = 1 + static_cast<int>(rng() % 3);
    const auto n = static_cast<std::uint32_t>(ipow(ell, static_cast<unsigned>(k)));
    std::vector<Mat2> gens;
    const int count = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < count; ++i) gens.push_back(random_invertible(n, rng));
    std::optional<FiniteMatrixGroup> g;
    try {
      g = FiniteMatrixGroup::closure(n, gens, 100000);
    } catch (const CapExceeded&) {
      ++skipped;
      continue;
    }
    const std::array<std::uint32_t, 2> v{static_cast<std::uint32_t>(rng() % n), static_cast<std::uint32_t>(rng() % n)};
    if (v[0] == 0 && v[1] == 0) continue;
    int d = k;
    for (std::uint32_t x : v) {
      if (x != 0) d = std::min(d, valuation_of(x, ell));
    }
    const int m = algebra_span(*g).min_m;
    const mpz_class index = generated_submodule_index(*g, v);
    if (!mpz_divisible_p(submodule_index_bound(d, m, ell).get_mpz_t(), index.get_mpz_t())) ++bad;
    ++pairs;
  }
  std::ostringstream os;
  os << pairs << " pairs (" << skipped << " groups over the closure cap redrawn), " << bad << " violations";
  return {bad == 0, os.str()};
}

// 12. Minimal exponent of algebra spans of full preimages.
Outcome algebra_optimality(const CheckOptions&) {
  std::ostringstream os;
  bool ok = true;
  for (std::uint32_t ell : {3u, 5u}) {
    for (int k : {1, 2}) {
      const auto q = static_cast<std::uint32_t>(ipow(ell, static_cast<unsigned>(k)));
      const std::uint32_t work = q * ell;
      const int b = algebra_span(work, full_preimage_generators(borel(q), work)).min_m;
      const int g = algebra_span(work, full_preimage_generators(gl2(ell), work)).min_m;
      // 2 is a non-square mod 3 and mod 5.
      const int n = algebra_span(work, full_preimage_generators(cartan_normalizer({ell, 2, false}), work)).min_m;
      ok = ok && b == k && g == 0 && n == 0;
      os << "l=" << ell << " k=" << k << ": Borel " << b << ", GL2 " << g << ", normalizer " << n << "; ";
    }
  }
  return {ok, os.str()};
}

struct CheckEntry {
  const char* name;
  const char* operation;
  Outcome (*fn)(const CheckOptions&);
};

const CheckEntry kChecks[kCheckCount] = {
    {"exponent constant e", "exponent_constant_e, a_valuations", exponent_e},
    {"Kummer bounds B", "kummer_bound", kummer_bounds},
    {"H1 of GL2(Z/8) on (Z/2)^2", "h1", h1_gl2_mod8},
    {"Sah bound over GL2(F_3), GL2(F_5)", "enumerate_subgroups, h1, sah_multiplier", sah_suite},
    {"mod-27 pro-3 group with trivial scalars", "check_pro_p_scalar_criterion", pro_p_counterexample},
    {"key-lemma iteration", "key_lemma_trace", key_lemma_suite},
    {"3-adic subgroup classes", "enumerate_subgroups, irreducibility_report", three_adic_classes},
    {"mod-13 exceptional class", "s4_type_group_mod13, s4_class_filter", mod13_class},
    {"Kummer divisibility rows", "kummer_divisibility", kummer_rows},
    {"division polynomials vs group law", "division_polynomials", division_oracle},
    {"generated submodule index", "generated_submodule_index, algebra_span", submodule_suite},
    {"algebra span optimality", "algebra_span, full_preimage_generators", algebra_optimality},
};

}  // namespace

CheckResult run_check(int id, const CheckOptions& opts) {
  if (id < 1 || id > kCheckCount) throw DomainError("unknown check id " + std::to_string(id));
  const CheckEntry& e = kChecks[id - 1];
  CheckResult r;
  r.id = id;
  r.name = e.name;
  r.operation = e.operation;
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome o = e.fn(opts);
    r.pass = o.pass;
    r.detail = std::move(o.detail);
  } catch (const std::exception& ex) {
    r.pass = false;
    r.detail = std::string("error: ") + ex.what();
  }
  r.ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CheckResult> run_all_checks(const CheckOptions& opts) {
  std::vector<CheckResult> out;
  for (int id = 1; id <= kCheckCount; ++id) out.push_back(run_check(id, opts));
  return out;
}

std::string format_check_line(const CheckResult& r) {
  std::ostringstream os;
  os << "check " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << " " << r.name << " (" << r.ms << " ms) "
     << r.detail;
  return os.str();
}

std::string checks_markdown(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  os << "# galimage verification report\n\n";
  os << "| # | Check | Operations | Result | ms | Detail |\n";
  os << "|---|---|---|---|---|---|\n";
  std::size_t passed = 0;
  for (const auto& r : results) {
    if (r.pass) ++passed;
    os << "| " << r.id << " | " << r.name << " | `" << r.operation << "` | " << (r.pass ? "PASS" : "FAIL") << " | "
       << r.ms << " | " << r.detail << " |\n";
  }
  os << "\n" << passed << " of " << results.size() << " checks pass.\n";
  return os.str();
}

}  // namespace galimage
