#include <gtest/gtest.h>

#include <random>
#include <set>

#include "galimage/bounds.hpp"
#include "galimage/cohom.hpp"
#include "galimage/errors.hpp"
#include "galimage/matalg.hpp"

using namespace galimage;

namespace {

mpz_class pw(unsigned long p, unsigned long e) {
  mpz_class t;
  mpz_ui_pow_ui(t.get_mpz_t(), p, e);
  return t;
}

/// Oracle: orbit closure of v under sums and generator action, as a set.
std::set<std::array<std::uint32_t, 2>> orbit_span(const std::vector<Mat2>& gens, std::uint32_t n,
                                                  std::array<std::uint32_t, 2> v) {
  std::set<std::array<std::uint32_t, 2>> span{{0, 0}};
  std::vector<std::array<std::uint32_t, 2>> stack{{0, 0}};
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    std::vector<std::array<std::uint32_t, 2>> next{{(x[0] + v[0]) % n, (x[1] + v[1]) % n}};
    for (const Mat2& s : gens) next.push_back(s.apply(x[0], x[1]));
    for (const auto& y : next) {
      if (span.insert(y).second) stack.push_back(y);
    }
  }
  return span;
}

/// Exhaustive min over units of v(a^t - 1), capped at k.
int brute_min_valuation(std::uint64_t t, std::uint32_t ell, int k) {
  const std::uint64_t q = ipow(ell, static_cast<unsigned>(k));
  int best = k;
  for (std::uint64_t a = 1; a < q; ++a) {
    if (a % ell == 0) continue;
    std::uint64_t x = 1;
    for (std::uint64_t i = 0; i < t; ++i) x = x * a % q;
    x = (x + q - 1) % q;
    int v = 0;
    while (x != 0 && x % ell == 0 && v < k) {
      x /= ell;
      ++v;
    }
    best = std::min(best, x == 0 ? k : v);
  }
  return best;
}

}  // namespace

TEST(ExpPgl2, Examples) {
  EXPECT_EQ(exp_pgl2(2), 6u);
  EXPECT_EQ(exp_pgl2(3), 12u);
  EXPECT_EQ(exp_pgl2(7), 168u);
}

TEST(ExpPgl2, ClosedFormCrossCheck) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 37u}) {
    EXPECT_EQ(exp_pgl2(p), lcm_u64(lcm_u64(p, p - 1), p + 1)) << p;
  }
  EXPECT_EQ(exp_pgl2(37, 4), exp_pgl2(37, 1));
  EXPECT_THROW(exp_pgl2(15), DomainError);
}

TEST(AValuations, SmallPrimesAgreeWithTable) {
  auto a = a_valuations();
  EXPECT_EQ(a[2], 4);
  EXPECT_EQ(a[3], 2);
  EXPECT_EQ(a[5], 1);
  EXPECT_EQ(a[7], 1);
  for (std::uint32_t ell : {11u, 13u, 17u, 23u, 29u, 31u, 37u}) EXPECT_EQ(a[ell], 0) << ell;
}

TEST(AValuations, NineteenDividesTheExponentOfPgl2F37) {
  // PGL2(F_37) has a nonsplit torus image of order 38 = 2 * 19.
  EXPECT_EQ(exp_pgl2(37) % 19, 0u);
  EXPECT_EQ(a_valuations()[19], 1);
}

TEST(ExponentConstant, RecomputedAgainstQuoted) {
  auto e = exponent_constant_e();
  EXPECT_EQ(e.m[2], 5);
  EXPECT_EQ(e.m[3], 3);
  EXPECT_EQ(expand(e.quoted), pw(2, 12) * pw(3, 8) * pw(5, 3) * pw(7, 3) * pw(11, 2));
  // Away from 19 the recomputation agrees with the quoted constant.
  auto without19 = e.factorization;
  without19.erase(19);
  EXPECT_EQ(without19, e.quoted);
  EXPECT_EQ(e.factorization[19], 1);
  EXPECT_FALSE(e.matches_quoted);
  EXPECT_EQ(e.value, expand(e.factorization));
}

TEST(ExponentConstant, ProfileInputs) {
  auto quoted_a = PrimeExponents{{2, 4}, {3, 2}, {5, 1}, {7, 1}};
  auto e = exponent_constant_e(cohomology_exponent_table(), quoted_a);
  EXPECT_TRUE(e.matches_quoted);
  auto zero = exponent_constant_e({}, {});
  // m_2 = n_2 + v_2(4) is forced even with n = 0.
  EXPECT_EQ(zero.value, 4);
  EXPECT_EQ(combined_exponent_bound({}, {}, {}), 1);
}

TEST(CmEll, Examples) {
  EXPECT_EQ(cm_e_ell(2, 1, 5), 0);
  EXPECT_EQ(cm_e_ell(2, 1, 3), 1);
  EXPECT_EQ(cm_e_ell(2, 1, 97), 0);
  EXPECT_EQ(cm_e_ell(2, 1, 2), 3);
  EXPECT_EQ(cm_e_ell(4, 1, 2, 5), 4);
}

TEST(CmEll, AgainstExhaustiveUnitSearch) {
  for (unsigned h : {2u, 4u, 6u}) {
    for (unsigned d = 1; d <= 4; ++d) {
      for (std::uint32_t ell : {2u, 3u, 5u, 7u, 11u, 13u}) {
        const int got = cm_e_ell(h, d, ell);
        int k = 1;
        while (ipow(ell, static_cast<unsigned>(k)) < 4096) ++k;
        EXPECT_EQ(got, brute_min_valuation(h * d, ell, k)) << h << " " << d << " " << ell;
        if (ell % 2 == 1 && (h * d) % (ell - 1) != 0 && (h * d) % ell != 0) EXPECT_EQ(got, 0);
        if (ell - 1 > h * d) EXPECT_EQ(got, 0);
      }
    }
  }
}

TEST(Tables, Verbatim) {
  EXPECT_EQ(t0_primes(), (std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 37}));
  EXPECT_EQ(scalar_level_table(),
            (PrimeExponents{{2, 4}, {3, 3}, {5, 1}, {7, 1}, {11, 1}, {13, 1}, {17, 1}, {37, 1}}));
  EXPECT_EQ(cm_cohomology_exponent_table(),
            (PrimeExponents{{2, 3}, {3, 1}, {7, 1}, {11, 1}, {19, 1}, {43, 1}, {67, 1}, {163, 1}}));
  for (auto [p, e] : algebra_exponent_table_non_cm()) {
    EXPECT_TRUE(std::count(t0_primes().begin(), t0_primes().end(), p));
    EXPECT_GE(e, 1);
  }
}

TEST(KummerBound, Displays) {
  auto b_non_cm = kummer_bound(quoted_exponent_e(), algebra_exponent_table_non_cm());
  EXPECT_EQ(b_non_cm, pw(2, 24) * pw(3, 16) * pw(5, 6) * pw(7, 6) * pw(11, 4) *
                          (pw(2, 4) * pw(3, 2) * pw(5, 2) * 7 * 11 * 13 * 17 * 37));
  auto b_cm = kummer_bound(cm_exponent_e(), algebra_exponent_table_cm());
  EXPECT_EQ(b_cm, (pw(2, 4) * pw(3, 2)) * (pw(2, 3) * pw(3, 3) * 7 * 11 * 19 * 43 * 67 * 163));
  EXPECT_EQ(kummer_bound({}, {}), 1);
}

TEST(KummerBound, SharperThreeAdicExponent) {
  auto e = quoted_exponent_e();
  e[3] = 6;
  auto f = kummer_bound_factorization(e, algebra_exponent_table_non_cm());
  EXPECT_EQ(f[3], 14);
  EXPECT_EQ(kummer_bound_factorization(quoted_exponent_e(), algebra_exponent_table_non_cm())[3], 18);
}

TEST(SubmoduleIndexBound, Examples) {
  EXPECT_EQ(submodule_index_bound(1, 2, 3), 81);
  EXPECT_EQ(submodule_index_bound(0, 0, 5), 1);
  EXPECT_EQ(submodule_index_bound(12, 4, 2), pw(2, 28));
  EXPECT_THROW(submodule_index_bound(-1, 0, 3), DomainError);
}

TEST(GeneratedSubmoduleIndex, Examples) {
  EXPECT_EQ(generated_submodule_index(gl2(3), {1, 0}), 1);
  for (std::uint32_t ell : {3u, 5u}) {
    auto triv = FiniteMatrixGroup::closure(ell * ell, {});
    EXPECT_EQ(generated_submodule_index(triv, {ell, 0}), ell * ell * ell);
  }
  auto b = borel(9);
  auto idx = generated_submodule_index(b, {3, 0});
  EXPECT_EQ(idx * orbit_span(b.generators(), 9, {3, 0}).size(), 81);
  auto bound = submodule_index_bound(1, algebra_span(b).min_m, 3);
  EXPECT_EQ(bound % idx, 0);
}

TEST(GeneratedSubmoduleIndex, MatchesOrbitSpanAndDividesBound) {
  std::mt19937_64 rng(11);
  for (std::uint32_t n : {9u, 25u, 27u}) {
    auto all = gl2(n);
    const auto p = static_cast<std::uint32_t>(factorize(n)[0].first);
    for (int t = 0; t < 15; ++t) {
      std::vector<Mat2> gens;
      for (int j = 0; j < 1 + t % 2; ++j) gens.push_back(all.elements()[rng() % all.order()]);
      std::array<std::uint32_t, 2> v{static_cast<std::uint32_t>(rng() % n), static_cast<std::uint32_t>(rng() % n)};
      if (v[0] == 0 && v[1] == 0) continue;
      auto span = orbit_span(gens, n, v);
      auto idx = generated_submodule_index(n, gens, v);
      EXPECT_EQ(idx * span.size(), mpz_class(n) * n);
      const int d = std::min(valuation_of(v[0] == 0 ? n : v[0], p), valuation_of(v[1] == 0 ? n : v[1], p));
      auto m = algebra_span(n, gens).min_m;
      EXPECT_EQ(submodule_index_bound(d, m, p) % idx, 0);
    }
  }
}
