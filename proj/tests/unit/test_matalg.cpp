#include <gtest/gtest.h>

#include <random>
#include <set>

#include "galimage/errors.hpp"
#include "galimage/matalg.hpp"

using namespace galimage;

namespace {

using Vec4 = std::array<std::uint32_t, 4>;

/// Oracle: additive subgroup of (Z/N)^4 generated by all group elements.
std::set<Vec4> additive_span(const FiniteMatrixGroup& g) {
  const std::uint32_t n = g.modulus();
  std::set<Vec4> span{{0, 0, 0, 0}};
  std::vector<Vec4> frontier{{0, 0, 0, 0}};
  while (!frontier.empty()) {
    std::vector<Vec4> next;
    for (const Vec4& v : frontier) {
      for (const Mat2& m : g.elements()) {
        Vec4 w{(v[0] + m.a()) % n, (v[1] + m.b()) % n, (v[2] + m.c()) % n, (v[3] + m.d()) % n};
        if (span.insert(w).second) next.push_back(w);
      }
    }
    frontier = std::move(next);
  }
  return span;
}

int oracle_min_m(const std::set<Vec4>& span, std::uint32_t p, int k) {
  for (int m = 0; m < k; ++m) {
    auto t = static_cast<std::uint32_t>(ipow(p, static_cast<unsigned>(m)));
    if (span.count({t, 0, 0, 0}) && span.count({0, t, 0, 0}) && span.count({0, 0, t, 0}) &&
        span.count({0, 0, 0, t})) {
      return m;
    }
  }
  return k;
}

int log_base(std::size_t size, std::uint32_t p) {
  int d = 0;
  while (size > 1) {
    size /= p;
    ++d;
  }
  return d;
}

}  // namespace

TEST(AlgebraSpan, Examples) {
  auto a = algebra_span(gl2(5));
  EXPECT_EQ(a.min_m, 0);
  EXPECT_EQ(a.log_size, 4);
  auto b = algebra_span(borel(9));
  EXPECT_EQ(b.min_m, 2);
  EXPECT_FALSE(b.nontrivial_containment);
  auto c = algebra_span(FiniteMatrixGroup::closure(9, {Mat2::diag(9, 1, -1), Mat2(9, 1, 0, 1, 1), Mat2(9, 1, 1, 0, 1)}));
  EXPECT_EQ(c.min_m, 0);
  EXPECT_TRUE(c.nontrivial_containment);
}

TEST(AlgebraSpan, MatchesAdditiveSpanOracle) {
  std::mt19937_64 rng(3);
  for (std::uint32_t n : {4u, 8u, 9u, 25u}) {
    auto all = gl2(n);
    auto pk = factorize(n)[0];
    for (int t = 0; t < 10; ++t) {
      auto g = FiniteMatrixGroup::closure(n, {all.elements()[rng() % all.order()],
                                              all.elements()[rng() % all.order()]});
      if (n == 25 && g.order() > 40) continue;
      auto span = additive_span(g);
      auto a = algebra_span(g);
      EXPECT_EQ(a.log_size, log_base(span.size(), static_cast<std::uint32_t>(pk.first))) << g.to_text();
      EXPECT_EQ(a.min_m, oracle_min_m(span, static_cast<std::uint32_t>(pk.first), pk.second));
      for (const Mat2& m : a.basis) EXPECT_TRUE(span.count(m.entries()));
    }
  }
}

TEST(AlgebraSpan, IdempotentsFromDiagonalInvolution) {
  std::mt19937_64 rng(7);
  for (std::uint32_t n : {9u, 25u, 27u}) {
    auto all = gl2(n);
    for (int t = 0; t < 5; ++t) {
      auto a = algebra_span(n, {Mat2::diag(n, 1, -1), all.elements()[rng() % all.order()]});
      EXPECT_TRUE(a.contains(Mat2::diag(n, 1, 0)));
      EXPECT_TRUE(a.contains(Mat2::diag(n, 0, 1)));
    }
  }
}

TEST(AlgebraSpan, IrreducibleWithInvolutionIsFull) {
  // Subgroups of GL2(F_3) acting irreducibly and containing diag(1,-1); random
  // lifts of their generators to Z/9 together with diag(1,-1) span all of Mat2.
  std::mt19937_64 rng(19);
  const Mat2 c3 = Mat2::diag(3, 1, -1);
  int tested = 0;
  for (const auto& h : enumerate_subgroups(gl2(3))) {
    if (!h.contains(c3) || irreducibility_report(h) == Irreducibility::kReducible) continue;
    for (int t = 0; t < 5; ++t) {
      std::vector<Mat2> gens{Mat2::diag(9, 1, -1)};
      for (const Mat2& s : h.generators()) {
        gens.push_back(s.lift_to(9) + Mat2(9, 3 * static_cast<std::int64_t>(rng() % 3), 3 * static_cast<std::int64_t>(rng() % 3),
                                           3 * static_cast<std::int64_t>(rng() % 3), 3 * static_cast<std::int64_t>(rng() % 3)));
      }
      auto a = algebra_span(9, gens);
      EXPECT_EQ(a.min_m, 0) << h.to_text();
      EXPECT_EQ(a.log_size, 8);
      ++tested;
    }
  }
  EXPECT_GT(tested, 0);
}

TEST(AlgebraSpan, ReductionCompatibility) {
  std::mt19937_64 rng(23);
  auto all = gl2(27);
  for (int t = 0; t < 10; ++t) {
    std::vector<Mat2> gens{all.elements()[rng() % all.order()], all.elements()[rng() % all.order()]};
    auto top = algebra_span(27, gens);
    for (std::uint32_t j : {3u, 9u}) {
      std::vector<Mat2> low;
      for (const Mat2& s : gens) low.push_back(s.reduce(j));
      auto bottom = algebra_span(j, low);
      for (const Mat2& b : top.basis) EXPECT_TRUE(bottom.contains(b.reduce(j)));
      std::set<Vec4> reduced;
      for (const Mat2& b : top.basis) reduced.insert(b.reduce(j).entries());
      // Equal spans: same size after reducing the top basis.
      ChainRing R(3, j == 3 ? 1 : 2);
      HowellSpan hs(R, 4);
      for (const auto& v : reduced) hs.insert({v[0], v[1], v[2], v[3]});
      EXPECT_EQ(hs.log_size(), bottom.log_size);
    }
  }
}

TEST(AlgebraSpan, BorelOptimality) {
  for (std::uint32_t ell : {3u, 5u}) {
    for (int k : {1, 2}) {
      const auto q = static_cast<std::uint32_t>(ipow(ell, static_cast<unsigned>(k)));
      auto b = algebra_span(q * ell, full_preimage_generators(borel(q), q * ell));
      EXPECT_EQ(b.min_m, k);
      EXPECT_TRUE(b.nontrivial_containment);
      auto at_level = algebra_span(borel(q));
      EXPECT_EQ(at_level.min_m, k);
      EXPECT_FALSE(at_level.nontrivial_containment);
      EXPECT_EQ(algebra_span(q * ell, full_preimage_generators(gl2(ell), q * ell)).min_m, 0);
      auto n = cartan_normalizer({ell, 2u, false});
      EXPECT_EQ(algebra_span(q * ell, full_preimage_generators(n, q * ell)).min_m, 0);
    }
  }
}

TEST(ReducibleBound, Examples) {
  auto g = FiniteMatrixGroup::closure(9, {Mat2::diag(9, 1, -1), Mat2(9, 1, 0, 1, 1), Mat2(9, 1, 1, 0, 1)});
  EXPECT_TRUE(verify_reducible_bound(g, 0));
  EXPECT_THROW(verify_reducible_bound(FiniteMatrixGroup::closure(9, {Mat2::diag(9, 1, -1)}), 2), HypothesisError);
  auto n73 = full_preimage(cartan_normalizer({7, 3, false}), 49);
  EXPECT_TRUE(verify_reducible_bound(n73, 0));
  EXPECT_EQ(algebra_span(n73).min_m, 0);
  // Valuation-1 off-diagonal witnesses: the span contains 3 Mat2 but not Mat2.
  auto h = FiniteMatrixGroup::closure(27, {Mat2::diag(27, 1, -1), Mat2(27, 1, 0, 3, 1), Mat2(27, 1, 3, 0, 1)});
  EXPECT_TRUE(verify_reducible_bound(h, 1));
  EXPECT_EQ(algebra_span(h).min_m, 1);
  EXPECT_THROW(verify_reducible_bound(h, 0), HypothesisError);
}

TEST(TwoAdicBound, Examples) {
  EXPECT_TRUE(verify_two_adic_bound(gl2(8), 0));
  auto base = FiniteMatrixGroup::closure(4, {Mat2(4, 1, 0, 0, -1), Mat2(4, 1, 0, 2, 1), Mat2(4, 1, 2, 0, 1)});
  auto pre = full_preimage(base, 8);
  EXPECT_LE(algebra_span(pre).min_m, 2);
  EXPECT_TRUE(verify_two_adic_bound(pre, 1));
  auto cyc = FiniteMatrixGroup::closure(8, {Mat2(8, 1, 1, 0, -1)});
  EXPECT_EQ(algebra_span(cyc).min_m, 3);
  EXPECT_FALSE(verify_two_adic_bound(cyc, 1));
  EXPECT_TRUE(verify_two_adic_bound(cyc, 2));
  EXPECT_THROW(verify_two_adic_bound(FiniteMatrixGroup::closure(8, {Mat2(8, 1, 2, 0, 1)}), 0), HypothesisError);
}

TEST(ConjugationWitness, SolvesEquation) {
  Mat2 t(8, 1, 1, 0, -1);
  Mat2 x(8, 1, 2, 3, 3);
  Mat2 h = x.inverse() * t * x;
  auto w = conjugation_witness(h, t);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(*w * h * w->inverse(), t);
  EXPECT_FALSE(conjugation_witness(Mat2::identity(8), t).has_value());
}
