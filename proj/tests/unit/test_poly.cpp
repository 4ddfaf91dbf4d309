#include <gtest/gtest.h>

#include <map>
#include <random>

#include "galimage/errors.hpp"
#include "galimage/poly.hpp"
#include "galimage/residue.hpp"

using namespace galimage;
using namespace galimage::poly;

namespace {

/// Oracle: trial division by every monic polynomial of degree <= deg/2.
bool brute_irreducible_mod_p(const FpPoly& f) {
  const int n = f.degree();
  if (n < 1) return false;
  const std::uint64_t p = f.p;
  for (int d = 1; 2 * d <= n; ++d) {
    std::uint64_t count = ipow(p, static_cast<unsigned>(d));
    for (std::uint64_t code = 0; code < count; ++code) {
      FpPoly g{p, {}};
      std::uint64_t x = code;
      for (int i = 0; i < d; ++i) {
        g.c.push_back(x % p);
        x /= p;
      }
      g.c.push_back(1);
      if (fp_divmod(f, g).second.is_zero()) return false;
    }
  }
  return true;
}

ZPoly random_poly(std::mt19937_64& rng, int deg, long range) {
  ZPoly f;
  for (int i = 0; i < deg; ++i) f.emplace_back(static_cast<long>(rng() % (2 * range + 1)) - range);
  f.emplace_back(1 + static_cast<long>(rng() % 3));
  return f;
}

/// A random polynomial certified irreducible over Z by brute force mod 3 or 5.
ZPoly random_irreducible(std::mt19937_64& rng, int deg) {
  for (;;) {
    ZPoly f = random_poly(rng, deg, 20);
    for (std::uint64_t p : {3u, 5u}) {
      if (mpz_divisible_ui_p(f.back().get_mpz_t(), p)) continue;
      if (content(f) == 1 && brute_irreducible_mod_p(reduce(f, p))) return f;
    }
  }
}

std::multiset<std::string> as_multiset(const ZFactorization& z) {
  std::multiset<std::string> s;
  for (const auto& f : z.factors) {
    for (int i = 0; i < f.multiplicity; ++i) s.insert(to_string(f.poly));
  }
  return s;
}

}  // namespace

TEST(FactorModP, Examples) {
  auto f = factor_mod_p(from_ints({1, 0, 1}), 5);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].first.c, (std::vector<std::uint64_t>{2, 1}));
  EXPECT_EQ(f[1].first.c, (std::vector<std::uint64_t>{3, 1}));
  auto g = factor_mod_p(from_ints({1, 0, 1}), 7);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].first.degree(), 2);
  EXPECT_THROW(factor_mod_p(from_ints({1, 0, 5}), 5), DomainError);
}

TEST(FactorModP, ProductAndIrreducibility) {
  std::mt19937_64 rng(5);
  for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
    for (int t = 0; t < 40; ++t) {
      FpPoly f{p, {}};
      const int deg = 1 + static_cast<int>(rng() % 8);
      for (int i = 0; i < deg; ++i) f.c.push_back(rng() % p);
      f.c.push_back(1);
      if (t % 4 == 0) f = fp_mul(f, f);
      auto fac = factor_mod_p(f, 1234 + static_cast<std::uint64_t>(t));
      FpPoly prod{p, {1}};
      for (auto& [g, m] : fac) {
        EXPECT_EQ(g.lead(), 1u);
        EXPECT_TRUE(brute_irreducible_mod_p(g)) << to_string(g) << " mod " << p;
        EXPECT_EQ(is_irreducible_mod_p(g), true);
        for (int i = 0; i < m; ++i) prod = fp_mul(prod, g);
      }
      EXPECT_EQ(prod, fp_monic(f));
    }
  }
}

TEST(FactorModP, SeedDoesNotChangeResult) {
  ZPoly f = from_ints({-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1});
  auto a = factor_mod_p(f, 13, 1);
  auto b = factor_mod_p(f, 13, 99);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 12u);
}

TEST(IrreducibleModP, MatchesBruteForce) {
  std::mt19937_64 rng(8);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    for (int t = 0; t < 60; ++t) {
      FpPoly f{p, {}};
      const int deg = 1 + static_cast<int>(rng() % 6);
      for (int i = 0; i < deg; ++i) f.c.push_back(rng() % p);
      f.c.push_back(1);
      EXPECT_EQ(is_irreducible_mod_p(f), brute_irreducible_mod_p(f)) << to_string(f);
    }
  }
}

TEST(ZPolyArithmetic, GcdAndSquarefree) {
  ZPoly a = from_ints({-1, 1});
  ZPoly b = from_ints({1, 0, 1});
  ZPoly f = mul(mul(mul(a, a), a), mul(b, b));
  auto sq = squarefree_decomposition(f);
  ASSERT_EQ(sq.size(), 2u);
  EXPECT_EQ(sq[0].first, b);
  EXPECT_EQ(sq[0].second, 2);
  EXPECT_EQ(sq[1].first, a);
  EXPECT_EQ(sq[1].second, 3);
  EXPECT_EQ(gcd(mul(a, b), mul(a, from_ints({2, 3}))), a);
  ZPoly q;
  EXPECT_TRUE(divides(b, f, &q));
  EXPECT_EQ(mul(q, b), f);
  EXPECT_FALSE(divides(from_ints({1, 2}), b));
}

TEST(FactorOverZ, Examples) {
  auto z = factor_over_z(from_ints({-1, 0, 0, 0, 1}));
  EXPECT_EQ(z.degrees(), (std::vector<int>{1, 1, 2}));
  EXPECT_EQ(as_multiset(z), (std::multiset<std::string>{"x - 1", "x + 1", "x^2 + 1"}));
  // A quintic irreducible mod 2 stays whole.
  ZPoly q = from_ints({7, -2, 3, 4, 0, 5});
  ASSERT_TRUE(is_irreducible_mod_p(reduce(q, 2)));
  auto zq = factor_over_z(q);
  ASSERT_EQ(zq.factors.size(), 1u);
  EXPECT_EQ(zq.factors[0].poly, q);
  EXPECT_THROW(factor_over_z(ZPoly(32, mpz_class(1))), CapExceeded);
}

TEST(FactorOverZ, IrreducibleButSplitsModEveryPrime) {
  auto a = factor_over_z(from_ints({1, 0, -10, 0, 1}));
  ASSERT_EQ(a.factors.size(), 1u);
  EXPECT_EQ(a.factors[0].certificate, "recombination");
  auto b = factor_over_z(from_ints({576, 0, -960, 0, 352, 0, -40, 0, 1}));
  EXPECT_EQ(b.degrees(), (std::vector<int>{8}));
  auto c = factor_over_z(mul(from_ints({1, 0, -10, 0, 1}), from_ints({-2, 0, 1})));
  EXPECT_EQ(c.degrees(), (std::vector<int>{2, 4}));
}

TEST(FactorOverZ, RecoversKnownIrreducibles) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 25; ++t) {
    const int k = 1 + static_cast<int>(rng() % 4);
    ZPoly f = from_ints({static_cast<long>(1 + rng() % 5)});
    std::multiset<std::string> expect;
    int total = 0;
    for (int i = 0; i < k; ++i) {
      const int deg = 1 + static_cast<int>(rng() % 6);
      if (total + deg > 30) break;
      ZPoly g = random_irreducible(rng, deg);
      g = primitive_part(g);
      f = mul(f, g);
      expect.insert(to_string(g));
      total += deg;
    }
    auto z = factor_over_z(f);
    EXPECT_EQ(as_multiset(z), expect);
    EXPECT_EQ(z.product(), f);
  }
}

TEST(FactorOverZ, ProductAndContent) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 30; ++t) {
    ZPoly f = scale(random_poly(rng, 1 + static_cast<int>(rng() % 10), 50), mpz_class(-6));
    auto z = factor_over_z(f);
    EXPECT_EQ(z.product(), f);
    for (const auto& fac : z.factors) {
      EXPECT_EQ(content(fac.poly), 1);
      EXPECT_GT(fac.poly.back(), 0);
    }
  }
}

TEST(FactorOverZ, Multiplicities) {
  ZPoly a = from_ints({3, -2});
  ZPoly b = from_ints({1, 1, 1});
  auto z = factor_over_z(mul(mul(a, a), mul(mul(b, b), b)));
  ASSERT_EQ(z.factors.size(), 2u);
  EXPECT_EQ(z.degrees(), (std::vector<int>{1, 1, 2, 2, 2}));
  EXPECT_EQ(z.unit_content, 1);
}
