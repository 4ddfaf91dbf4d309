#include <gtest/gtest.h>

#include <random>
#include <set>

#include "galimage/errors.hpp"
#include "galimage/scalars.hpp"

using namespace galimage;

namespace {

FiniteMatrixGroup counterexample27() {
  return FiniteMatrixGroup::closure(27, {Mat2(27, 10, 0, 0, 16), Mat2(27, 10, 9, 23, 10)});
}

Mat2 conj_c(const Mat2& m) {
  const std::uint32_t n = m.modulus();
  return Mat2(n, m.a(), (n - m.b()) % n, (n - m.c()) % n, m.d());
}

/// Random C-stable 3-subgroup: generated by elements x, C x C of the Sylow
/// preimage of the upper (or lower) unitriangular group mod 3.
FiniteMatrixGroup random_c_stable_3group(std::uint32_t n, std::mt19937_64& rng, bool lower) {
  std::vector<Mat2> gens;
  const int count = 1 + static_cast<int>(rng() % 2);
  for (int i = 0; i < count; ++i) {
    auto r = [&] { return static_cast<std::int64_t>(rng() % (n / 3)) * 3; };
    std::int64_t off = static_cast<std::int64_t>(rng() % n);
    Mat2 x = lower ? Mat2(n, 1 + r(), r(), off, 1 + r()) : Mat2(n, 1 + r(), off, r(), 1 + r());
    gens.push_back(x);
    gens.push_back(conj_c(x));
  }
  return FiniteMatrixGroup::closure(n, gens);
}

/// x with x = lambda mod l and x^l = x, by search.
std::uint32_t brute_teichmuller(std::uint32_t lambda, std::uint32_t ell, std::uint32_t n) {
  for (std::uint32_t x = lambda % ell; x < n; x += ell) {
    if (pow_mod(x, ell, n) == x) return x;
  }
  return 0;
}

}  // namespace

TEST(ScalarLifting, Examples) {
  auto n52 = cartan_normalizer({5, 2, true});
  auto g = full_preimage(n52, 25);
  auto rep = check_scalar_lifting_criterion(g);
  EXPECT_TRUE(rep.hypotheses_hold());
  EXPECT_TRUE(rep.conclusions.at("contains_one_plus_ell"));
  EXPECT_TRUE(g.contains(Mat2::scalar(25, 6)));

  auto u = check_scalar_lifting_criterion(upper_unitriangular(25));
  EXPECT_FALSE(u.hypotheses.at("tau_mod_ell"));
  EXPECT_FALSE(u.hypotheses.at("det_surjective"));
  EXPECT_FALSE(u.conclusions.at("contains_one_plus_ell"));

  auto full = check_scalar_lifting_criterion(gl2(25));
  EXPECT_TRUE(full.conclusions.at("contains_one_plus_ell"));
  EXPECT_TRUE(full.conclusions.at("contains_all_units"));
  EXPECT_FALSE(full.hypotheses.at("ell_coprime_to_order_mod_ell"));
  EXPECT_THROW(check_scalar_lifting_criterion(gl2(4)), DomainError);
}

TEST(ScalarLifting, SoundOnPreimages) {
  // Whenever the mod-l hypotheses hold for a full preimage, (1 + l) Id is present.
  for (std::uint32_t p : {3u, 5u}) {
    for (const auto& h : enumerate_subgroups(gl2(p))) {
      auto g = full_preimage(h, p * p);
      auto rep = check_scalar_lifting_criterion(g);
      if (rep.hypotheses.at("det_surjective") && rep.hypotheses.at("ell_coprime_to_order_mod_ell") &&
          rep.hypotheses.at("tau_mod_ell") && rep.hypotheses.at("good_element_mod_ell")) {
        EXPECT_TRUE(g.contains(Mat2::scalar(p * p, 1 + p))) << h.to_text();
      }
    }
  }
}

TEST(ScalarLifting, TeichmullerMembership) {
  std::mt19937_64 rng(5);
  for (std::uint32_t p : {3u, 5u, 7u}) {
    auto all = gl2(p);
    for (int t = 0; t < 6; ++t) {
      auto h = FiniteMatrixGroup::closure(p, {all.elements()[rng() % all.order()],
                                              all.elements()[rng() % all.order()]});
      if (h.order() * ipow(p, 4) > (std::size_t{1} << 20)) continue;
      auto g = full_preimage(h, p * p);
      for (std::uint32_t lam : h.scalar_subgroup()) {
        std::uint32_t w = brute_teichmuller(lam, p, p * p);
        EXPECT_TRUE(g.contains(Mat2::scalar(p * p, w)));
      }
      EXPECT_TRUE(check_scalar_lifting_criterion(g).conclusions.at("teichmuller_lifts_present"));
    }
  }
}

TEST(CartanCriterion, Examples) {
  auto n73 = full_preimage(cartan_normalizer({7, 3, false}), 49);
  auto rep = check_cartan_scalar_criterion(n73);
  EXPECT_TRUE(rep.applicable);
  EXPECT_TRUE(rep.hypotheses.at("det_surjective"));
  EXPECT_TRUE(rep.hypotheses.at("contains_cartan_normalizer"));
  EXPECT_TRUE(rep.conclusions.at("contains_all_units"));
  EXPECT_EQ(n73.scalar_subgroup().size(), 42u);

  auto cubes = cartan_cube_subgroup({5, 2, true});
  EXPECT_EQ(cubes.order(), 16u);
  auto c25 = full_preimage(cubes, 25);
  auto rc = check_cartan_scalar_criterion(c25);
  EXPECT_TRUE(rc.applicable);
  EXPECT_FALSE(rc.hypotheses.at("contains_cartan_normalizer"));
  EXPECT_TRUE(rc.hypotheses.at("contains_nonsplit_cube_subgroup"));
  EXPECT_TRUE(rc.conclusions.at("contains_all_units"));

  auto rb = check_cartan_scalar_criterion(full_preimage(borel(5), 25));
  EXPECT_FALSE(rb.applicable);
}

TEST(CartanCriterion, SplitAndFullGroups) {
  auto s = check_cartan_scalar_criterion(full_preimage(cartan_normalizer({7, 1, false}), 49));
  EXPECT_TRUE(s.applicable);
  EXPECT_TRUE(s.conclusions.at("contains_all_units"));
  auto g3 = check_cartan_scalar_criterion(gl2(9));
  EXPECT_TRUE(g3.hypotheses.at("contains_cartan_normalizer"));
  EXPECT_FALSE(g3.hypotheses.at("ell_three_excluded_when_dividing_order"));
  EXPECT_FALSE(g3.applicable);
}

TEST(SurjectiveLift, Examples) {
  EXPECT_TRUE(check_surjective_lift(gl2(25)));
  EXPECT_FALSE(check_surjective_lift(sl2(25)));
  EXPECT_FALSE(check_surjective_lift(full_preimage(cartan({5, 2, false}), 25)));
  EXPECT_THROW(check_surjective_lift(gl2(9)), DomainError);
}

TEST(KeyLemma, Examples) {
  auto t = key_lemma_trace(Mat2(9, 1, 1, 0, 1));
  ASSERT_GE(t.steps.size(), 3u);
  EXPECT_TRUE(t.steps[1].m.is_identity());
  EXPECT_EQ(t.first_diagonal, std::optional<std::size_t>(1));

  auto s = key_lemma_trace(Mat2::scalar(27, 4), 5);
  std::uint64_t v = 4;
  for (const auto& st : s.steps) {
    EXPECT_EQ(st.m, Mat2::scalar(27, static_cast<std::int64_t>(v)));
    v = v * v % 27;
  }
  EXPECT_EQ(s.first_diagonal, std::optional<std::size_t>(0));

  const auto ce = counterexample27();
  for (const Mat2& g : ce.elements()) {
    auto tr = key_lemma_trace(g);
    EXPECT_TRUE(tr.diagonal_from_n);
    ASSERT_TRUE(tr.first_diagonal.has_value());
    EXPECT_LE(*tr.first_diagonal, 3u);
    EXPECT_TRUE(tr.recurrences_hold);
  }
  EXPECT_THROW(key_lemma_trace(Mat2(8, 1, 1, 0, 1)), DomainError);
}

TEST(KeyLemma, DecompositionIsExact) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    Mat2 m(81, 1 + 3 * static_cast<std::int64_t>(rng() % 27), 3 * static_cast<std::int64_t>(rng() % 27),
           static_cast<std::int64_t>(rng() % 81), 1 + 3 * static_cast<std::int64_t>(rng() % 27));
    auto tr = key_lemma_trace(m);
    for (const auto& st : tr.steps) {
      EXPECT_EQ(Mat2::scalar(81, st.lambda) + st.d + st.a, st.m);
      EXPECT_EQ((st.d.a() + st.d.d()) % 81, 0u);
    }
    EXPECT_TRUE(tr.recurrences_hold);
    EXPECT_TRUE(tr.mu_units);
  }
}

TEST(KeyLemma, ExhaustiveOverCStable3SubgroupsMod9) {
  // A C-stable 3-subgroup reduces mod 3 into the upper or lower unitriangular
  // group, so it lies in one of these two Sylow preimages.
  const Mat2 c = Mat2::diag(9, 1, -1);
  std::size_t groups = 0;
  for (bool lower : {false, true}) {
    auto base = FiniteMatrixGroup::closure(3, {lower ? Mat2(3, 1, 0, 1, 1) : Mat2(3, 1, 1, 0, 1)});
    auto sylow = full_preimage(base, 9);
    SubgroupEnumerationOptions opts;
    opts.filter = [](const FiniteMatrixGroup& h) { return normalized_by_c(h); };
    for (const auto& h : enumerate_subgroups(sylow, opts)) {
      ++groups;
      std::set<std::uint32_t> dets_all(h.determinant_image().begin(), h.determinant_image().end());
      std::set<std::uint32_t> dets_diag;
      for (const Mat2& m : h.elements()) {
        if (m.is_diagonal()) dets_diag.insert(m.det());
        // Independent iteration: M_i diagonal for every i >= 2.
        Mat2 x = m;
        for (int i = 0; i < 5; ++i) {
          if (i >= 2) EXPECT_TRUE(x.is_diagonal()) << m.to_string();
          x = x * c * x * c;
        }
        auto tr = key_lemma_trace(m, 5);
        EXPECT_TRUE(tr.det_subgroup_invariant);
        EXPECT_TRUE(tr.recurrences_hold);
      }
      EXPECT_EQ(dets_all, dets_diag) << h.to_text();
    }
  }
  EXPECT_GT(groups, 10u);
}

TEST(KeyLemma, RandomLevel27) {
  std::mt19937_64 rng(13);
  const Mat2 c = Mat2::diag(27, 1, -1);
  for (int t = 0; t < 20; ++t) {
    auto h = random_c_stable_3group(27, rng, t % 2 == 1);
    ASSERT_TRUE(normalized_by_c(h));
    for (int j = 0; j < 10; ++j) {
      const Mat2& m = h.elements()[rng() % h.order()];
      Mat2 x = m;
      for (int i = 0; i < 6; ++i) {
        if (i >= 3) EXPECT_TRUE(x.is_diagonal());
        x = x * c * x * c;
      }
      EXPECT_TRUE(key_lemma_trace(m).det_subgroup_invariant);
    }
  }
}

TEST(LieSlices, Examples) {
  auto k = gl2(9).kernel_of_reduction(3);
  auto sl = lie_slices(k);
  ASSERT_EQ(sl.size(), 1u);
  EXPECT_EQ(sl[0].dimension, 4);
  EXPECT_EQ(sl[0].diagonal_dimension, 2);
  EXPECT_EQ(sl[0].antidiagonal_dimension, 2);

  auto u = lie_slices(FiniteMatrixGroup::closure(9, {Mat2(9, 1, 3, 0, 1)}));
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(u[0].elements.size(), 3u);
  EXPECT_EQ(u[0].elements[1], Mat2(3, 0, 1, 0, 0));

  auto ce = lie_slices(counterexample27());
  ASSERT_EQ(ce.size(), 2u);
  for (const auto& s : ce) {
    EXPECT_EQ(s.elements.size(), s.diagonal.size() * s.antidiagonal.size());
  }
  EXPECT_LE(ce[0].elements.size(), ce[1].elements.size());

  EXPECT_THROW(lie_slices(FiniteMatrixGroup::closure(9, {Mat2(9, 1, 1, 1, 2)})), DomainError);
}

TEST(ProPCriterion, Counterexample) {
  auto h = counterexample27();
  auto rep = check_pro_p_scalar_criterion(h, 3);
  EXPECT_TRUE(rep.hypotheses.at("order_mod_p_is_p"));
  EXPECT_TRUE(rep.hypotheses.at("not_triangular_at_level_k"));
  EXPECT_TRUE(rep.hypotheses.at("det_is_one_mod_p"));
  EXPECT_TRUE(rep.hypotheses.at("normalized_by_c"));
  EXPECT_TRUE(rep.conclusions.at("contains_scalars_one_mod_p_k"));
  EXPECT_EQ(h.scalar_subgroup(), std::vector<std::uint32_t>{1});
  EXPECT_EQ(rep.min_scalar_valuation, 3);
}

TEST(ProPCriterion, KernelExtension) {
  auto k = gl2(27).kernel_of_reduction(3);
  std::vector<Mat2> gens = k.generators();
  gens.push_back(Mat2(27, 1, 1, 0, 1));
  auto h = FiniteMatrixGroup::closure(27, gens);
  auto rep = check_pro_p_scalar_criterion(h, 1);
  EXPECT_TRUE(rep.conclusions.at("contains_scalars_one_mod_p_k"));
  EXPECT_TRUE(h.contains(Mat2::scalar(27, 4)));
  EXPECT_FALSE(rep.hypotheses.at("not_triangular_at_level_k"));
  EXPECT_THROW(check_pro_p_scalar_criterion(h, 4), DomainError);
}

TEST(ProPCriterion, SoundnessOnRandomGroups) {
  std::mt19937_64 rng(17);
  int held = 0;
  for (int t = 0; t < 60; ++t) {
    auto h = random_c_stable_3group(27, rng, t % 2 == 1);
    for (int k = 1; k <= 3; ++k) {
      auto rep = check_pro_p_scalar_criterion(h, k);
      if (!rep.hypotheses_hold()) continue;
      ++held;
      const auto lam = static_cast<std::int64_t>(1 + ipow(3, static_cast<unsigned>(k)));
      for (std::uint32_t n : {3u, 9u, 27u}) {
        EXPECT_TRUE(h.reduce(n).contains(Mat2::scalar(n, lam))) << h.to_text();
      }
    }
  }
  EXPECT_GT(held, 0);
}
