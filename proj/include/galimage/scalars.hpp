#pragma once

/**
 * @file scalars.hpp
 * @brief Finite-level checks for scalar-lifting criteria in closed subgroups
 *        of GL2(Z_l) modelled as full preimages of finite-level groups.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "galimage/matgrp.hpp"

namespace galimage {

/// Named hypothesis and conclusion flags plus witnesses, all verified at
/// the modulus of the input group.
struct CriterionReport {
  std::uint32_t ell = 0;
  int level = 0;
  /// False when no hypothesis branch of the criterion applies.
  bool applicable = true;
  std::map<std::string, bool> hypotheses;
  std::map<std::string, bool> conclusions;
  std::map<std::string, std::string> witnesses;
  /// min v_l(lambda - 1) over scalars lambda != 1 in G; the level if none.
  int min_scalar_valuation = 0;

  bool hypotheses_hold() const;
};

/// Decomposition M = lambda Id + D + A with D diagonal traceless and A antidiagonal.
struct KeyLemmaStep {
  Mat2 m;
  std::uint32_t lambda = 0;
  Mat2 d;
  Mat2 a;
  /// D_i = mu_i D_0 with mu_i = prod_{j < i} 2 lambda_j.
  std::uint32_t mu = 1;
};

struct KeyLemmaTrace {
  std::uint32_t p = 0;
  int n = 0;
  std::vector<KeyLemmaStep> steps;
  /// First i with M_i diagonal.
  std::optional<std::size_t> first_diagonal;
  /// M_i diagonal for every i >= n that was computed.
  bool diagonal_from_n = false;
  /// <det M_i> = <det M> for every i.
  bool det_subgroup_invariant = false;
  /// D_{i+1} = 2 lambda_i D_i and A_{i+1} = [A_i, D_i] for every i.
  bool recurrences_hold = false;
  /// Every mu_i is a unit.
  bool mu_units = false;
};

/// L_i = {(g - Id) / p^i mod p : g in ker(H mod p^{i+1} -> H mod p^i)}.
struct LieSlice {
  int level = 0;
  std::vector<Mat2> elements;
  std::vector<Mat2> diagonal;
  std::vector<Mat2> antidiagonal;
  int dimension = 0;
  int diagonal_dimension = 0;
  int antidiagonal_dimension = 0;
};

/// Criterion for 1 + l Z_l: full determinant, l coprime to |G mod l|,
/// tau = [[0,1],[1,0]] and an element of shape [[a,b],[-b,-a]] or diag(a,b), a != b, mod l.
CriterionReport check_scalar_lifting_criterion(const FiniteMatrixGroup& g);

/// Criterion for all of Z_l^x through a Cartan normalizer (or, for
/// l = 2 mod 3, its index-3 cube subgroup) inside G mod l.
CriterionReport check_cartan_scalar_criterion(const FiniteMatrixGroup& g);

/// True iff det is full, l | |G mod l|, G mod l is irreducible and G is all
/// of GL2 at the working level.  Requires l >= 5.
bool check_surjective_lift(const FiniteMatrixGroup& g);

/// Iterates M_{i+1} = M_i C M_i C^{-1} with C = diag(1,-1); runs max(steps, n+1) steps.
KeyLemmaTrace key_lemma_trace(const Mat2& m, std::size_t steps = 0);

/// Slices L_i for 1 <= i < n; requires C-stability and odd p.
std::vector<LieSlice> lie_slices(const FiniteMatrixGroup& h);

/// Criterion for pro-p groups: (1) |H mod p| = p, (2) H mod p^k not inside
/// the upper or the lower triangular matrices, (3) det H = 1 + pZ/p^n,
/// (4) H normalized by C.  Conclusion: (1 + p^k) Id in H.
CriterionReport check_pro_p_scalar_criterion(const FiniteMatrixGroup& h, int k);

/// Subgroup of the Cartan normalizer generated by cubes of the Cartan and
/// the normalizer involution: the index-3 subgroup for nonsplit l = 2 mod 3.
FiniteMatrixGroup cartan_cube_subgroup(const CartanSpec& spec);

/// Whether C = diag(1,-1) normalizes the group.
bool normalized_by_c(const FiniteMatrixGroup& g);

}  // namespace galimage
