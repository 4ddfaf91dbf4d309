#pragma once

/**
 * @file matalg.hpp
 * @brief The subalgebra of Mat2(Z/l^k) spanned by a matrix group and the
 *        least m with l^m Mat2 inside it.
 */

#include <cstdint>
#include <vector>

#include "galimage/chainlin.hpp"
#include "galimage/matgrp.hpp"

namespace galimage {

struct AlgebraSpan {
  std::uint32_t ell = 0;
  int level = 0;
  /// Howell basis of the span, matrices read row-major as 4-vectors.
  std::vector<Mat2> basis;
  /// log_l of the number of elements of the span.
  int log_size = 0;
  /// Least m with l^m Mat2 inside the span; equals level when only 0 * Mat2 is.
  int min_m = 0;
  /// False when min_m == level.
  bool nontrivial_containment = false;

  bool contains(const Mat2& m) const;
};

/// Span of products of generators, saturated under left and right multiplication.
AlgebraSpan algebra_span(std::uint32_t modulus, const std::vector<Mat2>& gens);
AlgebraSpan algebra_span(const FiniteMatrixGroup& g);

/// For odd l: requires diag(1,-1) in G and elements whose (2,1) and (1,2)
/// entries have valuation <= m_isogeny; true iff min_m <= m_isogeny.
/// Throws HypothesisError("hypotheses not satisfied").
bool verify_reducible_bound(const FiniteMatrixGroup& g, int m_isogeny);

/// For l = 2: requires an element conjugate to [[1,0],[0,-1]] or
/// [[1,1],[0,-1]]; true iff min_m <= m + 1.
/// Throws HypothesisError("hypothesis shape not found").
bool verify_two_adic_bound(const FiniteMatrixGroup& g, int m);

/// Some X with X h X^{-1} equal to the given shape, by exhaustive search.
std::optional<Mat2> conjugation_witness(const Mat2& h, const Mat2& shape);

}  // namespace galimage
