#pragma once

/**
 * @file cohom.hpp
 * @brief H^1(G, M) for finite matrix groups acting on M = (Z/N)^2 and on
 *        its torsion submodules, via crossed homomorphisms on generators.
 */

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <vector>

#include "galimage/matgrp.hpp"

namespace galimage {

inline constexpr std::size_t kDefaultH1Cap = 5000;

/// The module (Z/N)^2 with G acting through reduction modulo N.  The
/// l^m-torsion of (Z/l^k)^2 is isomorphic to (Z/l^m)^2 with the action
/// reduced mod l^m, so torsion submodules are modelled by a smaller N.
struct GModule {
  std::uint32_t modulus = 0;

  static GModule natural(std::uint32_t n) { return GModule{n}; }
  /// M[l^m] inside (Z/l^k)^2; requires l^m | l^k.
  static GModule torsion(std::uint32_t ell, int k, int m);
};

struct CohomologyResult {
  /// d_1 | d_2 | ... with H^1 = sum of Z/d_i (trivial factors omitted).
  std::vector<std::uint64_t> invariant_factors;
  std::uint64_t exponent = 1;
  mpz_class cocycle_count = 1;
  mpz_class coboundary_count = 1;
  mpz_class order() const;
};

/// A finite group presented by its right-multiplication Cayley graph plus
/// the matrices by which each element acts on (Z/N)^2.
struct GroupAction {
  std::size_t identity = 0;
  /// right_mult[s][g] = index of g * s.
  std::vector<std::vector<std::uint32_t>> right_mult;
  /// action[g] acts on (Z/N)^2; all share one modulus.
  std::vector<Mat2> action;
  std::size_t order() const { return action.size(); }
};

/// Action of G on (Z/N)^2, N dividing the modulus of G.
GroupAction make_action(const FiniteMatrixGroup& g, std::uint32_t n);
/// Action of G/K on (Z/N)^2, where K is normal in G and acts trivially.
GroupAction make_quotient_action(const FiniteMatrixGroup& g, const FiniteMatrixGroup& k,
                                 std::uint32_t n);

CohomologyResult h1(const FiniteMatrixGroup& g, const GModule& m, std::size_t cap = kDefaultH1Cap);
CohomologyResult h1_action(const GroupAction& act, std::size_t cap = kDefaultH1Cap);
/// H^1 of the quotient G / K.
CohomologyResult h1_quotient(const FiniteMatrixGroup& g, const FiniteMatrixGroup& k,
                             const GModule& m, std::size_t cap = kDefaultH1Cap);

/// The normal subgroup generated by g^(l^m) for g = Id mod l^m.
FiniteMatrixGroup power_kernel(const FiniteMatrixGroup& g, std::uint32_t ell, int m);

/// For each prime l | N, min v_l(lambda - 1) over scalars lambda Id in G,
/// measured in Z/l^k with l^k || N.
std::map<std::uint32_t, int> sah_multiplier(const FiniteMatrixGroup& g, const GModule& m);

/// |H^0(G, (Z/N^2)^2) / N H^0|, by enumeration of fixed vectors.
std::uint64_t torsion_injection_order(const FiniteMatrixGroup& g, std::uint32_t n);

/// prod l^(n_l + m_l + v_l); rejects negative entries.
mpz_class combined_exponent_bound(const std::map<std::uint32_t, int>& n_map,
                                  const std::map<std::uint32_t, int>& m_map,
                                  const std::map<std::uint32_t, int>& a_map);

}  // namespace galimage
