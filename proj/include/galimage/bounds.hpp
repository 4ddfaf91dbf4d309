#pragma once

/**
 * @file bounds.hpp
 * @brief Named constants for cohomology exponents and Kummer degrees: the
 *        per-prime tables, a_l from exponents of PGL2(F_p), the exponent e,
 *        the CM exponent e_l and the Kummer bounds B.
 */

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "galimage/matgrp.hpp"

namespace galimage {

/// Finitely supported map from primes to exponents; absent primes are 0.
using PrimeExponents = std::map<std::uint32_t, int>;

/// prod p^e over the map.
mpz_class expand(const PrimeExponents& f);
/// Factorization of a positive integer into a PrimeExponents map.
PrimeExponents factor_mpz(const mpz_class& n);

// Imported tables -----------------------------------------------------------
// These rest on isogeny theorems and mod-l image classifications that are not
// recomputed here.

/// Primes p <= 17 together with 37: the possible degrees of rational cyclic
/// isogenies of prime degree for curves without CM.
const std::vector<std::uint32_t>& t0_primes();
/// s_l: scalars congruent to 1 mod l^(s_l) lie in the l-adic image.
/// 4 at 2; 3 at 3; 1 at 5, 7, 11, 13, 17, 37; 0 elsewhere.
PrimeExponents scalar_level_table();
/// n_l: exponent bound for H^1 of the l-adic image (non-CM).
/// 3 at 2 and 3; 1 at 5, 7, 11; 0 elsewhere.
PrimeExponents cohomology_exponent_table();
/// n'_l for CM curves: 3 at 2; 1 at 3, 7, 11, 19, 43, 67, 163.
PrimeExponents cm_cohomology_exponent_table();
/// m_l with l^(m_l) Mat2 inside Z_l[G], non-CM: 4,2,2,1,1,1,1,1 at T0.
PrimeExponents algebra_exponent_table_non_cm();
/// m_l for CM: 3 at 2 and 3; 1 at 7, 11, 19, 43, 67, 163.
PrimeExponents algebra_exponent_table_cm();

/// The literal e = 2^12 3^8 5^3 7^3 11^2 quoted for non-CM curves.
PrimeExponents quoted_exponent_e();
/// The CM exponent 2^2 * 3.
PrimeExponents cm_exponent_e();

// Computed constants --------------------------------------------------------

/// lcm of element orders of PGL2(F_p), by brute force over GL2(F_p) modulo
/// scalars.  threads > 1 splits the scan; the result does not depend on it.
std::uint64_t exp_pgl2(std::uint32_t p, unsigned threads = 1);

/// v_l(a_l) with a_l = lcm { exp PGL2(F_p) : p in T0, p != l }, for every
/// prime l dividing some exponent.  Primes absent from the result have 0.
PrimeExponents a_valuations(unsigned threads = 1);

struct ExponentConstant {
  PrimeExponents n;
  PrimeExponents m;
  PrimeExponents a;
  mpz_class value;
  PrimeExponents factorization;
  PrimeExponents quoted;
  bool matches_quoted = false;
};

/// e = prod l^(n_l + m_l + v_l(a_l)) with m_l = n_l + v_l(4).
ExponentConstant exponent_constant_e(const PrimeExponents& n, const PrimeExponents& a_vals);
/// The default profile: n from cohomology_exponent_table, a from a_valuations.
ExponentConstant exponent_constant_e(unsigned threads = 1);

/// min over units a of Z_l of v_l(a^(hd) - 1).  The level starts at
/// probe_level and is raised until the minimum is below the level and agrees
/// with the next level.  Throws CapExceeded past l^k > 2^24.
int cm_e_ell(unsigned h, unsigned d, std::uint32_t ell, int probe_level = 1);

/// prod l^(m_l + 2 v_l(e)).
PrimeExponents kummer_bound_factorization(const PrimeExponents& e, const PrimeExponents& m);
mpz_class kummer_bound(const PrimeExponents& e, const PrimeExponents& m);

/// l^(n + 2d).
mpz_class submodule_index_bound(int d, int n, std::uint32_t ell);

/// Index in (Z/l^k)^2 of the smallest submodule containing v and stable
/// under the generators.
mpz_class generated_submodule_index(std::uint32_t modulus, const std::vector<Mat2>& gens,
                                    std::array<std::uint32_t, 2> v);
mpz_class generated_submodule_index(const FiniteMatrixGroup& g, std::array<std::uint32_t, 2> v);

struct BoundProfile {
  std::vector<std::uint32_t> t0;
  PrimeExponents s;
  PrimeExponents n;
  PrimeExponents n_cm;
  PrimeExponents m_non_cm;
  PrimeExponents m_cm;
  PrimeExponents a;
  ExponentConstant e;
  PrimeExponents b_non_cm;
  PrimeExponents b_cm;
};

/// Every table and constant.  B_nonCM uses the quoted e.
BoundProfile bound_profile(unsigned threads = 1);

}  // namespace galimage
