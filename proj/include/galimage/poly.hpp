#pragma once

/**
 * @file poly.hpp
 * @brief Dense univariate polynomials over Z, Q and F_p, with factorization
 *        over F_p (Cantor-Zassenhaus) and over Z (Hensel lifting and
 *        recombination).
 */

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace galimage::poly {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed5eedULL;
inline constexpr int kDefaultDegreeCap = 30;

/// Coefficient i multiplies x^i; no trailing zeros, the zero polynomial is empty.
using ZPoly = std::vector<mpz_class>;
using QPoly = std::vector<mpq_class>;

int degree(const ZPoly& f);
void trim(ZPoly& f);
ZPoly from_ints(std::initializer_list<long> coeffs);
ZPoly add(const ZPoly& f, const ZPoly& g);
ZPoly sub(const ZPoly& f, const ZPoly& g);
ZPoly mul(const ZPoly& f, const ZPoly& g);
ZPoly scale(const ZPoly& f, const mpz_class& c);
ZPoly derivative(const ZPoly& f);
mpz_class content(const ZPoly& f);
/// f / content(f), with positive leading coefficient.
ZPoly primitive_part(const ZPoly& f);
mpz_class eval(const ZPoly& f, const mpz_class& x);
/// q with f = g q over Z, when it exists.
bool divides(const ZPoly& g, const ZPoly& f, ZPoly* quotient = nullptr);
/// Primitive gcd with positive leading coefficient.
ZPoly gcd(const ZPoly& f, const ZPoly& g);
/// Yun decomposition of a primitive polynomial: pairs (squarefree factor, multiplicity).
std::vector<std::pair<ZPoly, int>> squarefree_decomposition(const ZPoly& f);
std::string to_string(const ZPoly& f);

/// Coefficient bound for any factor of f times its leading coefficient.
mpz_class mignotte_bound(const ZPoly& f);

int degree(const QPoly& f);
void trim(QPoly& f);
QPoly mul(const QPoly& f, const QPoly& g);
QPoly sub(const QPoly& f, const QPoly& g);
/// Clears denominators and contents; result is primitive with positive lead.
ZPoly to_primitive_z(const QPoly& f);

/// Polynomial over F_p, coefficients in [0, p).  p < 2^32.
struct FpPoly {
  std::uint64_t p = 0;
  std::vector<std::uint64_t> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  std::uint64_t lead() const { return c.back(); }
  friend bool operator==(const FpPoly&, const FpPoly&) = default;
};

FpPoly reduce(const ZPoly& f, std::uint64_t p);
FpPoly fp_trim(FpPoly f);
FpPoly fp_add(const FpPoly& f, const FpPoly& g);
FpPoly fp_sub(const FpPoly& f, const FpPoly& g);
FpPoly fp_mul(const FpPoly& f, const FpPoly& g);
/// (quotient, remainder).
std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& f, const FpPoly& g);
FpPoly fp_monic(const FpPoly& f);
FpPoly fp_gcd(const FpPoly& f, const FpPoly& g);
FpPoly fp_derivative(const FpPoly& f);
/// base^e mod m, e given as a big integer.
FpPoly fp_powmod(const FpPoly& base, const mpz_class& e, const FpPoly& m);
std::string to_string(const FpPoly& f);

/// Complete factorization into monic irreducibles with multiplicities.
/// Requires p prime and p not dividing the leading coefficient.
std::vector<std::pair<FpPoly, int>> factor_mod_p(const FpPoly& f, std::uint64_t seed = kDefaultSeed);
std::vector<std::pair<FpPoly, int>> factor_mod_p(const ZPoly& f, std::uint64_t p,
                                                 std::uint64_t seed = kDefaultSeed);
/// Distinct-degree test only; works for every prime p.
bool is_irreducible_mod_p(const FpPoly& f);

struct ZFactor {
  ZPoly poly;
  int multiplicity = 1;
  /// How irreducibility was established: "linear", "mod p=<p>",
  /// "degree sets" or "recombination".
  std::string certificate;
};

struct ZFactorization {
  /// Signed content of the input.
  mpz_class unit_content = 1;
  std::vector<ZFactor> factors;
  /// Primes used for the factorization and degree-set pruning.
  std::vector<std::uint64_t> primes;

  std::vector<int> degrees() const;
  ZPoly product() const;
};

/// Irreducible factorization over Z.  Throws CapExceeded("degree beyond
/// configured factorization range") when deg f > degree_cap.
ZFactorization factor_over_z(const ZPoly& f, int degree_cap = kDefaultDegreeCap,
                             std::uint64_t seed = kDefaultSeed);

}  // namespace galimage::poly
