#pragma once

/**
 * @file ellkummer.hpp
 * @brief Elliptic curves over Q in long Weierstrass form, division
 *        polynomials, and detection of l | N^2 / [K_{M,N} : K_M] through the
 *        factorization of phi_l(x) - x(P) psi_l(x)^2.
 */

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "galimage/poly.hpp"

namespace galimage {

struct RationalPoint {
  mpq_class x;
  mpq_class y;
  bool infinity = false;

  static RationalPoint at_infinity() { return RationalPoint{0, 0, true}; }
  friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
};

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
class EllipticCurve {
 public:
  /// Throws DomainError("singular curve") when the discriminant vanishes.
  EllipticCurve(mpq_class a1, mpq_class a2, mpq_class a3, mpq_class a4, mpq_class a6);

  const mpq_class& a1() const { return a1_; }
  const mpq_class& a2() const { return a2_; }
  const mpq_class& a3() const { return a3_; }
  const mpq_class& a4() const { return a4_; }
  const mpq_class& a6() const { return a6_; }
  const mpq_class& b2() const { return b2_; }
  const mpq_class& b4() const { return b4_; }
  const mpq_class& b6() const { return b6_; }
  const mpq_class& b8() const { return b8_; }
  const mpq_class& discriminant() const { return disc_; }
  bool is_integral() const;
  std::string to_string() const;

  bool contains(const RationalPoint& p) const;
  RationalPoint negate(const RationalPoint& p) const;
  RationalPoint add(const RationalPoint& p, const RationalPoint& q) const;
  /// [n]P for any integer n.  Throws DomainError("point not on curve").
  RationalPoint multiply(const RationalPoint& p, long n) const;
  /// Order of a torsion point (at most 12 over Q), or 0 for infinite order.
  int torsion_order(const RationalPoint& p) const;

 private:
  mpq_class a1_, a2_, a3_, a4_, a6_;
  mpq_class b2_, b4_, b6_, b8_, disc_;
};

/// Parses "a1,a2,a3,a4,a6" with entries as integers or p/q.
EllipticCurve parse_curve(const std::string& text);
/// Parses "x,y".
RationalPoint parse_point(const std::string& text);

/// Points over F_p on the reduction of an integral-at-p curve.  Infinity is
/// encoded by inf = true.
struct FpPoint {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  bool inf = false;
  friend bool operator==(const FpPoint&, const FpPoint&) = default;
};

class ReducedCurve {
 public:
  /// Throws DomainError when p divides a denominator or the discriminant.
  ReducedCurve(const EllipticCurve& e, std::uint64_t p);

  std::uint64_t p() const { return p_; }
  std::vector<FpPoint> points() const;
  bool contains(const FpPoint& q) const;
  FpPoint add(const FpPoint& q, const FpPoint& r) const;
  FpPoint multiply(const FpPoint& q, std::uint64_t n) const;

 private:
  std::uint64_t p_;
  std::uint64_t a1_, a2_, a3_, a4_, a6_;
};

/// True when every a_i is integral at p and p does not divide the discriminant.
bool has_good_reduction(const EllipticCurve& e, std::uint64_t p);

inline constexpr int kDefaultDivisionCap = 9;

/// With F = psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6, the polynomials f_m equal
/// psi_m for odd m and psi_m / psi_2 for even m; all lie in Q[x].
struct DivisionPolynomialSet {
  int n_max = 0;
  std::vector<poly::QPoly> f;
  /// psi_m^2 as a polynomial in x.
  std::vector<poly::QPoly> psi_sq;
  /// phi_m = x psi_m^2 - psi_{m+1} psi_{m-1}.
  std::vector<poly::QPoly> phi;
  poly::QPoly two_torsion;
};

/// Throws CapExceeded("division polynomial index beyond cap") past cap.
DivisionPolynomialSet division_polynomials(const EllipticCurve& e, int n_max, int cap = kDefaultDivisionCap);

/// Evaluates a rational polynomial at x in F_p (denominators must be units).
std::uint64_t eval_mod_p(const poly::QPoly& f, std::uint64_t x, std::uint64_t p);

struct KummerReport {
  std::uint32_t ell = 0;
  /// phi_l - x(P) psi_l^2 with denominators cleared, primitive.
  poly::ZPoly g;
  std::vector<int> factor_degrees;
  poly::ZFactorization factorization;
  /// Some irreducible factor has degree < l^2 / 2.
  bool verdict = false;
  /// A factor of least degree.
  poly::ZPoly witness;
};

/// For odd prime l and a rational point P of infinite order.  Non-divisibility
/// of P in E(Q) / E(Q)_tors is the caller's assertion.  Throws DomainError on
/// l = 2, torsion or off-curve P, and CapExceeded beyond the degree cap.
KummerReport kummer_divisibility(const EllipticCurve& e, const RationalPoint& p, std::uint32_t ell,
                                 int degree_cap = poly::kDefaultDegreeCap,
                                 std::uint64_t seed = poly::kDefaultSeed);

struct KummerFixture {
  std::string label;
  EllipticCurve curve;
  RationalPoint point;
  std::uint32_t ell;
  bool cm;
};

/// Reads the fixtures file: one "label a1 a2 a3 a4 a6 x y ell cm" row per line.
std::vector<KummerFixture> load_kummer_fixtures(const std::string& path);
/// The fixtures bundled under the data directory.
std::vector<KummerFixture> default_kummer_fixtures();

}  // namespace galimage
