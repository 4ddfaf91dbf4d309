#pragma once

/**
 * @file residue.hpp
 * @brief Exact arithmetic in Z/N and in truncated l-adic rings Z/l^k,
 *        plus 2x2 matrices over those rings.
 *
 * Moduli are limited to N < 2^32 so that every product of two canonical
 * representatives fits in 64 bits.
 */

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace galimage {

// ---------------------------------------------------------------------------
// Elementary number theory on machine integers
// ---------------------------------------------------------------------------

bool is_prime(std::uint64_t n);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
/// Inverse of a modulo m; throws DomainError when gcd(a, m) != 1.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);
/// Prime factorization by trial division, primes ascending.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);
/// Largest e with p^e | n (n > 0).
int valuation_of(std::uint64_t n, std::uint64_t p);
std::uint64_t ipow(std::uint64_t base, unsigned exp);
/// Reduce a signed integer into [0, m).
std::uint32_t reduce_signed(std::int64_t x, std::uint32_t m);

// ---------------------------------------------------------------------------
// Rings
// ---------------------------------------------------------------------------

class ResidueRing {
 public:
  /// Plain Z/N.
  explicit ResidueRing(std::uint64_t modulus);
  /// Z/l^k with the l-adic tag; l must be prime and k >= 1.
  static ResidueRing ell_adic(std::uint32_t ell, int level);
  /// Tags a prime-power modulus as l-adic; throws if N is not a prime power.
  static ResidueRing ell_adic_of(std::uint64_t modulus);

  std::uint32_t modulus() const { return modulus_; }
  bool is_ell_adic() const { return prime_ != 0; }
  std::uint32_t prime() const;
  int level() const;

  friend bool operator==(const ResidueRing&, const ResidueRing&) = default;

 private:
  ResidueRing() = default;
  std::uint32_t modulus_ = 0;
  std::uint32_t prime_ = 0;
  int level_ = 0;
};

class ResidueInt {
 public:
  ResidueInt(const ResidueRing& ring, std::int64_t value);

  const ResidueRing& ring() const { return ring_; }
  std::uint32_t value() const { return value_; }
  bool is_zero() const { return value_ == 0; }
  bool is_unit() const;

  ResidueInt operator+(const ResidueInt& o) const;
  ResidueInt operator-(const ResidueInt& o) const;
  ResidueInt operator-() const;
  ResidueInt operator*(const ResidueInt& o) const;
  ResidueInt pow(std::uint64_t e) const;
  /// Throws DomainError if not a unit.
  ResidueInt inverse() const;

  friend bool operator==(const ResidueInt& a, const ResidueInt& b) {
    return a.ring_ == b.ring_ && a.value_ == b.value_;
  }

 private:
  void check_same(const ResidueInt& o) const;
  ResidueRing ring_;
  std::uint32_t value_;
};

std::ostream& operator<<(std::ostream& os, const ResidueInt& x);

/// l-adic valuation; value 0 maps to the level k.
int valuation(const ResidueInt& x);

/// The unique x = lambda mod l with x^l = x, computed by iterating x -> x^l.
ResidueInt teichmuller_lift(const ResidueInt& lambda);

// ---------------------------------------------------------------------------
// 2x2 matrices
// ---------------------------------------------------------------------------

class Mat2 {
 public:
  Mat2() = default;
  Mat2(std::uint32_t modulus, std::int64_t a, std::int64_t b, std::int64_t c,
       std::int64_t d);

  static Mat2 identity(std::uint32_t modulus);
  static Mat2 scalar(std::uint32_t modulus, std::int64_t lambda);
  static Mat2 diag(std::uint32_t modulus, std::int64_t x, std::int64_t y);
  /// Decodes a key produced by key().
  static Mat2 from_key(std::uint32_t modulus, std::uint64_t key);

  std::uint32_t modulus() const { return n_; }
  std::uint32_t a() const { return e_[0]; }
  std::uint32_t b() const { return e_[1]; }
  std::uint32_t c() const { return e_[2]; }
  std::uint32_t d() const { return e_[3]; }
  std::uint32_t operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  const std::array<std::uint32_t, 4>& entries() const { return e_; }

  Mat2 operator*(const Mat2& o) const;
  Mat2 operator+(const Mat2& o) const;
  Mat2 operator-(const Mat2& o) const;
  Mat2 scaled(std::int64_t s) const;
  Mat2 pow(std::uint64_t e) const;

  std::uint32_t det() const;
  std::uint32_t trace() const;
  bool is_invertible() const;
  /// Throws DomainError("singular matrix") when det is not a unit.
  Mat2 inverse() const;
  bool is_scalar() const { return e_[1] == 0 && e_[2] == 0 && e_[0] == e_[3]; }
  bool is_identity() const { return is_scalar() && e_[0] == 1 % n_; }
  bool is_diagonal() const { return e_[1] == 0 && e_[2] == 0; }
  /// Entries reduced modulo a divisor of the modulus.
  Mat2 reduce(std::uint32_t divisor) const;
  /// Same integer entries read in a larger ring (used for lifts).
  Mat2 lift_to(std::uint32_t modulus) const;

  /// Packed key, order-preserving for the lexicographic order on entries.
  /// Requires modulus < 2^16.
  std::uint64_t key() const;

  /// (g v) for a column vector v.
  std::array<std::uint32_t, 2> apply(std::uint32_t x, std::uint32_t y) const;

  friend bool operator==(const Mat2&, const Mat2&) = default;
  friend auto operator<=>(const Mat2& l, const Mat2& r) {
    return std::tie(l.n_, l.e_) <=> std::tie(r.n_, r.e_);
  }

  std::string to_string() const;

 private:
  std::uint32_t n_ = 1;
  std::array<std::uint32_t, 4> e_{0, 0, 0, 0};
};

std::ostream& operator<<(std::ostream& os, const Mat2& m);

struct Mat2Hash {
  std::size_t operator()(const Mat2& m) const noexcept;
};

/// Minimum entry valuation in an l-adic ring.
int valuation(const Mat2& m, const ResidueRing& ring);

/// Stabilized value of g^(l^n); requires g scalar mod l with unit eigenvalue.
Mat2 scalar_power_stabilize(const Mat2& g, const ResidueRing& ring);

}  // namespace galimage
