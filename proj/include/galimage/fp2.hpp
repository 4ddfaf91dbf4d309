#pragma once

/**
 * @file fp2.hpp
 * @brief The quadratic extension F_{p^2} = F_p[r] / (r^2 - alpha r - beta).
 *
 * For odd p, alpha = 0 and beta is the least quadratic non-residue; for
 * p = 2 the polynomial is r^2 + r + 1.
 */

#include <cstdint>

#include "galimage/residue.hpp"

namespace galimage {

class Fp2 {
 public:
  struct Elem {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    friend bool operator==(const Elem&, const Elem&) = default;
  };

  explicit Fp2(std::uint32_t p) : p_(p) {
    if (p == 2) {
      alpha_ = 1;
      beta_ = 1;
      return;
    }
    for (std::uint32_t c = 2; c < p; ++c) {
      if (pow_mod(c, (p - 1) / 2, p) == p - 1) {
        beta_ = c;
        break;
      }
    }
  }

  std::uint32_t prime() const { return p_; }
  std::uint32_t nonresidue() const { return beta_; }

  Elem from(std::uint32_t a) const { return {a % p_, 0}; }
  Elem add(Elem a, Elem b) const { return {(a.x + b.x) % p_, (a.y + b.y) % p_}; }
  Elem sub(Elem a, Elem b) const { return {(a.x + p_ - b.x) % p_, (a.y + p_ - b.y) % p_}; }
  Elem mul(Elem a, Elem b) const {
    const std::uint64_t p = p_;
    std::uint64_t yy = static_cast<std::uint64_t>(a.y) * b.y % p;
    std::uint64_t x = (static_cast<std::uint64_t>(a.x) * b.x + beta_ * yy) % p;
    std::uint64_t y = (static_cast<std::uint64_t>(a.x) * b.y + static_cast<std::uint64_t>(a.y) * b.x +
                       alpha_ * yy) % p;
    return {static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)};
  }
  Elem pow(Elem a, std::uint64_t e) const {
    Elem r{1 % p_, 0};
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  Elem frobenius(Elem a) const { return pow(a, p_); }
  /// Inverse of a nonzero element, via a^(p^2 - 2).
  Elem inv(Elem a) const {
    const std::uint64_t q = static_cast<std::uint64_t>(p_) * p_;
    return pow(a, q - 2);
  }

 private:
  std::uint32_t p_;
  std::uint64_t alpha_ = 0;
  std::uint64_t beta_ = 0;
};

}  // namespace galimage
