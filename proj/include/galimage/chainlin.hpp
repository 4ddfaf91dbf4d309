#pragma once

/**
 * @file chainlin.hpp
 * @brief Linear algebra over the chain ring Z/l^k: Howell forms of row
 *        spans and Smith normal form with a tracked column transform.
 */

#include <cstdint>
#include <vector>

namespace galimage {

class ChainRing {
 public:
  ChainRing(std::uint32_t prime, int level);

  std::uint32_t prime() const { return p_; }
  int level() const { return k_; }
  std::uint64_t modulus() const { return n_; }
  /// p^e as an element of the ring (e <= k; p^k maps to 0).
  std::uint64_t power(int e) const { return pow_[static_cast<std::size_t>(e)] % n_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % n_; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + n_ - b) % n_; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % n_; }
  std::uint64_t neg(std::uint64_t a) const { return (n_ - a) % n_; }
  /// Valuation, with v(0) = k.
  int val(std::uint64_t a) const;
  /// For v(a) >= e, some x with p^e x = a.
  std::uint64_t divide_power(std::uint64_t a, int e) const;
  /// For a = u p^e, the inverse of u in the ring.
  std::uint64_t unit_part_inverse(std::uint64_t a) const;

 private:
  std::uint32_t p_;
  int k_;
  std::uint64_t n_;
  std::vector<std::uint64_t> pow_;
};

using ChainRow = std::vector<std::uint64_t>;
using ChainMatrix = std::vector<ChainRow>;

/// Row span of a matrix over Z/l^k kept in canonical Howell form.
class HowellSpan {
 public:
  HowellSpan(const ChainRing& ring, std::size_t ncols);

  const ChainRing& ring() const { return ring_; }
  std::size_t ncols() const { return ncols_; }
  /// Rows of the Howell form, ordered by pivot column.
  const ChainMatrix& rows() const { return rows_; }
  const std::vector<std::size_t>& pivot_columns() const { return pivots_; }

  /// Adds a row to the span; returns true if the span grew.
  bool insert(const ChainRow& row);
  bool contains(const ChainRow& row) const;
  /// log_l of the number of elements of the span.
  int log_size() const;

 private:
  ChainRow reduce(ChainRow row) const;
  void rebuild(ChainMatrix generators);

  ChainRing ring_;
  std::size_t ncols_;
  ChainMatrix rows_;
  std::vector<std::size_t> pivots_;
};

/// Smith form data: diag_val[i] is the valuation of the i-th diagonal entry
/// (k for zero), for i < min(rows, cols).  Q and Q_inv satisfy
/// P A Q = D for some invertible P.
struct SmithForm {
  std::vector<int> diag_val;
  ChainMatrix Q;
  ChainMatrix Q_inv;
};

/// Smith normal form; the column transform is tracked when track is true.
SmithForm smith_form(ChainMatrix A, std::size_t ncols, const ChainRing& ring, bool track);

/// Exponents f_i of the cokernel of A: R^ncols -> R^nrows, as the list of
/// nonzero f with coker = sum of Z/l^f.  Ascending.
std::vector<int> cokernel_exponents(const ChainMatrix& A, std::size_t nrows, std::size_t ncols,
                                    const ChainRing& ring);

}  // namespace galimage
