#include "galimage/chainlin.hpp"

#include <algorithm>
#include <utility>

#include "galimage/errors.hpp"
#include "galimage/residue.hpp"

namespace galimage {

ChainRing::ChainRing(std::uint32_t prime, int level) : p_(prime), k_(level) {
  if (!is_prime(prime) || level < 1) throw DomainError("chain ring needs prime and level >= 1");
  pow_.resize(static_cast<std::size_t>(level) + 1);
  pow_[0] = 1;
  for (std::size_t i = 1; i < pow_.size(); ++i) pow_[i] = pow_[i - 1] * prime;
  n_ = pow_.back();
  if (n_ > 0xFFFFFFFFULL) throw DomainError("chain ring modulus must be below 2^32");
}

int ChainRing::val(std::uint64_t a) const {
  a %= n_;
  if (a == 0) return k_;
  int e = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++e;
  }
  return e;
}

std::uint64_t ChainRing::divide_power(std::uint64_t a, int e) const {
  return (a % n_) / pow_[static_cast<std::size_t>(e)];
}

std::uint64_t ChainRing::unit_part_inverse(std::uint64_t a) const {
  int e = val(a);
  std::uint64_t u = divide_power(a, e);
  return inv_mod(u % n_, n_);
}

// ---------------------------------------------------------------------------

HowellSpan::HowellSpan(const ChainRing& ring, std::size_t ncols) : ring_(ring), ncols_(ncols) {}

ChainRow HowellSpan::reduce(ChainRow row) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::size_t c = pivots_[i];
    if (row[c] == 0) continue;
    int a = ring_.val(rows_[i][c]);
    if (ring_.val(row[c]) < a) return row;
    std::uint64_t f = ring_.divide_power(row[c], a);
    const ChainRow& r = rows_[i];
    for (std::size_t j = c; j < ncols_; ++j) {
      if (r[j] != 0) row[j] = ring_.sub(row[j], ring_.mul(f, r[j]));
    }
  }
  return row;
}

bool HowellSpan::contains(const ChainRow& row) const {
  ChainRow r = reduce(row);
  return std::all_of(r.begin(), r.end(), [](std::uint64_t x) { return x == 0; });
}

bool HowellSpan::insert(const ChainRow& row) {
  if (row.size() != ncols_) throw DomainError("row length mismatch");
  ChainRow r = reduce(row);
  if (std::all_of(r.begin(), r.end(), [](std::uint64_t x) { return x == 0; })) return false;
  ChainMatrix gens = rows_;
  gens.push_back(std::move(r));
  rebuild(std::move(gens));
  return true;
}

int HowellSpan::log_size() const {
  int s = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) s += ring_.level() - ring_.val(rows_[i][pivots_[i]]);
  return s;
}

void HowellSpan::rebuild(ChainMatrix work) {
  const int k = ring_.level();
  ChainMatrix out;
  std::vector<std::size_t> piv;
  for (std::size_t c = 0; c < ncols_ && !work.empty(); ++c) {
    std::size_t best = work.size();
    int best_val = k;
    for (std::size_t i = 0; i < work.size(); ++i) {
      int v = ring_.val(work[i][c]);
      if (v < best_val) {
        best_val = v;
        best = i;
      }
    }
    if (best == work.size()) continue;
    ChainRow pr = std::move(work[best]);
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(best));
    std::uint64_t uinv = ring_.unit_part_inverse(pr[c]);
    for (auto& x : pr) x = ring_.mul(x, uinv);
    for (auto& w : work) {
      if (w[c] == 0) continue;
      std::uint64_t f = ring_.divide_power(w[c], best_val);
      for (std::size_t j = c; j < ncols_; ++j) w[j] = ring_.sub(w[j], ring_.mul(f, pr[j]));
    }
    if (best_val > 0) {
      ChainRow extra(ncols_);
      std::uint64_t s = ring_.power(k - best_val);
      bool nz = false;
      for (std::size_t j = 0; j < ncols_; ++j) {
        extra[j] = ring_.mul(s, pr[j]);
        nz = nz || extra[j] != 0;
      }
      if (nz) work.push_back(std::move(extra));
    }
    work.erase(std::remove_if(work.begin(), work.end(),
                              [](const ChainRow& w) {
                                return std::all_of(w.begin(), w.end(),
                                                   [](std::uint64_t x) { return x == 0; });
                              }),
               work.end());
    out.push_back(std::move(pr));
    piv.push_back(c);
  }
  // Reduce entries above each pivot into [0, p^a).
  for (std::size_t j = 0; j < out.size(); ++j) {
    std::size_t c = piv[j];
    int a = ring_.val(out[j][c]);
    std::uint64_t pa = ring_.power(a);
    for (std::size_t i = 0; i < j; ++i) {
      std::uint64_t f = out[i][c] / pa;
      if (f == 0) continue;
      for (std::size_t t = c; t < ncols_; ++t) out[i][t] = ring_.sub(out[i][t], ring_.mul(f, out[j][t]));
    }
  }
  rows_ = std::move(out);
  pivots_ = std::move(piv);
}

// ---------------------------------------------------------------------------

SmithForm smith_form(ChainMatrix A, std::size_t ncols, const ChainRing& R, bool track) {
  const std::size_t m = A.size();
  const int k = R.level();
  SmithForm out;
  if (track) {
    out.Q.assign(ncols, ChainRow(ncols, 0));
    out.Q_inv.assign(ncols, ChainRow(ncols, 0));
    for (std::size_t i = 0; i < ncols; ++i) out.Q[i][i] = out.Q_inv[i][i] = 1;
  }
  const std::size_t dim = std::min(m, ncols);
  for (std::size_t t = 0; t < dim; ++t) {
    int best = k;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = t; i < m && best > 0; ++i) {
      for (std::size_t j = t; j < ncols; ++j) {
        int v = R.val(A[i][j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    }
    if (best == k) {
      for (std::size_t r = t; r < dim; ++r) out.diag_val.push_back(k);
      break;
    }
    std::swap(A[t], A[bi]);
    if (bj != t) {
      for (auto& row : A) std::swap(row[t], row[bj]);
      if (track) {
        for (auto& row : out.Q) std::swap(row[t], row[bj]);
        std::swap(out.Q_inv[t], out.Q_inv[bj]);
      }
    }
    std::uint64_t uinv = R.unit_part_inverse(A[t][t]);
    for (auto& x : A[t]) x = R.mul(x, uinv);
    for (std::size_t i = t + 1; i < m; ++i) {
      if (A[i][t] == 0) continue;
      std::uint64_t f = R.divide_power(A[i][t], best);
      for (std::size_t j = t; j < ncols; ++j) A[i][j] = R.sub(A[i][j], R.mul(f, A[t][j]));
    }
    for (std::size_t j = t + 1; j < ncols; ++j) {
      if (A[t][j] == 0) continue;
      std::uint64_t f = R.divide_power(A[t][j], best);
      A[t][j] = 0;
      if (track) {
        for (auto& row : out.Q) row[j] = R.sub(row[j], R.mul(f, row[t]));
        for (std::size_t c = 0; c < ncols; ++c) {
          out.Q_inv[t][c] = R.add(out.Q_inv[t][c], R.mul(f, out.Q_inv[j][c]));
        }
      }
    }
    out.diag_val.push_back(best);
  }
  return out;
}

std::vector<int> cokernel_exponents(const ChainMatrix& A, std::size_t nrows, std::size_t ncols,
                                    const ChainRing& ring) {
  SmithForm s = smith_form(A, ncols, ring, false);
  std::vector<int> out;
  for (std::size_t i = 0; i < nrows; ++i) {
    int d = i < s.diag_val.size() ? s.diag_val[i] : ring.level();
    if (d > 0) out.push_back(d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace galimage
