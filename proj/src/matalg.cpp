#include "galimage/matalg.hpp"

#include <algorithm>

#include "galimage/errors.hpp"

namespace galimage {

namespace {

ChainRow as_row(const Mat2& m) { return {m.a(), m.b(), m.c(), m.d()}; }

Mat2 as_mat(std::uint32_t n, const ChainRow& r) {
  return Mat2(n, static_cast<std::int64_t>(r[0]), static_cast<std::int64_t>(r[1]),
              static_cast<std::int64_t>(r[2]), static_cast<std::int64_t>(r[3]));
}

}  // namespace

bool AlgebraSpan::contains(const Mat2& m) const {
  ChainRing R(ell, level);
  HowellSpan span(R, 4);
  for (const Mat2& b : basis) span.insert(as_row(b));
  return span.contains(as_row(m));
}

AlgebraSpan algebra_span(std::uint32_t modulus, const std::vector<Mat2>& gens) {
  ResidueRing ring = ResidueRing::ell_adic_of(modulus);
  const ChainRing R(ring.prime(), ring.level());
  HowellSpan span(R, 4);
  span.insert(as_row(Mat2::identity(modulus)));
  for (const Mat2& s : gens) {
    if (s.modulus() != modulus) throw DomainError("matrices live in different rings");
    span.insert(as_row(s));
  }
  bool grew = true;
  while (grew) {
    grew = false;
    const ChainMatrix snapshot = span.rows();
    for (const ChainRow& r : snapshot) {
      const Mat2 x = as_mat(modulus, r);
      for (const Mat2& s : gens) {
        grew = span.insert(as_row(s * x)) || grew;
        grew = span.insert(as_row(x * s)) || grew;
      }
    }
  }
  AlgebraSpan out;
  out.ell = ring.prime();
  out.level = ring.level();
  for (const ChainRow& r : span.rows()) out.basis.push_back(as_mat(modulus, r));
  out.log_size = span.log_size();
  out.min_m = out.level;
  for (int m = 0; m < out.level; ++m) {
    const auto t = static_cast<std::int64_t>(R.power(m));
    bool all = true;
    for (int e = 0; e < 4 && all; ++e) {
      ChainRow row(4, 0);
      row[static_cast<std::size_t>(e)] = static_cast<std::uint64_t>(t);
      all = span.contains(row);
    }
    if (all) {
      out.min_m = m;
      break;
    }
  }
  out.nontrivial_containment = out.min_m < out.level;
  return out;
}

AlgebraSpan algebra_span(const FiniteMatrixGroup& g) { return algebra_span(g.modulus(), g.generators()); }

bool verify_reducible_bound(const FiniteMatrixGroup& g, int m_isogeny) {
  ResidueRing ring = ResidueRing::ell_adic_of(g.modulus());
  if (ring.prime() == 2) throw DomainError("reducible bound requires odd l");
  const std::uint32_t p = ring.prime();
  bool lower = false, upper = false;
  for (const Mat2& x : g.elements()) {
    // A zero entry has infinite valuation and is never a witness.
    lower = lower || (x.c() != 0 && valuation_of(x.c(), p) <= m_isogeny);
    upper = upper || (x.b() != 0 && valuation_of(x.b(), p) <= m_isogeny);
  }
  if (!g.contains(Mat2::diag(g.modulus(), 1, -1)) || !lower || !upper) {
    throw HypothesisError("hypotheses not satisfied");
  }
  return algebra_span(g).min_m <= m_isogeny;
}

std::optional<Mat2> conjugation_witness(const Mat2& h, const Mat2& shape) {
  const std::uint32_t n = h.modulus();
  if (static_cast<std::uint64_t>(n) * n * n * n > (std::uint64_t{1} << 24)) {
    throw CapExceeded("conjugation witness search too large");
  }
  if (h.trace() != shape.trace() || h.det() != shape.det()) return std::nullopt;
  // X h = shape X is linear in X; scan all X and keep an invertible solution.
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t y = 0; y < n; ++y) {
      for (std::uint32_t z = 0; z < n; ++z) {
        for (std::uint32_t w = 0; w < n; ++w) {
          Mat2 X(n, x, y, z, w);
          if (!X.is_invertible()) continue;
          if (X * h == shape * X) return X;
        }
      }
    }
  }
  return std::nullopt;
}

bool verify_two_adic_bound(const FiniteMatrixGroup& g, int m) {
  ResidueRing ring = ResidueRing::ell_adic_of(g.modulus());
  if (ring.prime() != 2) throw DomainError("two-adic bound requires l = 2");
  const std::uint32_t n = g.modulus();
  const Mat2 shapes[2] = {Mat2(n, 1, 0, 0, -1), Mat2(n, 1, 1, 0, -1)};
  bool found = false;
  for (const Mat2& h : g.elements()) {
    for (const Mat2& t : shapes) {
      if (conjugation_witness(h, t)) {
        found = true;
        break;
      }
    }
    if (found) break;
  }
  if (!found) throw HypothesisError("hypothesis shape not found");
  return algebra_span(g).min_m <= m + 1;
}

}  // namespace galimage
