#include "galimage/bounds.hpp"

#include <algorithm>
#include <thread>

#include "galimage/chainlin.hpp"
#include "galimage/cohom.hpp"
#include "galimage/errors.hpp"

namespace galimage {

mpz_class expand(const PrimeExponents& f) {
  mpz_class r = 1;
  for (auto [p, e] : f) {
    if (e < 0) throw DomainError("exponents must be non-negative");
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), p, static_cast<unsigned long>(e));
    r *= t;
  }
  return r;
}

PrimeExponents factor_mpz(const mpz_class& n) {
  if (n <= 0) throw DomainError("factorization needs a positive integer");
  PrimeExponents out;
  mpz_class r = n;
  for (std::uint32_t p = 2; r > 1; ++p) {
    if (mpz_class(p) * p > r) {
      if (!r.fits_ulong_p()) throw CapExceeded("cofactor too large to certify");
      out[static_cast<std::uint32_t>(r.get_ui())] += 1;
      break;
    }
    while (mpz_divisible_ui_p(r.get_mpz_t(), p)) {
      r /= p;
      out[p] += 1;
    }
  }
  return out;
}

const std::vector<std::uint32_t>& t0_primes() {
  static const std::vector<std::uint32_t> t0{2, 3, 5, 7, 11, 13, 17, 37};
  return t0;
}

PrimeExponents scalar_level_table() {
  return {{2, 4}, {3, 3}, {5, 1}, {7, 1}, {11, 1}, {13, 1}, {17, 1}, {37, 1}};
}

PrimeExponents cohomology_exponent_table() { return {{2, 3}, {3, 3}, {5, 1}, {7, 1}, {11, 1}}; }

PrimeExponents cm_cohomology_exponent_table() {
  return {{2, 3}, {3, 1}, {7, 1}, {11, 1}, {19, 1}, {43, 1}, {67, 1}, {163, 1}};
}

PrimeExponents algebra_exponent_table_non_cm() {
  return {{2, 4}, {3, 2}, {5, 2}, {7, 1}, {11, 1}, {13, 1}, {17, 1}, {37, 1}};
}

PrimeExponents algebra_exponent_table_cm() {
  return {{2, 3}, {3, 3}, {7, 1}, {11, 1}, {19, 1}, {43, 1}, {67, 1}, {163, 1}};
}

PrimeExponents quoted_exponent_e() { return {{2, 12}, {3, 8}, {5, 3}, {7, 3}, {11, 2}}; }

PrimeExponents cm_exponent_e() { return {{2, 2}, {3, 1}}; }

namespace {

/// lcm of projective orders over representatives [[1,b],[c,d]] with b in [lo, hi).
std::uint64_t scan_pgl2(std::uint32_t p, std::uint32_t lo, std::uint32_t hi) {
  std::uint64_t e = 1;
  for (std::uint32_t b = lo; b < hi; ++b) {
    for (std::uint32_t c = 0; c < p; ++c) {
      for (std::uint32_t d = 0; d < p; ++d) {
        Mat2 g(p, 1, b, c, d);
        if (g.is_invertible()) e = lcm_u64(e, projective_element_order(g));
      }
    }
  }
  return e;
}

}  // namespace

std::uint64_t exp_pgl2(std::uint32_t p, unsigned threads) {
  if (!is_prime(p)) throw DomainError("p must be prime");
  if (p > 251) throw CapExceeded("exp_pgl2 brute force limited to p <= 251");
  // Representatives modulo scalars: first nonzero entry of (a, b, c, d) is 1.
  std::uint64_t e = 1;
  for (std::uint32_t c = 1; c < p; ++c) {
    for (std::uint32_t d = 0; d < p; ++d) e = lcm_u64(e, projective_element_order(Mat2(p, 0, 1, c, d)));
  }
  const unsigned t = std::clamp(threads, 1u, p);
  std::vector<std::uint64_t> parts(t, 1);
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < t; ++i) {
    const std::uint32_t lo = p * i / t, hi = p * (i + 1) / t;
    if (t == 1) {
      parts[i] = scan_pgl2(p, lo, hi);
    } else {
      pool.emplace_back([&parts, i, p, lo, hi] { parts[i] = scan_pgl2(p, lo, hi); });
    }
  }
  for (auto& th : pool) th.join();
  for (std::uint64_t x : parts) e = lcm_u64(e, x);
  return e;
}

PrimeExponents a_valuations(unsigned threads) {
  std::map<std::uint32_t, std::uint64_t> exps;
  for (std::uint32_t p : t0_primes()) exps[p] = exp_pgl2(p, threads);
  PrimeExponents out;
  std::vector<std::uint32_t> support;
  for (auto [p, x] : exps) {
    for (auto [q, v] : factorize(x)) support.push_back(static_cast<std::uint32_t>(q));
  }
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  for (std::uint32_t ell : support) {
    std::uint64_t a = 1;
    for (auto [p, x] : exps) {
      if (p != ell) a = lcm_u64(a, x);
    }
    const int v = valuation_of(a, ell);
    if (v > 0) out[ell] = v;
  }
  return out;
}

ExponentConstant exponent_constant_e(const PrimeExponents& n, const PrimeExponents& a_vals) {
  ExponentConstant r;
  r.n = n;
  r.a = a_vals;
  for (auto [p, e] : n) r.m[p] = e + (p == 2 ? 2 : 0);
  if (!r.m.count(2)) r.m[2] = 2;
  r.value = combined_exponent_bound(r.n, r.m, r.a);
  for (const auto* mp : {&r.n, &r.m, &r.a}) {
    for (auto [p, e] : *mp) r.factorization[p] += e;
  }
  std::erase_if(r.factorization, [](const auto& kv) { return kv.second == 0; });
  r.quoted = quoted_exponent_e();
  r.matches_quoted = r.factorization == r.quoted;
  return r;
}

ExponentConstant exponent_constant_e(unsigned threads) {
  return exponent_constant_e(cohomology_exponent_table(), a_valuations(threads));
}

namespace {

/// min over units a mod l^k of min(v(a^t - 1), k).
int min_unit_valuation(std::uint64_t t, std::uint32_t ell, int k) {
  const std::uint64_t q = ipow(ell, static_cast<unsigned>(k));
  int best = k;
  for (std::uint64_t a = 1; a < q && best > 0; ++a) {
    if (a % ell == 0) continue;
    const std::uint64_t x = (pow_mod(a, t, q) + q - 1) % q;
    best = std::min(best, x == 0 ? k : valuation_of(x, ell));
  }
  return best;
}

}  // namespace

int cm_e_ell(unsigned h, unsigned d, std::uint32_t ell, int probe_level) {
  if (!is_prime(ell)) throw DomainError("l must be prime");
  if (h == 0 || d == 0) throw DomainError("h and d must be positive");
  const std::uint64_t t = static_cast<std::uint64_t>(h) * d;
  int k = std::max(probe_level, 1);
  for (;;) {
    std::uint64_t q = 1;
    for (int i = 0; i <= k; ++i) {
      q *= ell;
      if (q > (std::uint64_t{1} << 24)) throw CapExceeded("level too large for unit search");
    }
    const int here = min_unit_valuation(t, ell, k);
    if (here < k && min_unit_valuation(t, ell, k + 1) == here) return here;
    ++k;
  }
}

PrimeExponents kummer_bound_factorization(const PrimeExponents& e, const PrimeExponents& m) {
  PrimeExponents out;
  for (auto [p, x] : m) out[p] += x;
  for (auto [p, x] : e) out[p] += 2 * x;
  for (auto [p, x] : out) {
    if (x < 0) throw DomainError("exponents must be non-negative");
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

mpz_class kummer_bound(const PrimeExponents& e, const PrimeExponents& m) {
  return expand(kummer_bound_factorization(e, m));
}

mpz_class submodule_index_bound(int d, int n, std::uint32_t ell) {
  if (d < 0 || n < 0) throw DomainError("d and n must be non-negative");
  if (!is_prime(ell)) throw DomainError("l must be prime");
  return expand({{ell, n + 2 * d}});
}

mpz_class generated_submodule_index(std::uint32_t modulus, const std::vector<Mat2>& gens,
                                    std::array<std::uint32_t, 2> v) {
  ResidueRing ring = ResidueRing::ell_adic_of(modulus);
  const ChainRing R(ring.prime(), ring.level());
  HowellSpan span(R, 2);
  span.insert({v[0] % modulus, v[1] % modulus});
  bool grew = true;
  while (grew) {
    grew = false;
    const ChainMatrix snapshot = span.rows();
    for (const ChainRow& r : snapshot) {
      for (const Mat2& s : gens) {
        if (s.modulus() != modulus) throw DomainError("matrices live in different rings");
        auto w = s.apply(static_cast<std::uint32_t>(r[0]), static_cast<std::uint32_t>(r[1]));
        grew = span.insert({w[0], w[1]}) || grew;
      }
    }
  }
  return expand({{ring.prime(), 2 * ring.level() - span.log_size()}});
}

mpz_class generated_submodule_index(const FiniteMatrixGroup& g, std::array<std::uint32_t, 2> v) {
  return generated_submodule_index(g.modulus(), g.generators(), v);
}

BoundProfile bound_profile(unsigned threads) {
  BoundProfile b;
  b.t0 = t0_primes();
  b.s = scalar_level_table();
  b.n = cohomology_exponent_table();
  b.n_cm = cm_cohomology_exponent_table();
  b.m_non_cm = algebra_exponent_table_non_cm();
  b.m_cm = algebra_exponent_table_cm();
  b.a = a_valuations(threads);
  b.e = exponent_constant_e(b.n, b.a);
  b.b_non_cm = kummer_bound_factorization(quoted_exponent_e(), b.m_non_cm);
  b.b_cm = kummer_bound_factorization(cm_exponent_e(), b.m_cm);
  return b;
}

}  // namespace galimage
