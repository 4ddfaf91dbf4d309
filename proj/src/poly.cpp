#include "galimage/poly.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "galimage/errors.hpp"
#include "galimage/residue.hpp"

namespace galimage::poly {

// Z[x] ------------------------------------------------------------------------

int degree(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }

void trim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

ZPoly from_ints(std::initializer_list<long> coeffs) {
  ZPoly f;
  for (long c : coeffs) f.emplace_back(c);
  trim(f);
  return f;
}

ZPoly add(const ZPoly& f, const ZPoly& g) {
  ZPoly r(std::max(f.size(), g.size()));
  for (std::size_t i = 0; i < f.size(); ++i) r[i] += f[i];
  for (std::size_t i = 0; i < g.size(); ++i) r[i] += g[i];
  trim(r);
  return r;
}

ZPoly sub(const ZPoly& f, const ZPoly& g) {
  ZPoly r(std::max(f.size(), g.size()));
  for (std::size_t i = 0; i < f.size(); ++i) r[i] += f[i];
  for (std::size_t i = 0; i < g.size(); ++i) r[i] -= g[i];
  trim(r);
  return r;
}

ZPoly mul(const ZPoly& f, const ZPoly& g) {
  if (f.empty() || g.empty()) return {};
  ZPoly r(f.size() + g.size() - 1);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
  }
  trim(r);
  return r;
}

ZPoly scale(const ZPoly& f, const mpz_class& c) {
  ZPoly r = f;
  for (auto& x : r) x *= c;
  trim(r);
  return r;
}

ZPoly derivative(const ZPoly& f) {
  ZPoly r;
  for (std::size_t i = 1; i < f.size(); ++i) r.push_back(f[i] * static_cast<unsigned long>(i));
  trim(r);
  return r;
}

mpz_class content(const ZPoly& f) {
  mpz_class g = 0;
  for (const auto& x : f) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

ZPoly primitive_part(const ZPoly& f) {
  if (f.empty()) return {};
  mpz_class c = content(f);
  if (f.back() < 0) c = -c;
  ZPoly r = f;
  for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
  return r;
}

mpz_class eval(const ZPoly& f, const mpz_class& x) {
  mpz_class r = 0;
  for (std::size_t i = f.size(); i-- > 0;) r = r * x + f[i];
  return r;
}

bool divides(const ZPoly& g, const ZPoly& f, ZPoly* quotient) {
  if (g.empty()) throw DomainError("division by the zero polynomial");
  if (f.empty()) {
    if (quotient) quotient->clear();
    return true;
  }
  if (f.size() < g.size()) return false;
  ZPoly r = f;
  ZPoly q(f.size() - g.size() + 1);
  const mpz_class& lead = g.back();
  for (std::size_t i = q.size(); i-- > 0;) {
    mpz_class& top = r[i + g.size() - 1];
    if (!mpz_divisible_p(top.get_mpz_t(), lead.get_mpz_t())) return false;
    mpz_class t;
    mpz_divexact(t.get_mpz_t(), top.get_mpz_t(), lead.get_mpz_t());
    q[i] = t;
    for (std::size_t j = 0; j < g.size(); ++j) r[i + j] -= t * g[j];
  }
  for (const auto& x : r) {
    if (x != 0) return false;
  }
  if (quotient) {
    trim(q);
    *quotient = std::move(q);
  }
  return true;
}

int degree(const QPoly& f) { return static_cast<int>(f.size()) - 1; }

void trim(QPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

QPoly mul(const QPoly& f, const QPoly& g) {
  if (f.empty() || g.empty()) return {};
  QPoly r(f.size() + g.size() - 1);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
  }
  trim(r);
  return r;
}

QPoly sub(const QPoly& f, const QPoly& g) {
  QPoly r(std::max(f.size(), g.size()));
  for (std::size_t i = 0; i < f.size(); ++i) r[i] += f[i];
  for (std::size_t i = 0; i < g.size(); ++i) r[i] -= g[i];
  trim(r);
  return r;
}

ZPoly to_primitive_z(const QPoly& f) {
  mpz_class den = 1;
  for (const auto& x : f) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  ZPoly r;
  for (const auto& x : f) {
    mpq_class y = x * den;
    r.push_back(y.get_num());
  }
  trim(r);
  return primitive_part(r);
}

namespace {

QPoly to_q(const ZPoly& f) {
  QPoly r;
  for (const auto& x : f) r.emplace_back(x);
  return r;
}

/// Remainder of f by g over Q.
QPoly q_rem(QPoly f, const QPoly& g) {
  while (!f.empty() && f.size() >= g.size()) {
    const mpq_class t = f.back() / g.back();
    const std::size_t shift = f.size() - g.size();
    for (std::size_t j = 0; j < g.size(); ++j) f[shift + j] -= t * g[j];
    trim(f);
  }
  return f;
}

QPoly q_quo(QPoly f, const QPoly& g) {
  if (f.size() < g.size()) return {};
  QPoly q(f.size() - g.size() + 1);
  for (std::size_t i = q.size(); i-- > 0;) {
    const mpq_class t = f[i + g.size() - 1] / g.back();
    q[i] = t;
    for (std::size_t j = 0; j < g.size(); ++j) f[i + j] -= t * g[j];
  }
  trim(q);
  return q;
}

QPoly q_derivative(const QPoly& f) {
  QPoly r;
  for (std::size_t i = 1; i < f.size(); ++i) r.push_back(f[i] * static_cast<long>(i));
  trim(r);
  return r;
}

}  // namespace

ZPoly gcd(const ZPoly& f, const ZPoly& g) {
  QPoly a = to_q(f), b = to_q(g);
  trim(a);
  trim(b);
  while (!b.empty()) {
    QPoly r = q_rem(a, b);
    a = std::move(b);
    b = to_q(to_primitive_z(r));
  }
  return to_primitive_z(a);
}

std::vector<std::pair<ZPoly, int>> squarefree_decomposition(const ZPoly& f) {
  // Yun's algorithm over Q; every division below is exact.
  std::vector<std::pair<ZPoly, int>> out;
  if (degree(f) < 1) return out;
  const ZPoly g = primitive_part(f);
  const ZPoly dg = derivative(g);
  const QPoly a = to_q(gcd(g, dg));
  QPoly b = q_quo(to_q(g), a);
  QPoly c = q_quo(to_q(dg), a);
  QPoly d = sub(c, q_derivative(b));
  for (int i = 1; degree(b) > 0; ++i) {
    const QPoly h = to_q(gcd(to_primitive_z(b), to_primitive_z(d)));
    if (degree(h) > 0) out.emplace_back(to_primitive_z(h), i);
    b = q_quo(b, h);
    c = q_quo(d, h);
    d = sub(c, q_derivative(b));
  }
  return out;
}

std::string to_string(const ZPoly& f) {
  if (f.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = f.size(); i-- > 0;) {
    if (f[i] == 0) continue;
    mpz_class c = f[i];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    c = abs(c);
    if (c != 1 || i == 0) os << c;
    if (i > 0) os << (c != 1 ? "*x" : "x");
    if (i > 1) os << "^" << i;
    first = false;
  }
  return os.str();
}

mpz_class mignotte_bound(const ZPoly& f) {
  mpz_class sq = 0;
  for (const auto& x : f) sq += x * x;
  mpz_class norm;
  mpz_sqrt(norm.get_mpz_t(), sq.get_mpz_t());
  norm += 1;
  mpz_class two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2, static_cast<unsigned long>(std::max(degree(f), 0)));
  return two_n * norm * abs(f.back());
}

// F_p[x] ----------------------------------------------------------------------

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return a * b % p; }

FpPoly fp_zero(std::uint64_t p) { return FpPoly{p, {}}; }

FpPoly fp_x(std::uint64_t p) { return fp_trim(FpPoly{p, {0, 1}}); }

FpPoly fp_one(std::uint64_t p) { return FpPoly{p, {1}}; }

FpPoly fp_scale(const FpPoly& f, std::uint64_t s) {
  FpPoly r = f;
  for (auto& x : r.c) x = mulmod(x, s, f.p);
  return fp_trim(r);
}

FpPoly fp_rem(const FpPoly& f, const FpPoly& g) { return fp_divmod(f, g).second; }

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m) { return fp_rem(fp_mul(a, b), m); }

}  // namespace

FpPoly fp_trim(FpPoly f) {
  while (!f.c.empty() && f.c.back() == 0) f.c.pop_back();
  return f;
}

FpPoly reduce(const ZPoly& f, std::uint64_t p) {
  FpPoly r{p, {}};
  for (const auto& x : f) {
    mpz_class y;
    mpz_fdiv_r_ui(y.get_mpz_t(), x.get_mpz_t(), p);
    r.c.push_back(y.get_ui());
  }
  return fp_trim(r);
}

FpPoly fp_add(const FpPoly& f, const FpPoly& g) {
  FpPoly r{f.p, std::vector<std::uint64_t>(std::max(f.c.size(), g.c.size()), 0)};
  for (std::size_t i = 0; i < f.c.size(); ++i) r.c[i] = f.c[i];
  for (std::size_t i = 0; i < g.c.size(); ++i) r.c[i] = (r.c[i] + g.c[i]) % f.p;
  return fp_trim(r);
}

FpPoly fp_sub(const FpPoly& f, const FpPoly& g) {
  FpPoly r{f.p, std::vector<std::uint64_t>(std::max(f.c.size(), g.c.size()), 0)};
  for (std::size_t i = 0; i < f.c.size(); ++i) r.c[i] = f.c[i];
  for (std::size_t i = 0; i < g.c.size(); ++i) r.c[i] = (r.c[i] + f.p - g.c[i]) % f.p;
  return fp_trim(r);
}

FpPoly fp_mul(const FpPoly& f, const FpPoly& g) {
  if (f.is_zero() || g.is_zero()) return fp_zero(f.p);
  FpPoly r{f.p, std::vector<std::uint64_t>(f.c.size() + g.c.size() - 1, 0)};
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i] == 0) continue;
    for (std::size_t j = 0; j < g.c.size(); ++j) r.c[i + j] = (r.c[i + j] + mulmod(f.c[i], g.c[j], f.p)) % f.p;
  }
  return fp_trim(r);
}

std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& f, const FpPoly& g) {
  if (g.is_zero()) throw DomainError("division by the zero polynomial");
  const std::uint64_t p = f.p;
  FpPoly r = f;
  if (r.c.size() < g.c.size()) return {fp_zero(p), r};
  FpPoly q{p, std::vector<std::uint64_t>(r.c.size() - g.c.size() + 1, 0)};
  const std::uint64_t inv = inv_mod(g.lead(), p);
  for (std::size_t i = q.c.size(); i-- > 0;) {
    const std::uint64_t t = mulmod(r.c[i + g.c.size() - 1], inv, p);
    q.c[i] = t;
    if (t == 0) continue;
    for (std::size_t j = 0; j < g.c.size(); ++j) r.c[i + j] = (r.c[i + j] + p - mulmod(t, g.c[j], p)) % p;
  }
  return {fp_trim(q), fp_trim(r)};
}

FpPoly fp_monic(const FpPoly& f) {
  if (f.is_zero()) return f;
  return fp_scale(f, inv_mod(f.lead(), f.p));
}

FpPoly fp_gcd(const FpPoly& f, const FpPoly& g) {
  FpPoly a = f, b = g;
  while (!b.is_zero()) {
    FpPoly r = fp_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(a);
}

FpPoly fp_derivative(const FpPoly& f) {
  FpPoly r{f.p, {}};
  for (std::size_t i = 1; i < f.c.size(); ++i) r.c.push_back(mulmod(f.c[i], i % f.p, f.p));
  return fp_trim(r);
}

FpPoly fp_powmod(const FpPoly& base, const mpz_class& e, const FpPoly& m) {
  FpPoly result = fp_rem(fp_one(base.p), m);
  FpPoly b = fp_rem(base, m);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = fp_mulmod(result, result, m);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = fp_mulmod(result, b, m);
  }
  return result;
}

std::string to_string(const FpPoly& f) {
  ZPoly z;
  for (auto x : f.c) z.emplace_back(static_cast<unsigned long>(x));
  return to_string(z);
}

namespace {

/// Squarefree decomposition of a monic polynomial over F_p.
std::vector<std::pair<FpPoly, int>> fp_squarefree(const FpPoly& f) {
  std::vector<std::pair<FpPoly, int>> out;
  const std::uint64_t p = f.p;
  FpPoly c = fp_gcd(f, fp_derivative(f));
  FpPoly w = fp_divmod(f, c).first;
  int i = 1;
  while (w.degree() > 0) {
    FpPoly y = fp_gcd(w, c);
    FpPoly fac = fp_divmod(w, y).first;
    if (fac.degree() > 0) out.emplace_back(fp_monic(fac), i);
    w = y;
    c = fp_divmod(c, y).first;
    ++i;
  }
  if (c.degree() > 0) {
    // c is a p-th power: its p-th root has coefficients c_{ip}.
    FpPoly root{p, {}};
    for (std::size_t j = 0; j < c.c.size(); j += p) root.c.push_back(c.c[j]);
    for (auto& [g, m] : fp_squarefree(fp_monic(fp_trim(root)))) {
      out.emplace_back(g, m * static_cast<int>(p));
    }
  }
  return out;
}

/// (product of irreducible factors of degree d, d) for a monic squarefree f.
std::vector<std::pair<FpPoly, int>> fp_distinct_degree(FpPoly f) {
  std::vector<std::pair<FpPoly, int>> out;
  const std::uint64_t p = f.p;
  const FpPoly x = fp_x(p);
  FpPoly h = fp_rem(x, f);
  for (int d = 1; 2 * d <= f.degree(); ++d) {
    h = fp_powmod(h, mpz_class(static_cast<unsigned long>(p)), f);
    FpPoly g = fp_gcd(fp_sub(h, x), f);
    if (g.degree() > 0) {
      out.emplace_back(g, d);
      f = fp_divmod(f, g).first;
      h = fp_rem(h, f);
    }
  }
  if (f.degree() > 0) out.emplace_back(fp_monic(f), f.degree());
  return out;
}

void fp_equal_degree(const FpPoly& f, int d, std::mt19937_64& rng, std::vector<FpPoly>& out) {
  if (f.degree() == d) {
    out.push_back(fp_monic(f));
    return;
  }
  const std::uint64_t p = f.p;
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), p, static_cast<unsigned long>(d));
  for (;;) {
    FpPoly a{p, {}};
    for (int i = 0; i < f.degree(); ++i) a.c.push_back(rng() % p);
    a = fp_trim(a);
    if (a.degree() < 1) continue;
    FpPoly b;
    if (p == 2) {
      // Trace map a + a^2 + ... + a^(2^(d-1)) splits in characteristic 2.
      b = fp_rem(a, f);
      FpPoly t = b;
      for (int i = 1; i < d; ++i) {
        t = fp_mulmod(t, t, f);
        b = fp_add(b, t);
      }
    } else {
      b = fp_sub(fp_powmod(a, (q - 1) / 2, f), fp_one(p));
    }
    FpPoly g = fp_gcd(b, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      fp_equal_degree(g, d, rng, out);
      fp_equal_degree(fp_divmod(f, g).first, d, rng, out);
      return;
    }
  }
}

bool fp_less(const FpPoly& a, const FpPoly& b) {
  if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
  return std::lexicographical_compare(a.c.rbegin(), a.c.rend(), b.c.rbegin(), b.c.rend());
}

void check_fp_input(const FpPoly& f) {
  if (f.p < 2 || f.p >= (std::uint64_t{1} << 32) || !is_prime(f.p)) throw DomainError("p must be a prime below 2^32");
  if (f.is_zero()) throw DomainError("cannot factor the zero polynomial");
}

}  // namespace

std::vector<std::pair<FpPoly, int>> factor_mod_p(const FpPoly& f, std::uint64_t seed) {
  check_fp_input(f);
  std::vector<std::pair<FpPoly, int>> out;
  std::mt19937_64 rng(seed);
  for (auto& [part, mult] : fp_squarefree(fp_monic(f))) {
    for (auto& [block, d] : fp_distinct_degree(part)) {
      std::vector<FpPoly> pieces;
      fp_equal_degree(block, d, rng, pieces);
      for (auto& g : pieces) out.emplace_back(g, mult);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first == b.first) return a.second < b.second;
    return fp_less(a.first, b.first);
  });
  return out;
}

std::vector<std::pair<FpPoly, int>> factor_mod_p(const ZPoly& f, std::uint64_t p, std::uint64_t seed) {
  if (f.empty()) throw DomainError("cannot factor the zero polynomial");
  if (mpz_divisible_ui_p(f.back().get_mpz_t(), p)) throw DomainError("p divides the leading coefficient");
  return factor_mod_p(reduce(f, p), seed);
}

bool is_irreducible_mod_p(const FpPoly& f) {
  check_fp_input(f);
  if (f.degree() < 1) return false;
  const FpPoly m = fp_monic(f);
  if (fp_gcd(m, fp_derivative(m)).degree() > 0) return false;
  auto ddf = fp_distinct_degree(m);
  return ddf.size() == 1 && ddf[0].second == m.degree();
}

// Factorization over Z ---------------------------------------------------------

std::vector<int> ZFactorization::degrees() const {
  std::vector<int> d;
  for (const auto& f : factors) {
    for (int i = 0; i < f.multiplicity; ++i) d.push_back(degree(f.poly));
  }
  std::sort(d.begin(), d.end());
  return d;
}

ZPoly ZFactorization::product() const {
  ZPoly r{unit_content};
  for (const auto& f : factors) {
    for (int i = 0; i < f.multiplicity; ++i) r = mul(r, f.poly);
  }
  return r;
}

namespace {

ZPoly mod_poly(const ZPoly& f, const mpz_class& m) {
  ZPoly r;
  for (const auto& x : f) {
    mpz_class y;
    mpz_fdiv_r(y.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    r.push_back(y);
  }
  trim(r);
  return r;
}

ZPoly symmetric(const ZPoly& f, const mpz_class& m) {
  ZPoly r = mod_poly(f, m);
  const mpz_class half = m / 2;
  for (auto& x : r) {
    if (x > half) x -= m;
  }
  trim(r);
  return r;
}

ZPoly lift_fp(const FpPoly& f) {
  ZPoly r;
  for (auto x : f.c) r.emplace_back(static_cast<unsigned long>(x));
  return r;
}

/// Extended gcd over F_p: s a + t b = 1 for coprime a, b.
std::pair<FpPoly, FpPoly> fp_bezout(const FpPoly& a, const FpPoly& b) {
  const std::uint64_t p = a.p;
  FpPoly r0 = a, r1 = b, s0 = fp_one(p), s1 = fp_zero(p), t0 = fp_zero(p), t1 = fp_one(p);
  while (!r1.is_zero()) {
    auto [q, r] = fp_divmod(r0, r1);
    FpPoly s2 = fp_sub(s0, fp_mul(q, s1)), t2 = fp_sub(t0, fp_mul(q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.degree() != 0) throw DomainError("factors are not coprime");
  const std::uint64_t inv = inv_mod(r0.c[0], p);
  return {fp_scale(s0, inv), fp_scale(t0, inv)};
}

/// Lifts g = a0 b0 mod p (a0 monic) to g = a b mod p^k with a monic.
std::pair<ZPoly, ZPoly> hensel_two(const ZPoly& g, const FpPoly& a0, const FpPoly& b0, std::uint64_t p, int k) {
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(k));
  auto [s, t] = fp_bezout(a0, b0);
  ZPoly a = lift_fp(a0), b = lift_fp(b0);
  b.back() = g.back();
  b = mod_poly(b, pk);
  mpz_class pi = p;
  for (int i = 1; i < k; ++i) {
    // e = (g - a b) / p^i mod p.
    ZPoly diff = sub(g, mul(a, b));
    ZPoly e;
    for (auto& x : diff) {
      mpz_class y;
      mpz_divexact(y.get_mpz_t(), x.get_mpz_t(), pi.get_mpz_t());
      e.push_back(y);
    }
    trim(e);
    FpPoly ep = reduce(e, p);
    FpPoly alpha = fp_rem(fp_mul(ep, t), a0);
    FpPoly beta = fp_divmod(fp_sub(ep, fp_mul(alpha, b0)), a0).first;
    a = mod_poly(add(a, scale(lift_fp(alpha), pi)), pk);
    b = mod_poly(add(b, scale(lift_fp(beta), pi)), pk);
    pi *= p;
  }
  return {a, b};
}

/// Monic lifts a_i with g = lc(g) prod a_i mod p^k.
std::vector<ZPoly> hensel_lift(const ZPoly& g, const std::vector<FpPoly>& factors, std::uint64_t p, int k) {
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(k));
  std::vector<ZPoly> out;
  ZPoly rest = g;
  for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
    FpPoly others = reduce(ZPoly{rest.back()}, p);
    for (std::size_t j = i + 1; j < factors.size(); ++j) others = fp_mul(others, factors[j]);
    auto [a, b] = hensel_two(rest, factors[i], others, p, k);
    out.push_back(a);
    rest = b;
  }
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), rest.back().get_mpz_t(), pk.get_mpz_t());
  out.push_back(mod_poly(scale(rest, inv), pk));
  return out;
}

std::set<int> subset_degrees(const std::vector<int>& degs) {
  std::set<int> s{0};
  for (int d : degs) {
    std::set<int> next = s;
    for (int x : s) next.insert(x + d);
    s = std::move(next);
  }
  return s;
}

/// Factors a primitive squarefree polynomial of degree >= 2.
std::vector<ZFactor> factor_squarefree(const ZPoly& g, std::uint64_t seed, std::vector<std::uint64_t>& used) {
  const int n = degree(g);
  // Collect good primes: p not dividing lc and g squarefree mod p.
  struct Candidate {
    std::uint64_t p;
    std::vector<FpPoly> factors;
  };
  std::vector<Candidate> good;
  for (std::uint64_t p = 3; good.size() < 5; p += 2) {
    if (!is_prime(p) || mpz_divisible_ui_p(g.back().get_mpz_t(), p)) continue;
    FpPoly gp = reduce(g, p);
    if (fp_gcd(gp, fp_derivative(gp)).degree() > 0) continue;
    Candidate c{p, {}};
    for (auto& [f, m] : factor_mod_p(gp, seed)) c.factors.push_back(f);
    good.push_back(std::move(c));
    if (p > 100000) throw CapExceeded("no good prime found");
  }
  std::set<int> allowed;
  for (int d = 0; d <= n; ++d) allowed.insert(d);
  for (const auto& c : good) {
    if (c.factors.size() == 1) {
      used.push_back(c.p);
      return {ZFactor{g, 1, "mod p=" + std::to_string(c.p)}};
    }
    std::vector<int> degs;
    for (const auto& f : c.factors) degs.push_back(f.degree());
    std::set<int> s = subset_degrees(degs);
    std::set<int> both;
    std::set_intersection(allowed.begin(), allowed.end(), s.begin(), s.end(), std::inserter(both, both.begin()));
    allowed = std::move(both);
  }
  for (const auto& c : good) used.push_back(c.p);
  if (allowed.size() == 2) return {ZFactor{g, 1, "degree sets"}};

  const Candidate& best = *std::min_element(good.begin(), good.end(), [](const auto& a, const auto& b) {
    return a.factors.size() < b.factors.size();
  });
  const std::uint64_t p = best.p;
  const mpz_class bound = 2 * mignotte_bound(g) + 1;
  int k = 1;
  mpz_class pk = p;
  while (pk <= bound) {
    pk *= p;
    ++k;
  }
  std::vector<ZPoly> lifted = hensel_lift(g, best.factors, p, k);

  std::vector<ZFactor> out;
  ZPoly rest = g;
  std::vector<std::size_t> alive(lifted.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
  std::size_t tested = 0;
  for (std::size_t s = 1; 2 * s <= alive.size(); ++s) {
    bool found = true;
    while (found && 2 * s <= alive.size()) {
      found = false;
      std::vector<bool> pick(alive.size(), false);
      std::fill(pick.begin(), pick.begin() + static_cast<long>(s), true);
      do {
        int d = 0;
        for (std::size_t i = 0; i < alive.size(); ++i) {
          if (pick[i]) d += degree(lifted[alive[i]]);
        }
        if (!allowed.count(d)) continue;
        if (++tested > (std::size_t{1} << 20)) throw CapExceeded("recombination search too large");
        ZPoly cand{rest.back()};
        for (std::size_t i = 0; i < alive.size(); ++i) {
          if (pick[i]) cand = mod_poly(mul(cand, lifted[alive[i]]), pk);
        }
        cand = primitive_part(symmetric(cand, pk));
        ZPoly quotient;
        if (!divides(cand, rest, &quotient)) continue;
        out.push_back(ZFactor{cand, 1, "recombination"});
        rest = quotient;
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < alive.size(); ++i) {
          if (!pick[i]) keep.push_back(alive[i]);
        }
        alive = std::move(keep);
        found = true;
        break;
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
  }
  if (degree(rest) > 0) out.push_back(ZFactor{primitive_part(rest), 1, "recombination"});
  return out;
}

}  // namespace

ZFactorization factor_over_z(const ZPoly& f_in, int degree_cap, std::uint64_t seed) {
  ZPoly f = f_in;
  trim(f);
  if (f.empty()) throw DomainError("cannot factor the zero polynomial");
  if (degree(f) > degree_cap) throw CapExceeded("degree beyond configured factorization range");
  ZFactorization out;
  out.unit_content = content(f);
  if (f.back() < 0) out.unit_content = -out.unit_content;
  const ZPoly g = primitive_part(f);
  for (auto& [part, mult] : squarefree_decomposition(g)) {
    ZPoly q = primitive_part(part);
    if (degree(q) == 1) {
      out.factors.push_back(ZFactor{q, mult, "linear"});
      continue;
    }
    for (ZFactor& fac : factor_squarefree(q, seed, out.primes)) {
      fac.multiplicity = mult;
      if (degree(fac.poly) == 1) fac.certificate = "linear";
      out.factors.push_back(std::move(fac));
    }
  }
  std::sort(out.primes.begin(), out.primes.end());
  out.primes.erase(std::unique(out.primes.begin(), out.primes.end()), out.primes.end());
  std::sort(out.factors.begin(), out.factors.end(), [](const ZFactor& a, const ZFactor& b) {
    if (a.poly.size() != b.poly.size()) return a.poly.size() < b.poly.size();
    return std::lexicographical_compare(a.poly.rbegin(), a.poly.rend(), b.poly.rbegin(), b.poly.rend());
  });
  return out;
}

}  // namespace galimage::poly
