#include "galimage/cohom.hpp"

#include <algorithm>
#include <deque>

#include "galimage/chainlin.hpp"
#include "galimage/errors.hpp"

namespace galimage {

GModule GModule::torsion(std::uint32_t ell, int k, int m) {
  if (m < 0 || m > k) throw DomainError("torsion selector needs l^m | l^k");
  if (m == 0) throw DomainError("torsion selector needs m >= 1");
  return GModule{static_cast<std::uint32_t>(ipow(ell, static_cast<unsigned>(m)))};
}

mpz_class CohomologyResult::order() const {
  mpz_class r = 1;
  for (std::uint64_t d : invariant_factors) r *= static_cast<unsigned long>(d);
  return r;
}

GroupAction make_action(const FiniteMatrixGroup& g, std::uint32_t n) {
  if (n < 2 || g.modulus() % n != 0) throw DomainError("module modulus must divide group modulus");
  GroupAction act;
  const auto& el = g.elements();
  act.identity = g.index_of(Mat2::identity(g.modulus()));
  for (const Mat2& s : g.generators()) {
    std::vector<std::uint32_t> col(el.size());
    for (std::size_t i = 0; i < el.size(); ++i) col[i] = static_cast<std::uint32_t>(g.index_of(el[i] * s));
    act.right_mult.push_back(std::move(col));
  }
  act.action.reserve(el.size());
  for (const Mat2& m : el) act.action.push_back(m.reduce(n));
  return act;
}

GroupAction make_quotient_action(const FiniteMatrixGroup& g, const FiniteMatrixGroup& k,
                                 std::uint32_t n) {
  if (n < 2 || g.modulus() % n != 0) throw DomainError("module modulus must divide group modulus");
  if (!k.is_subgroup_of(g)) throw DomainError("quotient needs a subgroup");
  for (const Mat2& x : k.elements()) {
    if (!x.reduce(n).is_identity()) throw DomainError("quotient subgroup must act trivially");
  }
  for (const Mat2& s : g.generators()) {
    Mat2 si = s.inverse();
    for (const Mat2& x : k.generators()) {
      if (!k.contains(s * x * si)) throw DomainError("quotient subgroup must be normal");
    }
  }
  const auto& el = g.elements();
  const std::uint32_t none = 0xFFFFFFFFu;
  std::vector<std::uint32_t> coset(el.size(), none);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < el.size(); ++i) {
    if (coset[i] != none) continue;
    auto c = static_cast<std::uint32_t>(reps.size());
    reps.push_back(i);
    for (const Mat2& x : k.elements()) coset[g.index_of(el[i] * x)] = c;
  }
  GroupAction act;
  act.identity = coset[g.index_of(Mat2::identity(g.modulus()))];
  for (const Mat2& s : g.generators()) {
    std::vector<std::uint32_t> col(reps.size());
    for (std::size_t c = 0; c < reps.size(); ++c) col[c] = coset[g.index_of(el[reps[c]] * s)];
    act.right_mult.push_back(std::move(col));
  }
  for (std::size_t r : reps) act.action.push_back(el[r].reduce(n));
  return act;
}

namespace {

/// Exponents e with H^1 = sum Z/l^e (ascending, zeros dropped) plus log_l |Z^1|.
struct PrimaryH1 {
  std::vector<int> exps;
  int log_cocycles = 0;
};

PrimaryH1 h1_primary(const GroupAction& act, std::uint32_t ell, int k) {
  const ChainRing R(ell, k);
  const auto q = static_cast<std::uint32_t>(R.modulus());
  const std::size_t r = act.right_mult.size();
  const std::size_t ncols = 2 * r;
  const std::size_t order = act.order();
  PrimaryH1 out;
  if (r == 0) return out;

  std::vector<Mat2> a(order);
  for (std::size_t i = 0; i < order; ++i) a[i] = act.action[i].reduce(q);

  // xi(g) = A_g x, with x the stacked values on generators; A_g is 2 x ncols.
  std::vector<std::uint64_t> A(order * 2 * ncols, 0);
  std::vector<bool> seen(order, false);
  auto row = [&](std::size_t g, int i) { return &A[(g * 2 + static_cast<std::size_t>(i)) * ncols]; };

  HowellSpan rel(R, ncols);
  ChainRow c0(ncols), c1(ncols);
  std::deque<std::size_t> queue{act.identity};
  seen[act.identity] = true;
  while (!queue.empty()) {
    std::size_t g = queue.front();
    queue.pop_front();
    const Mat2& ag = a[g];
    for (std::size_t s = 0; s < r; ++s) {
      std::size_t h = act.right_mult[s][g];
      if (!seen[h]) {
        seen[h] = true;
        std::copy(row(g, 0), row(g, 0) + 2 * ncols, row(h, 0));
        std::uint64_t* h0 = row(h, 0);
        std::uint64_t* h1r = row(h, 1);
        h0[2 * s] = R.add(h0[2 * s], ag.a());
        h0[2 * s + 1] = R.add(h0[2 * s + 1], ag.b());
        h1r[2 * s] = R.add(h1r[2 * s], ag.c());
        h1r[2 * s + 1] = R.add(h1r[2 * s + 1], ag.d());
        queue.push_back(h);
        continue;
      }
      // Constraint A_h - A_g - a(g) E_s = 0.
      const std::uint64_t* g0 = row(g, 0);
      const std::uint64_t* g1 = row(g, 1);
      const std::uint64_t* hh0 = row(h, 0);
      const std::uint64_t* hh1 = row(h, 1);
      bool z0 = true, z1 = true;
      for (std::size_t j = 0; j < ncols; ++j) {
        c0[j] = R.sub(hh0[j], g0[j]);
        c1[j] = R.sub(hh1[j], g1[j]);
      }
      c0[2 * s] = R.sub(c0[2 * s], ag.a());
      c0[2 * s + 1] = R.sub(c0[2 * s + 1], ag.b());
      c1[2 * s] = R.sub(c1[2 * s], ag.c());
      c1[2 * s + 1] = R.sub(c1[2 * s + 1], ag.d());
      for (std::size_t j = 0; j < ncols; ++j) {
        z0 = z0 && c0[j] == 0;
        z1 = z1 && c1[j] == 0;
      }
      if (!z0) rel.insert(c0);
      if (!z1) rel.insert(c1);
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw DomainError("generators do not generate the group");
  }

  SmithForm sf = smith_form(rel.rows(), ncols, R, true);
  std::vector<int> e(ncols, k);
  for (std::size_t i = 0; i < sf.diag_val.size(); ++i) e[i] = sf.diag_val[i];
  for (int ei : e) out.log_cocycles += ei;

  // Coboundaries of the basis vectors of M, in Smith coordinates.
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < ncols; ++i) {
    if (e[i] > 0) live.push_back(i);
  }
  if (live.empty()) return out;
  ChainMatrix relmat(live.size(), ChainRow(live.size() + 2, 0));
  for (std::size_t t = 0; t < live.size(); ++t) relmat[t][t] = R.power(e[live[t]]);
  for (int j = 0; j < 2; ++j) {
    ChainRow x(ncols, 0);
    for (std::size_t s = 0; s < r; ++s) {
      // (s - I) e_j for the generator s; index of s is right_mult[s][identity].
      const Mat2& as = a[act.right_mult[s][act.identity]];
      std::uint64_t v0 = j == 0 ? as.a() : as.b();
      std::uint64_t v1 = j == 0 ? as.c() : as.d();
      x[2 * s] = R.sub(v0, j == 0 ? 1 : 0);
      x[2 * s + 1] = R.sub(v1, j == 0 ? 0 : 1);
    }
    for (std::size_t t = 0; t < live.size(); ++t) {
      std::size_t i = live[t];
      std::uint64_t y = 0;
      for (std::size_t c = 0; c < ncols; ++c) y = R.add(y, R.mul(sf.Q_inv[i][c], x[c]));
      int shift = k - e[i];
      if (R.val(y) < shift) throw DomainError("coboundary outside cocycle lattice");
      relmat[t][live.size() + static_cast<std::size_t>(j)] = R.divide_power(y, shift) % R.modulus();
    }
  }
  out.exps = cokernel_exponents(relmat, live.size(), live.size() + 2, R);
  return out;
}

}  // namespace

CohomologyResult h1_action(const GroupAction& act, std::size_t cap) {
  if (act.order() > cap) throw CapExceeded("group too large for direct H1");
  if (act.action.empty()) throw DomainError("empty group");
  const std::uint32_t n = act.action[0].modulus();
  CohomologyResult res;
  std::vector<std::vector<std::uint64_t>> per_prime;
  for (auto [p, k] : factorize(n)) {
    PrimaryH1 ph = h1_primary(act, static_cast<std::uint32_t>(p), k);
    std::vector<std::uint64_t> f;
    for (int ex : ph.exps) f.push_back(ipow(p, static_cast<unsigned>(ex)));
    std::sort(f.rbegin(), f.rend());
    per_prime.push_back(f);
    mpz_class pz = static_cast<unsigned long>(p);
    mpz_class zc;
    mpz_pow_ui(zc.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(ph.log_cocycles));
    res.cocycle_count *= zc;
  }
  std::size_t len = 0;
  for (const auto& f : per_prime) len = std::max(len, f.size());
  for (std::size_t i = 0; i < len; ++i) {
    std::uint64_t d = 1;
    for (const auto& f : per_prime) {
      if (i < f.size()) d *= f[i];
    }
    res.invariant_factors.push_back(d);
  }
  std::sort(res.invariant_factors.begin(), res.invariant_factors.end());
  res.exponent = res.invariant_factors.empty() ? 1 : res.invariant_factors.back();
  res.coboundary_count = res.cocycle_count / res.order();
  return res;
}

CohomologyResult h1(const FiniteMatrixGroup& g, const GModule& m, std::size_t cap) {
  if (g.order() > cap) throw CapExceeded("group too large for direct H1");
  return h1_action(make_action(g, m.modulus), cap);
}

CohomologyResult h1_quotient(const FiniteMatrixGroup& g, const FiniteMatrixGroup& k,
                             const GModule& m, std::size_t cap) {
  return h1_action(make_quotient_action(g, k, m.modulus), cap);
}

FiniteMatrixGroup power_kernel(const FiniteMatrixGroup& g, std::uint32_t ell, int m) {
  const auto q = static_cast<std::uint32_t>(ipow(ell, static_cast<unsigned>(m)));
  if (g.modulus() % q != 0) throw DomainError("power kernel level exceeds group level");
  std::vector<Mat2> powers;
  for (const Mat2& x : g.elements()) {
    if (!x.reduce(q).is_identity()) continue;
    Mat2 y = x.pow(q);
    if (!y.is_identity()) powers.push_back(y);
  }
  std::sort(powers.begin(), powers.end());
  powers.erase(std::unique(powers.begin(), powers.end()), powers.end());
  return FiniteMatrixGroup::closure(g.modulus(), powers);
}

std::map<std::uint32_t, int> sah_multiplier(const FiniteMatrixGroup& g, const GModule& m) {
  if (g.modulus() % m.modulus != 0) throw DomainError("module modulus must divide group modulus");
  std::map<std::uint32_t, int> out;
  for (auto [p, k] : factorize(m.modulus)) {
    const auto q = static_cast<std::uint32_t>(ipow(p, static_cast<unsigned>(k)));
    int best = k;
    for (std::uint32_t lam : g.scalar_subgroup()) {
      std::uint32_t d = (lam % q + q - 1) % q;
      int v = d == 0 ? k : std::min(k, valuation_of(d, p));
      best = std::min(best, v);
    }
    out[static_cast<std::uint32_t>(p)] = best;
  }
  return out;
}

std::uint64_t torsion_injection_order(const FiniteMatrixGroup& g, std::uint32_t n) {
  const std::uint64_t n2 = static_cast<std::uint64_t>(n) * n;
  if (n < 2 || g.modulus() % n2 != 0) throw DomainError("group must act on (Z/N^2)^2");
  if (n2 * n2 > (std::uint64_t{1} << 24)) throw CapExceeded("fixed-point enumeration too large");
  std::vector<Mat2> gens;
  for (const Mat2& s : g.generators()) gens.push_back(s.reduce(static_cast<std::uint32_t>(n2)));
  std::uint64_t fixed = 0;
  std::vector<bool> image(n2 * n2, false);
  std::uint64_t image_size = 0;
  for (std::uint32_t x = 0; x < n2; ++x) {
    for (std::uint32_t y = 0; y < n2; ++y) {
      bool ok = std::all_of(gens.begin(), gens.end(), [&](const Mat2& s) {
        auto v = s.apply(x, y);
        return v[0] == x && v[1] == y;
      });
      if (!ok) continue;
      ++fixed;
      std::uint64_t key = (static_cast<std::uint64_t>(x) * n % n2) * n2 + static_cast<std::uint64_t>(y) * n % n2;
      if (!image[key]) {
        image[key] = true;
        ++image_size;
      }
    }
  }
  return fixed / image_size;
}

mpz_class combined_exponent_bound(const std::map<std::uint32_t, int>& n_map,
                                  const std::map<std::uint32_t, int>& m_map,
                                  const std::map<std::uint32_t, int>& a_map) {
  std::map<std::uint32_t, int> total;
  for (const auto* mp : {&n_map, &m_map, &a_map}) {
    for (auto [p, e] : *mp) {
      if (e < 0) throw DomainError("exponents must be non-negative");
      if (!is_prime(p)) throw DomainError("exponent maps are keyed by primes");
      total[p] += e;
    }
  }
  mpz_class r = 1;
  for (auto [p, e] : total) {
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), p, static_cast<unsigned long>(e));
    r *= t;
  }
  return r;
}

}  // namespace galimage
