#include "galimage/scalars.hpp"

#include <algorithm>
#include <set>

#include "galimage/errors.hpp"
#include "galimage/fp2.hpp"

namespace galimage {

namespace {

struct Level {
  std::uint32_t p;
  int k;
};

Level odd_level(std::uint32_t modulus, const char* what) {
  ResidueRing r = ResidueRing::ell_adic_of(modulus);
  if (r.prime() == 2) throw DomainError(what);
  return {r.prime(), r.level()};
}

std::uint64_t unit_count(std::uint32_t p, int k) {
  return ipow(p, static_cast<unsigned>(k - 1)) * (p - 1);
}

bool full_determinant(const FiniteMatrixGroup& g, std::uint32_t p, int k) {
  return g.determinant_image().size() == unit_count(p, k);
}

int min_scalar_valuation(const FiniteMatrixGroup& g, std::uint32_t p, int k) {
  int best = k;
  const std::uint32_t n = g.modulus();
  for (std::uint32_t lam : g.scalar_subgroup()) {
    std::uint32_t d = (lam + n - 1) % n;
    if (d != 0) best = std::min(best, valuation_of(d, p));
  }
  return best;
}

std::string scalar_list(const FiniteMatrixGroup& g) {
  std::string s;
  for (std::uint32_t lam : g.scalar_subgroup()) s += (s.empty() ? "" : ",") + std::to_string(lam);
  return s;
}

std::uint64_t unit_order(std::uint64_t u, std::uint64_t n) {
  std::uint64_t x = u % n, t = 1;
  while (x != 1 % n) {
    x = x * u % n;
    ++t;
  }
  return t;
}

/// Line index: t in [0, p) is [1:t], p is [0:1].
std::uint32_t line_image(const Mat2& g, std::uint32_t line) {
  const std::uint32_t p = g.modulus();
  auto v = line == p ? g.apply(0, 1) : g.apply(1, line);
  if (v[0] == 0) return p;
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(v[1]) * inv_mod(v[0], p) % p);
}

Fp2::Elem ext_line_image(const Mat2& g, const Fp2& F, Fp2::Elem t) {
  Fp2::Elem num = F.add(F.from(g.c()), F.mul(F.from(g.d()), t));
  Fp2::Elem den = F.add(F.from(g.a()), F.mul(F.from(g.b()), t));
  return F.mul(num, F.inv(den));
}

/// Elements of G (mod p) preserving a line pair: those fixing both lines and those swapping them.
struct PairCount {
  std::size_t fixing = 0;
  std::size_t swapping = 0;
};

template <class Image>
PairCount count_pair(const FiniteMatrixGroup& gl, Image image) {
  PairCount c;
  for (const Mat2& m : gl.elements()) {
    int r = image(m);
    if (r == 1) ++c.fixing;
    if (r == 2) ++c.swapping;
  }
  return c;
}

struct CartanSearch {
  bool split_normalizer = false;
  bool nonsplit_normalizer = false;
  bool nonsplit_cubes = false;
  std::string witness;
};

CartanSearch search_cartans(const FiniteMatrixGroup& gl) {
  const std::uint32_t p = gl.modulus();
  const std::size_t split_order = 2 * static_cast<std::size_t>(p - 1) * (p - 1);
  const std::size_t ns_cartan = static_cast<std::size_t>(p) * p - 1;
  CartanSearch out;
  for (std::uint32_t l1 = 0; l1 <= p && !out.split_normalizer; ++l1) {
    for (std::uint32_t l2 = l1 + 1; l2 <= p; ++l2) {
      auto image = [&](const Mat2& m) {
        std::uint32_t i1 = line_image(m, l1), i2 = line_image(m, l2);
        if (i1 == l1 && i2 == l2) return 1;
        if (i1 == l2 && i2 == l1) return 2;
        return 0;
      };
      // Only the stabilizer of the pair can contain the whole normalizer.
      std::size_t fix = 0;
      for (const Mat2& m : gl.elements()) fix += image(m) != 0;
      if (fix == split_order) {
        out.split_normalizer = true;
        out.witness = "normalizer of the split Cartan fixing lines " + std::to_string(l1) + ", " +
                      std::to_string(l2) + " (" + std::to_string(p) + " means [0:1])";
        break;
      }
    }
  }
  if (out.split_normalizer) return out;
  Fp2 F(p);
  for (std::uint32_t x = 0; x < p; ++x) {
    for (std::uint32_t y = 1; y < p; ++y) {
      Fp2::Elem t{x, y};
      Fp2::Elem tc = F.frobenius(t);
      if (std::tie(tc.x, tc.y) < std::tie(t.x, t.y)) continue;
      PairCount c = count_pair(gl, [&](const Mat2& m) {
        Fp2::Elem im = ext_line_image(m, F, t);
        if (im == t) return 1;
        if (im == tc) return 2;
        return 0;
      });
      std::string where = "t = " + std::to_string(x) + " + " + std::to_string(y) + "r, r^2 = " +
                          std::to_string(F.nonresidue());
      if (c.fixing == ns_cartan && c.swapping == ns_cartan) {
        out.nonsplit_normalizer = true;
        out.witness = "normalizer of the nonsplit Cartan fixing [1:t],[1:t^l], " + where;
        return out;
      }
      if (p % 3 == 2 && c.fixing % (ns_cartan / 3) == 0 && c.fixing > 0 && c.swapping > 0) {
        out.nonsplit_cubes = true;
        out.witness = "cube subgroup of the nonsplit Cartan normalizer at " + where;
      }
    }
  }
  return out;
}

bool anticommutes_with_tau(const Mat2& u) {
  const std::uint32_t p = u.modulus();
  return u.d() == (p - u.a()) % p && u.c() == (p - u.b()) % p;
}

}  // namespace

bool CriterionReport::hypotheses_hold() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(), [](const auto& kv) { return kv.second; });
}

bool normalized_by_c(const FiniteMatrixGroup& g) {
  const Mat2 c = Mat2::diag(g.modulus(), 1, -1);
  return std::all_of(g.generators().begin(), g.generators().end(),
                     [&](const Mat2& s) { return g.contains(c * s * c); });
}

CriterionReport check_scalar_lifting_criterion(const FiniteMatrixGroup& g) {
  auto [p, k] = odd_level(g.modulus(), "criterion requires odd l");
  CriterionReport rep;
  rep.ell = p;
  rep.level = k;
  const FiniteMatrixGroup gl = g.reduce(p);
  rep.hypotheses["det_surjective"] = full_determinant(g, p, k);
  rep.hypotheses["ell_coprime_to_order_mod_ell"] = gl.order() % p != 0;
  rep.hypotheses["tau_mod_ell"] = gl.contains(Mat2(p, 0, 1, 1, 0));
  bool good = false;
  for (const Mat2& u : gl.elements()) {
    if (anticommutes_with_tau(u)) {
      rep.witnesses["good_element"] = u.to_string() + " anticommutes with tau";
      good = true;
      break;
    }
    if (u.is_diagonal() && u.a() != u.d()) {
      rep.witnesses["good_element"] = u.to_string() + " diagonal with distinct entries";
      good = true;
      break;
    }
  }
  rep.hypotheses["good_element_mod_ell"] = good;
  rep.hypotheses["all_scalars_mod_ell"] = gl.scalar_subgroup().size() == p - 1;

  const std::uint32_t n = g.modulus();
  rep.conclusions["contains_one_plus_ell"] = g.contains(Mat2::scalar(n, 1 + p));
  bool teich = true;
  const ResidueRing ring = ResidueRing::ell_adic(p, k);
  for (std::uint32_t lam : gl.scalar_subgroup()) {
    ResidueInt lift = teichmuller_lift(ResidueInt(ring, lam));
    teich = teich && g.contains(Mat2::scalar(n, lift.value()));
  }
  rep.conclusions["teichmuller_lifts_present"] = teich;
  rep.conclusions["contains_all_units"] = g.scalar_subgroup().size() == unit_count(p, k);
  rep.witnesses["scalars"] = scalar_list(g);
  rep.min_scalar_valuation = min_scalar_valuation(g, p, k);
  return rep;
}

CriterionReport check_cartan_scalar_criterion(const FiniteMatrixGroup& g) {
  auto [p, k] = odd_level(g.modulus(), "criterion requires odd l");
  CriterionReport rep;
  rep.ell = p;
  rep.level = k;
  const FiniteMatrixGroup gl = g.reduce(p);
  CartanSearch cs = search_cartans(gl);
  const bool normalizer = cs.split_normalizer || cs.nonsplit_normalizer;
  rep.hypotheses["det_surjective"] = full_determinant(g, p, k);
  rep.hypotheses["contains_cartan_normalizer"] = normalizer;
  rep.hypotheses["ell_three_excluded_when_dividing_order"] = !(p == 3 && gl.order() % 3 == 0);
  rep.hypotheses["contains_nonsplit_cube_subgroup"] = p % 3 == 2 && (cs.nonsplit_cubes || cs.nonsplit_normalizer);
  if (!cs.witness.empty()) rep.witnesses["cartan"] = cs.witness;
  const bool branch1 = normalizer && rep.hypotheses["ell_three_excluded_when_dividing_order"];
  const bool branch2 = rep.hypotheses["contains_nonsplit_cube_subgroup"];
  rep.applicable = branch1 || branch2;
  rep.conclusions["contains_all_units"] = g.scalar_subgroup().size() == unit_count(p, k);
  rep.witnesses["scalars"] = scalar_list(g);
  rep.min_scalar_valuation = min_scalar_valuation(g, p, k);
  return rep;
}

bool check_surjective_lift(const FiniteMatrixGroup& g) {
  ResidueRing r = ResidueRing::ell_adic_of(g.modulus());
  const std::uint32_t p = r.prime();
  const int k = r.level();
  if (p < 5) throw DomainError("criterion requires l >= 5");
  const FiniteMatrixGroup gl = g.reduce(p);
  if (!full_determinant(g, p, k)) return false;
  if (gl.order() % p != 0) return false;
  if (irreducibility_report(gl) == Irreducibility::kReducible) return false;
  const std::uint64_t gl2_order = ipow(p, static_cast<unsigned>(4 * (k - 1))) *
                                  (static_cast<std::uint64_t>(p) * p - 1) * (static_cast<std::uint64_t>(p) * p - p);
  return g.order() == gl2_order;
}

KeyLemmaTrace key_lemma_trace(const Mat2& m, std::size_t steps) {
  auto [p, n] = odd_level(m.modulus(), "key lemma requires odd p");
  if (!m.is_invertible()) throw DomainError("matrix must be invertible");
  const std::uint32_t N = m.modulus();
  const std::uint64_t inv2 = inv_mod(2, N);
  const Mat2 c = Mat2::diag(N, 1, -1);
  KeyLemmaTrace tr;
  tr.p = p;
  tr.n = n;
  const std::size_t count = std::max(steps, static_cast<std::size_t>(n) + 1);
  Mat2 cur = m;
  std::uint64_t mu = 1;
  for (std::size_t i = 0; i < count; ++i) {
    KeyLemmaStep s;
    s.m = cur;
    s.lambda = static_cast<std::uint32_t>((static_cast<std::uint64_t>(cur.a()) + cur.d()) % N * inv2 % N);
    std::uint64_t half = (static_cast<std::uint64_t>(cur.a()) + N - cur.d()) % N * inv2 % N;
    s.d = Mat2::diag(N, static_cast<std::int64_t>(half), -static_cast<std::int64_t>(half));
    s.a = Mat2(N, 0, cur.b(), cur.c(), 0);
    s.mu = static_cast<std::uint32_t>(mu);
    mu = mu * 2 % N * s.lambda % N;
    tr.steps.push_back(s);
    cur = cur * c * cur * c;
  }
  tr.recurrences_hold = true;
  tr.mu_units = true;
  tr.det_subgroup_invariant = true;
  tr.diagonal_from_n = true;
  const std::uint64_t det_order = unit_order(m.det(), N);
  for (std::size_t i = 0; i < tr.steps.size(); ++i) {
    const KeyLemmaStep& s = tr.steps[i];
    if (s.m.is_diagonal() && !tr.first_diagonal) tr.first_diagonal = i;
    if (i >= static_cast<std::size_t>(n) && !s.m.is_diagonal()) tr.diagonal_from_n = false;
    if (gcd_u64(s.mu, p) != 1) tr.mu_units = false;
    if (s.d != tr.steps[0].d.scaled(s.mu)) tr.recurrences_hold = false;
    if (unit_order(s.m.det(), N) != det_order) tr.det_subgroup_invariant = false;
    if (i + 1 < tr.steps.size()) {
      const KeyLemmaStep& t = tr.steps[i + 1];
      if (t.d != s.d.scaled(2 * static_cast<std::int64_t>(s.lambda))) tr.recurrences_hold = false;
      if (t.a != s.a * s.d - s.d * s.a) tr.recurrences_hold = false;
    }
  }
  return tr;
}

std::vector<LieSlice> lie_slices(const FiniteMatrixGroup& h) {
  auto [p, n] = odd_level(h.modulus(), "slices require odd p");
  if (!normalized_by_c(h)) throw DomainError("slice decomposition requires C-stability");
  std::vector<LieSlice> out;
  for (int i = 1; i < n; ++i) {
    const auto qi = static_cast<std::uint32_t>(ipow(p, static_cast<unsigned>(i)));
    const std::uint32_t qn = qi * p;
    const FiniteMatrixGroup top = h.reduce(qn);
    std::set<Mat2> vals;
    for (const Mat2& x : top.elements()) {
      if (!x.reduce(qi).is_identity()) continue;
      Mat2 y = x - Mat2::identity(qn);
      vals.insert(Mat2(p, y.a() / qi, y.b() / qi, y.c() / qi, y.d() / qi));
    }
    LieSlice s;
    s.level = i;
    s.elements.assign(vals.begin(), vals.end());
    for (const Mat2& v : s.elements) {
      if (v.is_diagonal()) s.diagonal.push_back(v);
      if (v.a() == 0 && v.d() == 0) s.antidiagonal.push_back(v);
    }
    auto dim = [p](std::size_t size) {
      int d = 0;
      while (size > 1) {
        size /= p;
        ++d;
      }
      return d;
    };
    s.dimension = dim(s.elements.size());
    s.diagonal_dimension = dim(s.diagonal.size());
    s.antidiagonal_dimension = dim(s.antidiagonal.size());
    out.push_back(std::move(s));
  }
  return out;
}

CriterionReport check_pro_p_scalar_criterion(const FiniteMatrixGroup& h, int k) {
  auto [p, n] = odd_level(h.modulus(), "criterion requires odd p");
  if (k < 1 || k > n) throw DomainError("k must lie between 1 and the working level");
  CriterionReport rep;
  rep.ell = p;
  rep.level = n;
  std::uint64_t ord = h.order();
  while (ord % p == 0) ord /= p;
  rep.hypotheses["p_group"] = ord == 1;
  rep.hypotheses["order_mod_p_is_p"] = h.reduce(p).order() == p;
  const FiniteMatrixGroup hk = h.reduce(static_cast<std::uint32_t>(ipow(p, static_cast<unsigned>(k))));
  const bool upper = std::all_of(hk.generators().begin(), hk.generators().end(),
                                 [](const Mat2& s) { return s.c() == 0; });
  const bool lower = std::all_of(hk.generators().begin(), hk.generators().end(),
                                 [](const Mat2& s) { return s.b() == 0; });
  rep.hypotheses["not_triangular_at_level_k"] = !upper && !lower;
  const auto& dets = h.determinant_image();
  const bool dets_one = std::all_of(dets.begin(), dets.end(), [p = p](std::uint32_t d) { return d % p == 1; });
  rep.hypotheses["det_is_one_mod_p"] = dets_one && dets.size() == ipow(p, static_cast<unsigned>(n - 1));
  rep.hypotheses["normalized_by_c"] = normalized_by_c(h);
  const std::uint32_t N = h.modulus();
  const auto lift = static_cast<std::int64_t>(1 + ipow(p, static_cast<unsigned>(k)));
  rep.conclusions["contains_scalars_one_mod_p_k"] = h.contains(Mat2::scalar(N, lift));
  rep.witnesses["scalars"] = scalar_list(h);
  rep.min_scalar_valuation = min_scalar_valuation(h, p, n);
  return rep;
}

FiniteMatrixGroup cartan_cube_subgroup(const CartanSpec& spec) {
  const FiniteMatrixGroup c = cartan(spec);
  const std::uint32_t p = spec.ell;
  std::vector<Mat2> gens;
  for (const Mat2& s : c.generators()) gens.push_back(s.pow(3));
  gens.push_back(spec.starred ? Mat2(p, 0, 1, 1, 0) : Mat2::diag(p, 1, -1));
  return FiniteMatrixGroup::closure(p, gens);
}

}  // namespace galimage
