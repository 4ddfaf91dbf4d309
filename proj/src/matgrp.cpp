#include "galimage/matgrp.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "galimage/errors.hpp"
#include "galimage/fp2.hpp"

namespace galimage {

namespace {

std::vector<std::uint64_t> closure_keys(std::uint32_t modulus, const std::vector<Mat2>& gens,
                                        std::size_t cap) {
  if (modulus >= (1u << 16)) throw DomainError("closure modulus must be below 65536");
  std::vector<Mat2> frontier{Mat2::identity(modulus)};
  std::unordered_set<std::uint64_t> seen;
  seen.insert(frontier[0].key());
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    const Mat2 x = frontier[i];
    for (const Mat2& s : gens) {
      Mat2 y = x * s;
      if (seen.insert(y.key()).second) {
        if (seen.size() > cap) throw CapExceeded("closure too large");
        frontier.push_back(y);
      }
    }
  }
  std::vector<std::uint64_t> keys(seen.begin(), seen.end());
  std::sort(keys.begin(), keys.end());
  return keys;
}

void check_generators(std::uint32_t modulus, const std::vector<Mat2>& gens) {
  for (const Mat2& g : gens) {
    if (g.modulus() != modulus) throw DomainError("generator modulus mismatch");
    if (!g.is_invertible()) throw DomainError("singular generator");
  }
}

}  // namespace

FiniteMatrixGroup FiniteMatrixGroup::closure(std::uint32_t modulus, const std::vector<Mat2>& gens,
                                             std::size_t cap) {
  if (modulus < 2) throw DomainError("modulus must be at least 2");
  check_generators(modulus, gens);
  return from_closed(modulus, gens, closure_keys(modulus, gens, cap));
}

FiniteMatrixGroup FiniteMatrixGroup::from_closed(std::uint32_t modulus, std::vector<Mat2> gens,
                                                 std::vector<std::uint64_t> sorted_keys) {
  FiniteMatrixGroup g;
  g.modulus_ = modulus;
  g.gens_ = std::move(gens);
  g.keys_ = std::move(sorted_keys);
  g.finish();
  return g;
}

FiniteMatrixGroup FiniteMatrixGroup::from_elements(std::uint32_t modulus,
                                                   std::vector<Mat2> elements) {
  check_generators(modulus, elements);
  std::vector<std::uint64_t> keys;
  keys.reserve(elements.size());
  for (const Mat2& e : elements) keys.push_back(e.key());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<Mat2> gens;
  std::vector<std::uint64_t> current{Mat2::identity(modulus).key()};
  for (std::uint64_t k : keys) {
    if (std::binary_search(current.begin(), current.end(), k)) continue;
    gens.push_back(Mat2::from_key(modulus, k));
    current = closure_keys(modulus, gens, keys.size());
    if (current.size() == keys.size()) break;
  }
  if (current != keys) throw DomainError("element set is not a group");
  return from_closed(modulus, std::move(gens), std::move(keys));
}

void FiniteMatrixGroup::finish() {
  elems_.clear();
  elems_.reserve(keys_.size());
  scalars_.clear();
  std::vector<bool> det_seen(modulus_, false);
  for (std::uint64_t k : keys_) {
    Mat2 m = Mat2::from_key(modulus_, k);
    if (m.is_scalar()) scalars_.push_back(m.a());
    det_seen[m.det()] = true;
    elems_.push_back(m);
  }
  std::sort(scalars_.begin(), scalars_.end());
  dets_.clear();
  for (std::uint32_t x = 0; x < modulus_; ++x) {
    if (det_seen[x]) dets_.push_back(x);
  }
}

bool FiniteMatrixGroup::contains(const Mat2& g) const { return find(g).has_value(); }

std::optional<std::size_t> FiniteMatrixGroup::find(const Mat2& g) const {
  if (g.modulus() != modulus_) return std::nullopt;
  auto it = std::lower_bound(keys_.begin(), keys_.end(), g.key());
  if (it == keys_.end() || *it != g.key()) return std::nullopt;
  return static_cast<std::size_t>(it - keys_.begin());
}

std::size_t FiniteMatrixGroup::index_of(const Mat2& g) const {
  auto i = find(g);
  if (!i) throw DomainError("element not in group");
  return *i;
}

bool FiniteMatrixGroup::is_subgroup_of(const FiniteMatrixGroup& other) const {
  if (other.modulus_ != modulus_) return false;
  return std::includes(other.keys_.begin(), other.keys_.end(), keys_.begin(), keys_.end());
}

FiniteMatrixGroup FiniteMatrixGroup::reduce(std::uint32_t divisor) const {
  if (divisor == modulus_) return *this;
  std::vector<Mat2> gens;
  for (const Mat2& g : gens_) gens.push_back(g.reduce(divisor));
  return closure(divisor, gens);
}

FiniteMatrixGroup FiniteMatrixGroup::kernel_of_reduction(std::uint32_t divisor) const {
  if (divisor == 0 || modulus_ % divisor != 0) throw DomainError("reduction modulus must divide modulus");
  std::vector<Mat2> ker;
  for (const Mat2& g : elems_) {
    if (divisor == 1 || g.reduce(divisor).is_identity()) ker.push_back(g);
  }
  return from_elements(modulus_, std::move(ker));
}

FiniteMatrixGroup FiniteMatrixGroup::intersect_sl2() const {
  std::vector<Mat2> out;
  for (const Mat2& g : elems_) {
    if (g.det() == 1) out.push_back(g);
  }
  return from_elements(modulus_, std::move(out));
}

std::string FiniteMatrixGroup::to_text() const {
  std::ostringstream os;
  os << "modulus=" << modulus_ << "; gens=";
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (i) os << " | ";
    const auto& e = gens_[i].entries();
    os << e[0] << "," << e[1] << "," << e[2] << "," << e[3];
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

std::int64_t parse_int(const std::string& s) {
  std::string t = trim(s);
  if (t.empty()) throw DomainError("empty integer in group text");
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(t, &pos);
  } catch (const std::exception&) {
    throw DomainError("bad integer in group text: " + t);
  }
  if (pos != t.size()) throw DomainError("bad integer in group text: " + t);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::pair<std::uint32_t, std::vector<Mat2>> parse_group_text(const std::string& text) {
  auto parts = split(text, ';');
  if (parts.size() != 2) throw DomainError("group text needs `modulus=N; gens=...`");
  std::string mod_part = trim(parts[0]);
  std::string gen_part = trim(parts[1]);
  if (mod_part.rfind("modulus=", 0) != 0) throw DomainError("group text must start with modulus=");
  if (gen_part.rfind("gens=", 0) != 0) throw DomainError("group text needs gens=");
  std::int64_t n = parse_int(mod_part.substr(8));
  if (n < 2 || n >= (1 << 16)) throw DomainError("group modulus out of range");
  auto modulus = static_cast<std::uint32_t>(n);
  std::vector<Mat2> gens;
  std::string body = trim(gen_part.substr(5));
  if (!body.empty()) {
    for (const std::string& g : split(body, '|')) {
      auto entries = split(g, ',');
      if (entries.size() != 4) throw DomainError("each generator needs four entries");
      gens.emplace_back(modulus, parse_int(entries[0]), parse_int(entries[1]),
                        parse_int(entries[2]), parse_int(entries[3]));
    }
  }
  return {modulus, gens};
}

FiniteMatrixGroup group_from_text(const std::string& text, std::size_t cap) {
  auto [n, gens] = parse_group_text(text);
  return FiniteMatrixGroup::closure(n, gens, cap);
}

std::vector<std::uint32_t> unit_group_generators(std::uint32_t modulus) {
  std::vector<bool> in(modulus, false);
  in[1 % modulus] = true;
  std::vector<std::uint32_t> members{1 % modulus};
  std::vector<std::uint32_t> gens;
  for (std::uint32_t u = 2; u < modulus; ++u) {
    if (gcd_u64(u, modulus) != 1 || in[u]) continue;
    gens.push_back(u);
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::uint32_t s : gens) {
        auto y = static_cast<std::uint32_t>(static_cast<std::uint64_t>(members[i]) * s % modulus);
        if (!in[y]) {
          in[y] = true;
          members.push_back(y);
        }
      }
    }
  }
  return gens;
}

FiniteMatrixGroup gl2(std::uint32_t modulus, std::size_t cap) {
  std::vector<Mat2> gens{Mat2(modulus, 1, 1, 0, 1), Mat2(modulus, 1, 0, 1, 1)};
  for (std::uint32_t u : unit_group_generators(modulus)) gens.push_back(Mat2::diag(modulus, u, 1));
  return FiniteMatrixGroup::closure(modulus, gens, cap);
}

FiniteMatrixGroup sl2(std::uint32_t modulus, std::size_t cap) {
  return FiniteMatrixGroup::closure(modulus, {Mat2(modulus, 1, 1, 0, 1), Mat2(modulus, 1, 0, 1, 1)},
                                    cap);
}

FiniteMatrixGroup borel(std::uint32_t modulus, std::size_t cap) {
  std::vector<Mat2> gens{Mat2(modulus, 1, 1, 0, 1)};
  for (std::uint32_t u : unit_group_generators(modulus)) {
    gens.push_back(Mat2::diag(modulus, u, 1));
    gens.push_back(Mat2::diag(modulus, 1, u));
  }
  return FiniteMatrixGroup::closure(modulus, gens, cap);
}

FiniteMatrixGroup upper_unitriangular(std::uint32_t modulus) {
  return FiniteMatrixGroup::closure(modulus, {Mat2(modulus, 1, 1, 0, 1)});
}

std::vector<Mat2> full_preimage_generators(const FiniteMatrixGroup& g, std::uint32_t modulus) {
  const std::uint32_t low = g.modulus();
  if (low == modulus) return g.generators();
  if (modulus % low != 0) throw DomainError("preimage modulus must be a multiple");
  auto fl = factorize(low);
  auto fh = factorize(modulus);
  if (fl.size() != 1 || fh.size() != 1 || fl[0].first != fh[0].first) {
    throw DomainError("full preimage needs powers of one prime");
  }
  const auto ell = static_cast<std::uint32_t>(fl[0].first);
  std::vector<Mat2> gens;
  for (const Mat2& s : g.generators()) gens.push_back(s.lift_to(modulus));
  for (std::uint64_t t = low; t < modulus; t *= ell) {
    auto ti = static_cast<std::int64_t>(t);
    gens.emplace_back(modulus, 1 + ti, 0, 0, 1);
    gens.emplace_back(modulus, 1, ti, 0, 1);
    gens.emplace_back(modulus, 1, 0, ti, 1);
    gens.emplace_back(modulus, 1, 0, 0, 1 + ti);
  }
  return gens;
}

FiniteMatrixGroup full_preimage(const FiniteMatrixGroup& g, std::uint32_t modulus,
                                std::size_t cap) {
  if (g.modulus() == modulus) return g;
  return FiniteMatrixGroup::closure(modulus, full_preimage_generators(g, modulus), cap);
}

// ---------------------------------------------------------------------------

bool is_square_mod(std::uint32_t x, std::uint32_t p) {
  x %= p;
  for (std::uint64_t y = 0; y < p; ++y) {
    if (y * y % p == x) return true;
  }
  return false;
}

std::uint32_t starred_epsilon(std::uint32_t ell, std::uint32_t delta) {
  delta %= ell;
  if (delta == 1) throw DomainError("starred parameter undefined for delta = 1");
  return static_cast<std::uint32_t>((delta + 1) % ell * inv_mod((delta + ell - 1) % ell, ell) % ell);
}

namespace {

void check_cartan_spec(const CartanSpec& spec) {
  if (spec.ell == 2) throw DomainError("Cartan constructors require odd l");
  if (!is_prime(spec.ell)) throw DomainError("Cartan constructors need a prime l");
  if (spec.delta % spec.ell == 0) throw DomainError("Cartan parameter must be a unit");
}

std::vector<Mat2> cartan_elements(const CartanSpec& spec) {
  check_cartan_spec(spec);
  const std::uint32_t p = spec.ell;
  const std::int64_t delta = spec.delta % p;
  std::vector<Mat2> out;
  for (std::int64_t x = 0; x < p; ++x) {
    for (std::int64_t y = 0; y < p; ++y) {
      Mat2 m;
      if (!spec.starred) {
        m = Mat2(p, x, delta * y, y, x);
      } else if (delta == 1) {
        m = Mat2::diag(p, x, y);
      } else {
        std::int64_t eps = starred_epsilon(p, spec.delta);
        m = Mat2(p, x + eps * y, -y, y, x - eps * y);
      }
      if (m.is_invertible()) out.push_back(m);
    }
  }
  return out;
}

}  // namespace

FiniteMatrixGroup cartan(const CartanSpec& spec) {
  return FiniteMatrixGroup::from_elements(spec.ell, cartan_elements(spec));
}

FiniteMatrixGroup cartan_normalizer(const CartanSpec& spec) {
  auto c = cartan_elements(spec);
  const std::uint32_t p = spec.ell;
  Mat2 w = spec.starred ? Mat2(p, 0, 1, 1, 0) : Mat2::diag(p, 1, -1);
  std::vector<Mat2> all = c;
  for (const Mat2& m : c) all.push_back(w * m);
  return FiniteMatrixGroup::from_elements(p, std::move(all));
}

// ---------------------------------------------------------------------------

std::string to_string(DicksonTag tag) {
  switch (tag) {
    case DicksonTag::kContainsSL2: return "contains-SL2";
    case DicksonTag::kBorel: return "Borel";
    case DicksonTag::kCartanNormalizerSplit: return "Cartan-normalizer-split";
    case DicksonTag::kCartanNormalizerNonsplit: return "Cartan-normalizer-nonsplit";
    case DicksonTag::kExceptionalA4: return "exceptional-A4";
    case DicksonTag::kExceptionalS4: return "exceptional-S4";
    case DicksonTag::kExceptionalA5: return "exceptional-A5";
    case DicksonTag::kSubline: return "subline";
  }
  return "unknown";
}

std::string to_string(Irreducibility r) {
  switch (r) {
    case Irreducibility::kReducible: return "reducible";
    case Irreducibility::kIrreducible: return "irreducible";
    case Irreducibility::kAbsolutelyIrreducible: return "absolutely-irreducible";
  }
  return "unknown";
}

std::uint64_t element_order(const Mat2& g) {
  Mat2 x = g;
  std::uint64_t t = 1;
  while (!x.is_identity()) {
    x = x * g;
    ++t;
  }
  return t;
}

std::uint64_t projective_element_order(const Mat2& g) {
  Mat2 x = g;
  std::uint64_t t = 1;
  while (!x.is_scalar()) {
    x = x * g;
    ++t;
  }
  return t;
}

std::size_t projective_order(const FiniteMatrixGroup& g) {
  return g.order() / g.scalar_subgroup().size();
}

std::uint64_t projective_exponent(const FiniteMatrixGroup& g) {
  std::uint64_t e = 1;
  for (const Mat2& m : g.elements()) e = lcm_u64(e, projective_element_order(m));
  return e;
}

namespace {

void require_prime_modulus(const FiniteMatrixGroup& g) {
  if (!is_prime(g.modulus())) throw DomainError("classification defined mod primes only");
}

/// Line index: t in [0, p) is [1:t], p is [0:1].
std::uint32_t line_image(const Mat2& g, std::uint32_t line) {
  const std::uint32_t p = g.modulus();
  std::array<std::uint32_t, 2> v = line == p ? g.apply(0, 1) : g.apply(1, line);
  if (v[0] == 0) return p;
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(v[1]) * inv_mod(v[0], p) % p);
}

bool fixes_ext_line(const Mat2& g, const Fp2& F, Fp2::Elem t) {
  // g [1:t] = [a + b t : c + d t]; a + b t != 0 when t is not rational.
  Fp2::Elem num = F.add(F.from(g.c()), F.mul(F.from(g.d()), t));
  Fp2::Elem den = F.add(F.from(g.a()), F.mul(F.from(g.b()), t));
  return F.mul(num, F.inv(den)) == t;
}

Fp2::Elem ext_line_image(const Mat2& g, const Fp2& F, Fp2::Elem t) {
  Fp2::Elem num = F.add(F.from(g.c()), F.mul(F.from(g.d()), t));
  Fp2::Elem den = F.add(F.from(g.a()), F.mul(F.from(g.b()), t));
  return F.mul(num, F.inv(den));
}

}  // namespace

std::vector<std::array<std::uint32_t, 2>> stable_lines(const FiniteMatrixGroup& g) {
  require_prime_modulus(g);
  const std::uint32_t p = g.modulus();
  std::vector<std::array<std::uint32_t, 2>> out;
  for (std::uint32_t line = 0; line <= p; ++line) {
    bool ok = std::all_of(g.generators().begin(), g.generators().end(),
                          [&](const Mat2& s) { return line_image(s, line) == line; });
    if (ok) out.push_back(line == p ? std::array<std::uint32_t, 2>{0, 1}
                                    : std::array<std::uint32_t, 2>{1, line});
  }
  return out;
}

Irreducibility irreducibility_report(const FiniteMatrixGroup& g) {
  if (!stable_lines(g).empty()) return Irreducibility::kReducible;
  const std::uint32_t p = g.modulus();
  Fp2 F(p);
  for (std::uint32_t x = 0; x < p; ++x) {
    for (std::uint32_t y = 1; y < p; ++y) {
      Fp2::Elem t{x, y};
      bool ok = std::all_of(g.generators().begin(), g.generators().end(),
                            [&](const Mat2& s) { return fixes_ext_line(s, F, t); });
      if (ok) return Irreducibility::kIrreducible;
    }
  }
  return Irreducibility::kAbsolutelyIrreducible;
}

DicksonVerdict dickson_classify(const FiniteMatrixGroup& g) {
  require_prime_modulus(g);
  const std::uint32_t p = g.modulus();
  DicksonVerdict v;
  v.projective_order = projective_order(g);

  if (g.contains(Mat2(p, 1, 1, 0, 1)) && g.contains(Mat2(p, 1, 0, 1, 1))) {
    v.tag = DicksonTag::kContainsSL2;
    v.witness_text = "contains both elementary unipotents";
    return v;
  }
  auto lines = stable_lines(g);
  if (!lines.empty()) {
    v.tag = DicksonTag::kBorel;
    v.witness = {lines[0][0], lines[0][1]};
    v.witness_text = "stable line [" + std::to_string(lines[0][0]) + ":" +
                     std::to_string(lines[0][1]) + "]";
    return v;
  }
  const auto& gens = g.generators();
  for (std::uint32_t l1 = 0; l1 <= p; ++l1) {
    for (std::uint32_t l2 = l1 + 1; l2 <= p; ++l2) {
      bool ok = std::all_of(gens.begin(), gens.end(), [&](const Mat2& s) {
        std::uint32_t i1 = line_image(s, l1), i2 = line_image(s, l2);
        return (i1 == l1 && i2 == l2) || (i1 == l2 && i2 == l1);
      });
      if (ok) {
        v.tag = DicksonTag::kCartanNormalizerSplit;
        v.witness = {l1, l2};
        v.witness_text = "preserved line pair (slopes " + std::to_string(l1) + ", " +
                         std::to_string(l2) + "; " + std::to_string(p) + " means [0:1])";
        return v;
      }
    }
  }
  {
    Fp2 F(p);
    for (std::uint32_t x = 0; x < p; ++x) {
      for (std::uint32_t y = 1; y < p; ++y) {
        Fp2::Elem t{x, y};
        Fp2::Elem tc = F.frobenius(t);
        if (std::tie(tc.x, tc.y) < std::tie(t.x, t.y)) continue;
        bool ok = std::all_of(gens.begin(), gens.end(), [&](const Mat2& s) {
          Fp2::Elem im = ext_line_image(s, F, t);
          return im == t || im == tc;
        });
        if (ok) {
          v.tag = DicksonTag::kCartanNormalizerNonsplit;
          v.witness = {x, y};
          v.witness_text = "preserved conjugate line pair [1:t],[1:t^l] with t = " +
                           std::to_string(x) + " + " + std::to_string(y) + "r, r^2 = " +
                           std::to_string(F.nonresidue());
          return v;
        }
      }
    }
  }
  const std::size_t po = v.projective_order;
  if (po == 12 || po == 24 || po == 60) {
    std::map<std::uint64_t, std::size_t> hist;
    for (const Mat2& m : g.elements()) ++hist[projective_element_order(m)];
    const std::size_t z = g.scalar_subgroup().size();
    for (auto& [k, c] : hist) c /= z;
    using H = std::map<std::uint64_t, std::size_t>;
    const H a4{{1, 1}, {2, 3}, {3, 8}};
    const H s4{{1, 1}, {2, 9}, {3, 8}, {4, 6}};
    const H a5{{1, 1}, {2, 15}, {3, 20}, {5, 24}};
    if (po == 12 && hist == a4) v.tag = DicksonTag::kExceptionalA4;
    else if (po == 24 && hist == s4) v.tag = DicksonTag::kExceptionalS4;
    else if (po == 60 && hist == a5) v.tag = DicksonTag::kExceptionalA5;
    else v.tag = DicksonTag::kSubline;
    v.witness_text = "projective image of order " + std::to_string(po);
    return v;
  }
  v.tag = DicksonTag::kSubline;
  v.witness_text = "projective image of order " + std::to_string(po);
  return v;
}

// ---------------------------------------------------------------------------

namespace {

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
  std::size_t operator()(const Bits& b) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint64_t w : b) h = (h ^ w) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
  }
};

struct FoundSubgroup {
  Bits bits;
  std::vector<std::uint32_t> gens;
  std::vector<std::uint32_t> members;
};

}  // namespace

std::vector<FiniteMatrixGroup> enumerate_subgroups(const FiniteMatrixGroup& g,
                                                   const SubgroupEnumerationOptions& opts) {
  const std::size_t n = g.order();
  if (n > opts.order_cap) throw CapExceeded("enumeration infeasible");
  const auto& el = g.elements();
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint32_t> table(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      table[i * n + j] = static_cast<std::uint32_t>(g.index_of(el[i] * el[j]));
    }
  }
  const auto id = static_cast<std::uint32_t>(g.index_of(Mat2::identity(g.modulus())));
  std::vector<std::uint64_t> ord(n);
  for (std::size_t i = 0; i < n; ++i) ord[i] = element_order(el[i]);

  auto test = [](const Bits& b, std::size_t i) { return (b[i >> 6] >> (i & 63)) & 1; };
  auto set = [](Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); };

  std::vector<FoundSubgroup> subs;
  std::unordered_map<Bits, std::size_t, BitsHash> index;
  {
    FoundSubgroup triv{Bits(words, 0), {}, {id}};
    set(triv.bits, id);
    index.emplace(triv.bits, 0);
    subs.push_back(std::move(triv));
  }
  for (std::size_t qi = 0; qi < subs.size(); ++qi) {
    Bits covered = subs[qi].bits;
    for (std::uint32_t x = 0; x < n; ++x) {
      if (test(covered, x)) continue;
      std::vector<std::uint32_t> gens = subs[qi].gens;
      gens.push_back(x);
      Bits bits(words, 0);
      std::vector<std::uint32_t> members{id};
      set(bits, id);
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::uint32_t s : gens) {
          std::uint32_t y = table[members[i] * n + s];
          if (!test(bits, y)) {
            set(bits, y);
            members.push_back(y);
          }
        }
      }
      // Elements h1 x^j h2 with gcd(j, ord x) = 1 give the same extension.
      std::uint32_t pw = x;
      for (std::uint64_t j = 1; j <= ord[x]; ++j) {
        if (std::gcd(j, ord[x]) == 1) {
          for (std::uint32_t h : subs[qi].members) {
            set(covered, table[h * n + pw]);
            set(covered, table[pw * n + h]);
          }
        }
        pw = table[pw * n + x];
      }
      if (index.find(bits) == index.end()) {
        index.emplace(bits, subs.size());
        std::sort(members.begin(), members.end());
        subs.push_back(FoundSubgroup{std::move(bits), std::move(gens), std::move(members)});
      }
    }
  }

  std::sort(subs.begin(), subs.end(), [](const FoundSubgroup& a, const FoundSubgroup& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  });

  std::vector<FiniteMatrixGroup> out;
  std::unordered_set<Bits, BitsHash> seen_classes;
  const FiniteMatrixGroup& ambient = opts.ambient ? *opts.ambient : g;
  std::vector<std::pair<Mat2, Mat2>> conj;
  if (opts.up_to_conjugacy) {
    for (const Mat2& a : ambient.elements()) conj.emplace_back(a, a.inverse());
  }
  for (const FoundSubgroup& s : subs) {
    std::vector<Mat2> gens;
    std::vector<std::uint64_t> keys;
    for (std::uint32_t i : s.gens) gens.push_back(el[i]);
    for (std::uint32_t i : s.members) keys.push_back(g.keys()[i]);
    FiniteMatrixGroup h = FiniteMatrixGroup::from_closed(g.modulus(), std::move(gens), std::move(keys));
    if (opts.filter && !opts.filter(h)) continue;
    if (opts.up_to_conjugacy) {
      std::vector<std::uint64_t> best;
      for (const auto& [a, ainv] : conj) {
        std::vector<std::uint64_t> ck;
        ck.reserve(h.order());
        for (const Mat2& m : h.elements()) ck.push_back((a * m * ainv).key());
        std::sort(ck.begin(), ck.end());
        if (best.empty() || ck < best) best = std::move(ck);
      }
      if (!seen_classes.insert(best).second) continue;
    }
    out.push_back(std::move(h));
  }
  return out;
}

FiniteMatrixGroup s4_type_group_mod13() {
  const std::uint32_t p = 13;
  return FiniteMatrixGroup::closure(
      p, {Mat2::scalar(p, 2), Mat2::diag(p, 2, 3), Mat2(p, 0, -1, 1, 0), Mat2(p, 1, 1, -1, 1)});
}

bool s4_class_filter(const FiniteMatrixGroup& h) {
  if (h.modulus() != 13) throw DomainError("class filter is defined mod 13");
  if (h.determinant_image().size() != 12) return false;
  bool has_involution = std::any_of(h.elements().begin(), h.elements().end(), [](const Mat2& m) {
    return m.trace() == 0 && (m * m).is_identity();
  });
  if (!has_involution) return false;
  if (projective_exponent(h) < 3) return false;
  return stable_lines(h).empty();
}

}  // namespace galimage
