#include "galimage/ellkummer.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "galimage/errors.hpp"
#include "galimage/residue.hpp"

namespace galimage {

using poly::QPoly;

namespace {

mpq_class parse_rational(const std::string& s) {
  std::string t;
  for (char c : s) {
    if (c != ' ') t.push_back(c);
  }
  if (t.empty()) throw DomainError("empty rational");
  mpq_class q;
  if (q.set_str(t, 10) != 0) throw DomainError("malformed rational: " + s);
  if (q.get_den() == 0) throw DomainError("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::uint64_t mod_rational(const mpq_class& q, std::uint64_t p) {
  mpz_class num, den;
  mpz_fdiv_r_ui(num.get_mpz_t(), q.get_num_mpz_t(), p);
  mpz_fdiv_r_ui(den.get_mpz_t(), q.get_den_mpz_t(), p);
  if (den == 0) throw DomainError("denominator divisible by p");
  return num.get_ui() * inv_mod(den.get_ui(), p) % p;
}

QPoly q_shift(const QPoly& f) {
  if (f.empty()) return f;
  QPoly r(f.size() + 1);
  for (std::size_t i = 0; i < f.size(); ++i) r[i + 1] = f[i];
  return r;
}

QPoly q_pow(const QPoly& f, int e) {
  QPoly r{1};
  for (int i = 0; i < e; ++i) r = poly::mul(r, f);
  return r;
}

}  // namespace

EllipticCurve::EllipticCurve(mpq_class a1, mpq_class a2, mpq_class a3, mpq_class a4, mpq_class a6)
    : a1_(std::move(a1)), a2_(std::move(a2)), a3_(std::move(a3)), a4_(std::move(a4)), a6_(std::move(a6)) {
  b2_ = a1_ * a1_ + 4 * a2_;
  b4_ = 2 * a4_ + a1_ * a3_;
  b6_ = a3_ * a3_ + 4 * a6_;
  b8_ = a1_ * a1_ * a6_ + 4 * a2_ * a6_ - a1_ * a3_ * a4_ + a2_ * a3_ * a3_ - a4_ * a4_;
  disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
  if (disc_ == 0) throw DomainError("singular curve");
}

bool EllipticCurve::is_integral() const {
  for (const auto* a : {&a1_, &a2_, &a3_, &a4_, &a6_}) {
    if (a->get_den() != 1) return false;
  }
  return true;
}

std::string EllipticCurve::to_string() const {
  std::ostringstream os;
  os << "[" << a1_ << "," << a2_ << "," << a3_ << "," << a4_ << "," << a6_ << "]";
  return os.str();
}

bool EllipticCurve::contains(const RationalPoint& p) const {
  if (p.infinity) return true;
  const mpq_class lhs = p.y * p.y + a1_ * p.x * p.y + a3_ * p.y;
  const mpq_class rhs = p.x * p.x * p.x + a2_ * p.x * p.x + a4_ * p.x + a6_;
  return lhs == rhs;
}

RationalPoint EllipticCurve::negate(const RationalPoint& p) const {
  if (p.infinity) return p;
  mpq_class y = -p.y - a1_ * p.x - a3_;
  return RationalPoint{p.x, y, false};
}

RationalPoint EllipticCurve::add(const RationalPoint& p, const RationalPoint& q) const {
  if (!contains(p) || !contains(q)) throw DomainError("point not on curve");
  if (p.infinity) return q;
  if (q.infinity) return p;
  mpq_class lambda, nu;
  if (p.x == q.x) {
    if (p.y + q.y + a1_ * q.x + a3_ == 0) return RationalPoint::at_infinity();
    const mpq_class den = 2 * p.y + a1_ * p.x + a3_;
    lambda = (3 * p.x * p.x + 2 * a2_ * p.x + a4_ - a1_ * p.y) / den;
    nu = (-p.x * p.x * p.x + a4_ * p.x + 2 * a6_ - a3_ * p.y) / den;
  } else {
    lambda = (q.y - p.y) / (q.x - p.x);
    nu = (p.y * q.x - q.y * p.x) / (q.x - p.x);
  }
  mpq_class x3 = lambda * lambda + a1_ * lambda - a2_ - p.x - q.x;
  mpq_class y3 = -(lambda + a1_) * x3 - nu - a3_;
  return RationalPoint{x3, y3, false};
}

RationalPoint EllipticCurve::multiply(const RationalPoint& p, long n) const {
  if (!contains(p)) throw DomainError("point not on curve");
  RationalPoint base = n < 0 ? negate(p) : p;
  unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  RationalPoint acc = RationalPoint::at_infinity();
  while (k > 0) {
    if (k & 1) acc = add(acc, base);
    base = add(base, base);
    k >>= 1;
  }
  return acc;
}

int EllipticCurve::torsion_order(const RationalPoint& p) const {
  if (!contains(p)) throw DomainError("point not on curve");
  RationalPoint q = p;
  for (int n = 1; n <= 12; ++n) {
    if (q.infinity) return n;
    q = add(q, p);
  }
  return 0;
}

EllipticCurve parse_curve(const std::string& text) {
  auto parts = split(text, ',');
  if (parts.size() != 5) throw DomainError("curve needs five coefficients a1,a2,a3,a4,a6");
  return EllipticCurve(parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2]),
                       parse_rational(parts[3]), parse_rational(parts[4]));
}

RationalPoint parse_point(const std::string& text) {
  auto parts = split(text, ',');
  if (parts.size() != 2) throw DomainError("point needs two coordinates x,y");
  return RationalPoint{parse_rational(parts[0]), parse_rational(parts[1]), false};
}

bool has_good_reduction(const EllipticCurve& e, std::uint64_t p) {
  for (const auto* a : {&e.a1(), &e.a2(), &e.a3(), &e.a4(), &e.a6()}) {
    if (mpz_divisible_ui_p(a->get_den_mpz_t(), p)) return false;
  }
  const mpq_class& d = e.discriminant();
  return !mpz_divisible_ui_p(d.get_num_mpz_t(), p);
}

ReducedCurve::ReducedCurve(const EllipticCurve& e, std::uint64_t p) : p_(p) {
  if (!is_prime(p) || p >= (std::uint64_t{1} << 31)) throw DomainError("p must be a prime below 2^31");
  if (!has_good_reduction(e, p)) throw DomainError("bad reduction at p");
  a1_ = mod_rational(e.a1(), p);
  a2_ = mod_rational(e.a2(), p);
  a3_ = mod_rational(e.a3(), p);
  a4_ = mod_rational(e.a4(), p);
  a6_ = mod_rational(e.a6(), p);
}

bool ReducedCurve::contains(const FpPoint& q) const {
  if (q.inf) return true;
  const std::uint64_t p = p_;
  const std::uint64_t lhs = (q.y * q.y + a1_ * q.x % p * q.y + a3_ * q.y) % p;
  const std::uint64_t rhs = (q.x * q.x % p * q.x + a2_ * q.x % p * q.x + a4_ * q.x + a6_) % p;
  return lhs == rhs;
}

std::vector<FpPoint> ReducedCurve::points() const {
  std::vector<FpPoint> out{FpPoint{0, 0, true}};
  for (std::uint64_t x = 0; x < p_; ++x) {
    for (std::uint64_t y = 0; y < p_; ++y) {
      FpPoint q{x, y, false};
      if (contains(q)) out.push_back(q);
    }
  }
  return out;
}

FpPoint ReducedCurve::add(const FpPoint& q, const FpPoint& r) const {
  if (q.inf) return r;
  if (r.inf) return q;
  const std::uint64_t p = p_;
  auto sub = [p](std::uint64_t a, std::uint64_t b) { return (a + p - b % p) % p; };
  std::uint64_t lambda, nu;
  if (q.x == r.x) {
    if ((q.y + r.y + a1_ * r.x + a3_) % p == 0) return FpPoint{0, 0, true};
    const std::uint64_t den = inv_mod((2 * q.y + a1_ * q.x + a3_) % p, p);
    const std::uint64_t num = sub((3 * q.x % p * q.x + 2 * a2_ * q.x + a4_) % p, a1_ * q.y);
    lambda = num * den % p;
    const std::uint64_t num2 = sub((a4_ * q.x + 2 * a6_) % p, (q.x * q.x % p * q.x + a3_ * q.y) % p);
    nu = num2 * den % p;
  } else {
    const std::uint64_t den = inv_mod(sub(r.x, q.x), p);
    lambda = sub(r.y, q.y) * den % p;
    nu = sub(q.y * r.x % p, r.y * q.x % p) * den % p;
  }
  const std::uint64_t x3 = sub(sub(sub((lambda * lambda + a1_ * lambda) % p, a2_), q.x), r.x);
  const std::uint64_t y3 = sub(sub(p - (lambda + a1_) % p * x3 % p, nu), a3_) % p;
  return FpPoint{x3, y3, false};
}

FpPoint ReducedCurve::multiply(const FpPoint& q, std::uint64_t n) const {
  FpPoint acc{0, 0, true}, base = q;
  while (n > 0) {
    if (n & 1) acc = add(acc, base);
    base = add(base, base);
    n >>= 1;
  }
  return acc;
}

DivisionPolynomialSet division_polynomials(const EllipticCurve& e, int n_max, int cap) {
  if (n_max < 1) throw DomainError("n_max must be positive");
  if (n_max > cap) throw CapExceeded("division polynomial index beyond cap");
  DivisionPolynomialSet s;
  s.n_max = n_max;
  const mpq_class &b2 = e.b2(), &b4 = e.b4(), &b6 = e.b6(), &b8 = e.b8();
  const QPoly F{b6, 2 * b4, b2, 4};
  const QPoly F2 = poly::mul(F, F);
  s.two_torsion = F;
  const int top = std::max(n_max + 1, 4);
  std::vector<QPoly> f(static_cast<std::size_t>(top + 1));
  f[0] = {};
  f[1] = {1};
  f[2] = {1};
  f[3] = {b8, 3 * b6, 3 * b4, b2, 3};
  f[4] = {b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2};
  for (auto& x : f) poly::trim(x);
  for (int n = 5; n <= top; ++n) {
    const int m = n / 2;
    auto at = [&f](int i) -> const QPoly& { return f[static_cast<std::size_t>(i)]; };
    if (n % 2 == 1) {
      const QPoly t1 = poly::mul(at(m + 2), q_pow(at(m), 3));
      const QPoly t2 = poly::mul(at(m - 1), q_pow(at(m + 1), 3));
      f[static_cast<std::size_t>(n)] =
          m % 2 == 0 ? poly::sub(poly::mul(F2, t1), t2) : poly::sub(t1, poly::mul(F2, t2));
    } else {
      const QPoly t1 = poly::mul(at(m + 2), q_pow(at(m - 1), 2));
      const QPoly t2 = poly::mul(at(m - 2), q_pow(at(m + 1), 2));
      f[static_cast<std::size_t>(n)] = poly::mul(at(m), poly::sub(t1, t2));
    }
  }
  s.f = f;
  s.psi_sq.resize(static_cast<std::size_t>(n_max + 1));
  s.phi.resize(static_cast<std::size_t>(n_max + 1));
  for (int m = 0; m <= n_max; ++m) {
    const auto i = static_cast<std::size_t>(m);
    const QPoly sq = poly::mul(f[i], f[i]);
    s.psi_sq[i] = m % 2 == 0 ? poly::mul(F, sq) : sq;
    if (m == 0) continue;
    QPoly cross = poly::mul(f[i + 1], f[i - 1]);
    if (m % 2 == 1) cross = poly::mul(F, cross);
    s.phi[i] = poly::sub(q_shift(s.psi_sq[i]), cross);
  }
  return s;
}

std::uint64_t eval_mod_p(const QPoly& f, std::uint64_t x, std::uint64_t p) {
  std::uint64_t r = 0;
  for (std::size_t i = f.size(); i-- > 0;) r = (r * x + mod_rational(f[i], p)) % p;
  return r;
}

KummerReport kummer_divisibility(const EllipticCurve& e, const RationalPoint& p, std::uint32_t ell,
                                 int degree_cap, std::uint64_t seed) {
  if (ell == 2) throw DomainError("unsupported: l = 2 needs the 2-division field itself");
  if (!is_prime(ell)) throw DomainError("l must be an odd prime");
  if (!e.contains(p)) throw DomainError("point not on curve");
  if (p.infinity || e.torsion_order(p) != 0) throw DomainError("point is torsion");
  const auto l2 = static_cast<int>(ell * ell);
  if (l2 > degree_cap) throw CapExceeded("degree beyond configured factorization range");
  const auto s = division_polynomials(e, static_cast<int>(ell), std::max(kDefaultDivisionCap, static_cast<int>(ell)));
  QPoly scaled = s.psi_sq[ell];
  for (auto& c : scaled) c *= p.x;
  KummerReport r;
  r.ell = ell;
  r.g = poly::to_primitive_z(poly::sub(s.phi[ell], scaled));
  r.factorization = poly::factor_over_z(r.g, degree_cap, seed);
  r.factor_degrees = r.factorization.degrees();
  const poly::ZFactor* best = nullptr;
  for (const auto& fac : r.factorization.factors) {
    if (!best || fac.poly.size() < best->poly.size()) best = &fac;
  }
  if (best) {
    r.witness = best->poly;
    r.verdict = 2 * poly::degree(best->poly) < l2;
  }
  return r;
}

std::vector<KummerFixture> load_kummer_fixtures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open fixtures file: " + path);
  std::vector<KummerFixture> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string label, a[5], x, y;
    std::uint32_t ell = 0;
    int cm = 0;
    if (!(ls >> label >> a[0] >> a[1] >> a[2] >> a[3] >> a[4] >> x >> y >> ell >> cm)) {
      throw DomainError("malformed fixture row: " + line);
    }
    EllipticCurve curve(parse_rational(a[0]), parse_rational(a[1]), parse_rational(a[2]), parse_rational(a[3]),
                        parse_rational(a[4]));
    RationalPoint pt{parse_rational(x), parse_rational(y), false};
    if (!curve.contains(pt)) throw DomainError("fixture point not on curve: " + label);
    out.push_back(KummerFixture{label, curve, pt, ell, cm != 0});
  }
  return out;
}

std::vector<KummerFixture> default_kummer_fixtures() {
  return load_kummer_fixtures(std::string(GALIMAGE_DATA_DIR) + "/kummer_fixtures.txt");
}

}  // namespace galimage
