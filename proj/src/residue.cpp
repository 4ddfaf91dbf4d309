#include "galimage/residue.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>

#include "galimage/errors.hpp"

namespace galimage {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd_u64(a, b) * b;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  if (mod == 1) return 0;
  unsigned __int128 result = 1;
  unsigned __int128 b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t old_r = static_cast<std::int64_t>(a % m), r = static_cast<std::int64_t>(m);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) {
    if (m == 1) return 0;
    throw DomainError("element is not a unit");
  }
  std::int64_t mm = static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(((old_s % mm) + mm) % mm);
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

int valuation_of(std::uint64_t n, std::uint64_t p) {
  if (n == 0) throw DomainError("valuation of zero integer");
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

std::uint32_t reduce_signed(std::int64_t x, std::uint32_t m) {
  std::int64_t mm = m;
  std::int64_t r = x % mm;
  if (r < 0) r += mm;
  return static_cast<std::uint32_t>(r);
}

// ---------------------------------------------------------------------------

ResidueRing::ResidueRing(std::uint64_t modulus) {
  if (modulus < 2) throw DomainError("modulus must be at least 2");
  if (modulus > std::numeric_limits<std::uint32_t>::max()) {
    throw DomainError("modulus must be below 2^32");
  }
  modulus_ = static_cast<std::uint32_t>(modulus);
}

ResidueRing ResidueRing::ell_adic(std::uint32_t ell, int level) {
  if (!is_prime(ell)) throw DomainError("l-adic ring needs a prime l");
  if (level < 1) throw DomainError("l-adic level must be positive");
  std::uint64_t n = 1;
  for (int i = 0; i < level; ++i) {
    n *= ell;
    if (n > std::numeric_limits<std::uint32_t>::max()) {
      throw DomainError("modulus must be below 2^32");
    }
  }
  ResidueRing r(n);
  r.prime_ = ell;
  r.level_ = level;
  return r;
}

ResidueRing ResidueRing::ell_adic_of(std::uint64_t modulus) {
  auto f = factorize(modulus);
  if (f.size() != 1) throw DomainError("modulus is not a prime power");
  return ell_adic(static_cast<std::uint32_t>(f[0].first), f[0].second);
}

std::uint32_t ResidueRing::prime() const {
  if (!is_ell_adic()) throw DomainError("valuation undefined");
  return prime_;
}

int ResidueRing::level() const {
  if (!is_ell_adic()) throw DomainError("valuation undefined");
  return level_;
}

// ---------------------------------------------------------------------------

ResidueInt::ResidueInt(const ResidueRing& ring, std::int64_t value)
    : ring_(ring), value_(reduce_signed(value, ring.modulus())) {}

bool ResidueInt::is_unit() const { return gcd_u64(value_, ring_.modulus()) == 1; }

void ResidueInt::check_same(const ResidueInt& o) const {
  if (!(ring_ == o.ring_)) throw DomainError("operands live in different rings");
}

ResidueInt ResidueInt::operator+(const ResidueInt& o) const {
  check_same(o);
  return ResidueInt(ring_, static_cast<std::int64_t>(value_) + o.value_);
}

ResidueInt ResidueInt::operator-(const ResidueInt& o) const {
  check_same(o);
  return ResidueInt(ring_, static_cast<std::int64_t>(value_) - o.value_);
}

ResidueInt ResidueInt::operator-() const { return ResidueInt(ring_, -static_cast<std::int64_t>(value_)); }

ResidueInt ResidueInt::operator*(const ResidueInt& o) const {
  check_same(o);
  std::uint64_t p = static_cast<std::uint64_t>(value_) * o.value_ % ring_.modulus();
  return ResidueInt(ring_, static_cast<std::int64_t>(p));
}

ResidueInt ResidueInt::pow(std::uint64_t e) const {
  return ResidueInt(ring_, static_cast<std::int64_t>(pow_mod(value_, e, ring_.modulus())));
}

ResidueInt ResidueInt::inverse() const {
  return ResidueInt(ring_, static_cast<std::int64_t>(inv_mod(value_, ring_.modulus())));
}

std::ostream& operator<<(std::ostream& os, const ResidueInt& x) {
  return os << x.value() << " mod " << x.ring().modulus();
}

int valuation(const ResidueInt& x) {
  const ResidueRing& r = x.ring();
  int k = r.level();
  if (x.is_zero()) return k;
  return valuation_of(x.value(), r.prime());
}

ResidueInt teichmuller_lift(const ResidueInt& lambda) {
  const ResidueRing& r = lambda.ring();
  std::uint32_t ell = r.prime();
  if (!lambda.is_unit()) throw DomainError("no Teichmuller lift");
  ResidueInt x = lambda;
  for (int i = 0; i <= r.level() + 1; ++i) {
    ResidueInt y = x.pow(ell);
    if (y == x) return x;
    x = y;
  }
  throw DomainError("Teichmuller iteration did not stabilize");
}

// ---------------------------------------------------------------------------

Mat2::Mat2(std::uint32_t modulus, std::int64_t a, std::int64_t b, std::int64_t c,
           std::int64_t d)
    : n_(modulus),
      e_{reduce_signed(a, modulus), reduce_signed(b, modulus), reduce_signed(c, modulus),
         reduce_signed(d, modulus)} {
  if (modulus < 1) throw DomainError("modulus must be positive");
}

Mat2 Mat2::identity(std::uint32_t modulus) { return Mat2(modulus, 1, 0, 0, 1); }

Mat2 Mat2::scalar(std::uint32_t modulus, std::int64_t lambda) {
  return Mat2(modulus, lambda, 0, 0, lambda);
}

Mat2 Mat2::diag(std::uint32_t modulus, std::int64_t x, std::int64_t y) {
  return Mat2(modulus, x, 0, 0, y);
}

Mat2 Mat2::from_key(std::uint32_t modulus, std::uint64_t key) {
  Mat2 m;
  m.n_ = modulus;
  for (int i = 3; i >= 0; --i) {
    m.e_[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(key % modulus);
    key /= modulus;
  }
  return m;
}

namespace {
inline std::uint32_t mulmod(std::uint64_t x, std::uint64_t y, std::uint64_t n) {
  return static_cast<std::uint32_t>(x * y % n);
}
}  // namespace

Mat2 Mat2::operator*(const Mat2& o) const {
  if (n_ != o.n_) throw DomainError("matrices live in different rings");
  const std::uint64_t n = n_;
  Mat2 r;
  r.n_ = n_;
  r.e_[0] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(e_[0]) * o.e_[0] % n +
                                        static_cast<std::uint64_t>(e_[1]) * o.e_[2] % n) % n);
  r.e_[1] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(e_[0]) * o.e_[1] % n +
                                        static_cast<std::uint64_t>(e_[1]) * o.e_[3] % n) % n);
  r.e_[2] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(e_[2]) * o.e_[0] % n +
                                        static_cast<std::uint64_t>(e_[3]) * o.e_[2] % n) % n);
  r.e_[3] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(e_[2]) * o.e_[1] % n +
                                        static_cast<std::uint64_t>(e_[3]) * o.e_[3] % n) % n);
  return r;
}

Mat2 Mat2::operator+(const Mat2& o) const {
  if (n_ != o.n_) throw DomainError("matrices live in different rings");
  Mat2 r = *this;
  for (std::size_t i = 0; i < 4; ++i) {
    r.e_[i] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(e_[i]) + o.e_[i]) % n_);
  }
  return r;
}

Mat2 Mat2::operator-(const Mat2& o) const {
  if (n_ != o.n_) throw DomainError("matrices live in different rings");
  Mat2 r = *this;
  for (std::size_t i = 0; i < 4; ++i) {
    r.e_[i] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(e_[i]) + n_ - o.e_[i]) % n_);
  }
  return r;
}

Mat2 Mat2::scaled(std::int64_t s) const {
  std::uint32_t t = reduce_signed(s, n_);
  Mat2 r = *this;
  for (auto& x : r.e_) x = mulmod(x, t, n_);
  return r;
}

Mat2 Mat2::pow(std::uint64_t e) const {
  Mat2 result = identity(n_);
  Mat2 base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

std::uint32_t Mat2::det() const {
  std::uint64_t ad = static_cast<std::uint64_t>(e_[0]) * e_[3] % n_;
  std::uint64_t bc = static_cast<std::uint64_t>(e_[1]) * e_[2] % n_;
  return static_cast<std::uint32_t>((ad + n_ - bc) % n_);
}

std::uint32_t Mat2::trace() const {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(e_[0]) + e_[3]) % n_);
}

bool Mat2::is_invertible() const { return gcd_u64(det(), n_) == 1; }

Mat2 Mat2::inverse() const {
  if (!is_invertible()) throw DomainError("singular matrix");
  std::uint64_t di = inv_mod(det(), n_);
  Mat2 r;
  r.n_ = n_;
  r.e_[0] = mulmod(e_[3], di, n_);
  r.e_[1] = mulmod((n_ - e_[1]) % n_, di, n_);
  r.e_[2] = mulmod((n_ - e_[2]) % n_, di, n_);
  r.e_[3] = mulmod(e_[0], di, n_);
  return r;
}

Mat2 Mat2::reduce(std::uint32_t divisor) const {
  if (divisor == 0 || n_ % divisor != 0) throw DomainError("reduction modulus must divide modulus");
  return Mat2(divisor, e_[0], e_[1], e_[2], e_[3]);
}

Mat2 Mat2::lift_to(std::uint32_t modulus) const {
  return Mat2(modulus, e_[0], e_[1], e_[2], e_[3]);
}

std::uint64_t Mat2::key() const {
  if (n_ >= (1u << 16)) throw DomainError("packed keys need modulus below 2^16");
  std::uint64_t n = n_;
  return ((static_cast<std::uint64_t>(e_[0]) * n + e_[1]) * n + e_[2]) * n + e_[3];
}

std::array<std::uint32_t, 2> Mat2::apply(std::uint32_t x, std::uint32_t y) const {
  std::uint64_t n = n_;
  return {static_cast<std::uint32_t>((static_cast<std::uint64_t>(e_[0]) * x % n +
                                      static_cast<std::uint64_t>(e_[1]) * y % n) % n),
          static_cast<std::uint32_t>((static_cast<std::uint64_t>(e_[2]) * x % n +
                                      static_cast<std::uint64_t>(e_[3]) * y % n) % n)};
}

std::string Mat2::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Mat2& m) {
  return os << "[[" << m.a() << "," << m.b() << "],[" << m.c() << "," << m.d() << "]] mod "
            << m.modulus();
}

std::size_t Mat2Hash::operator()(const Mat2& m) const noexcept {
  std::uint64_t h = m.modulus();
  for (std::uint32_t x : m.entries()) h = h * 0x9E3779B97F4A7C15ULL + x;
  return static_cast<std::size_t>(h ^ (h >> 29));
}

int valuation(const Mat2& m, const ResidueRing& ring) {
  if (m.modulus() != ring.modulus()) throw DomainError("matrix and ring disagree");
  int v = ring.level();
  for (std::uint32_t x : m.entries()) {
    v = std::min(v, valuation(ResidueInt(ring, x)));
  }
  return v;
}

Mat2 scalar_power_stabilize(const Mat2& g, const ResidueRing& ring) {
  std::uint32_t ell = ring.prime();
  if (g.modulus() != ring.modulus()) throw DomainError("matrix and ring disagree");
  Mat2 r = g.reduce(ell);
  if (!r.is_scalar() || r.a() == 0) throw DomainError("not scalar modulo l");
  Mat2 x = g;
  for (int i = 0; i <= ring.level() + 2; ++i) {
    Mat2 y = x.pow(ell);
    if (y == x) return x;
    x = y;
  }
  throw DomainError("power sequence did not stabilize");
}

}  // namespace galimage
