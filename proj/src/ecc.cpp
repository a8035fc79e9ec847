#include "zkid/ecc.hpp"

#include <algorithm>
#include <stdexcept>

#include "zkid/errors.hpp"

namespace zkid {
namespace {

// Desk-scale curve with machine-word arithmetic, used by the exhaustive
// counting and scanning routines.
struct SmallCurve {
  std::uint64_t m;
  std::uint64_t a;
  std::uint64_t b;

  std::uint64_t rhs(std::uint64_t x) const { return ((x * x % m) * x % m + a * x % m + b) % m; }
};

struct SmallPoint {
  bool inf = true;
  std::uint64_t x = 0;
  std::uint64_t y = 0;

  bool operator==(const SmallPoint&) const = default;
};

SmallCurve small_curve(const CurveParams& curve) {
  if (!curve.is_field) throw InvalidCurve("exhaustive scan needs a prime-field curve");
  if (curve.m > BigInt(std::to_string(kDeskScaleLimit))) {
    throw ModulusTooLarge("modulus " + curve.m.get_str() + " exceeds the desk-scale bound 2^20");
  }
  return {curve.m.get_ui(), curve.a.get_ui(), curve.b.get_ui()};
}

// root[v] = some y with y^2 = v (mod m), or -1 when v is a non-residue.
std::vector<std::int32_t> square_root_table(std::uint64_t m) {
  std::vector<std::int32_t> root(m, -1);
  for (std::uint64_t y = 0; y < m; ++y) {
    auto& slot = root[y * y % m];
    if (slot < 0) slot = static_cast<std::int32_t>(y);
  }
  return root;
}

std::uint64_t small_inv(std::uint64_t a, std::uint64_t m) {
  std::int64_t old_r = static_cast<std::int64_t>(a), r = static_cast<std::int64_t>(m);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  auto mm = static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(((old_s % mm) + mm) % mm);
}

SmallPoint small_double(const SmallPoint& p, const SmallCurve& c) {
  if (p.inf || p.y == 0) return {};
  const std::uint64_t m = c.m;
  const std::uint64_t num = (3 * (p.x * p.x % m) + c.a) % m;
  const std::uint64_t lambda = num * small_inv(2 * p.y % m, m) % m;
  const std::uint64_t x3 = (lambda * lambda % m + 2 * m - 2 * p.x) % m;
  const std::uint64_t y3 = (lambda * ((p.x + m - x3) % m) % m + m - p.y) % m;
  return {false, x3, y3};
}

std::vector<SmallPoint> small_points(const SmallCurve& c) {
  const auto root = square_root_table(c.m);
  std::vector<SmallPoint> pts;
  pts.push_back({});
  for (std::uint64_t x = 0; x < c.m; ++x) {
    const std::uint64_t v = c.rhs(x);
    const std::int32_t r = root[v];
    if (r < 0) continue;
    const auto y = static_cast<std::uint64_t>(r);
    pts.push_back({false, x, y});
    if (y != 0) pts.push_back({false, x, c.m - y});
  }
  return pts;
}

Point to_point(const SmallPoint& p) {
  if (p.inf) return Point::infinity();
  return Point::affine(BigInt(std::to_string(p.x)), BigInt(std::to_string(p.y)));
}

// Inverse of `den` modulo the curve modulus; on a ring curve a shared factor
// is surfaced as RingInversionFailure.
BigInt slope_inverse(const BigInt& den, const CurveParams& curve) {
  try {
    return mod_inv(den, curve.m);
  } catch (const NotInvertible& e) {
    if (curve.is_field) throw std::logic_error("zero slope denominator on a field curve");
    throw RingInversionFailure(e.gcd());
  }
}

BigInt largest_prime_factor(const BigInt& n) {
  const auto factors = factor_small(n);
  return factors.empty() ? BigInt(1) : factors.back();
}

}  // namespace

CurveParams CurveParams::make(const BigInt& m, const BigInt& a, const BigInt& b, bool is_field) {
  if (m < 5) throw InvalidCurve("curve modulus must be at least 5");
  if (mpz_even_p(m.get_mpz_t())) throw InvalidCurve("curve modulus must be odd");
  if (is_field && !is_probable_prime(m)) {
    throw InvalidCurve("field modulus " + m.get_str() + " is not prime");
  }
  CurveParams curve{m, mod_reduce(a, m), mod_reduce(b, m), is_field};
  if (curve.discriminant() == 0) {
    throw InvalidCurve("singular curve: 4a^3 + 27b^2 = 0 mod " + m.get_str());
  }
  return curve;
}

BigInt CurveParams::discriminant() const { return mod_reduce(4 * a * a * a + 27 * b * b, m); }

const BigInt& Point::x() const {
  if (infinity_) throw std::logic_error("point at infinity has no coordinates");
  return x_;
}

const BigInt& Point::y() const {
  if (infinity_) throw std::logic_error("point at infinity has no coordinates");
  return y_;
}

bool Point::operator==(const Point& other) const {
  if (infinity_ || other.infinity_) return infinity_ == other.infinity_;
  return x_ == other.x_ && y_ == other.y_;
}

std::string to_string(const Point& p) {
  if (p.is_infinity()) return "infinity";
  return "(" + p.x().get_str() + ", " + p.y().get_str() + ")";
}

bool on_curve(const Point& p, const CurveParams& curve) {
  if (p.is_infinity()) return true;
  const auto& [m, a, b, is_field] = curve;
  if (p.x() < 0 || p.x() >= m || p.y() < 0 || p.y() >= m) return false;
  return mod_reduce(p.y() * p.y() - (p.x() * p.x() * p.x() + a * p.x() + b), m) == 0;
}

Point point_neg(const Point& p, const CurveParams& curve) {
  if (p.is_infinity()) return p;
  return Point::affine(p.x(), mod_reduce(-p.y(), curve.m));
}

Point point_add(const Point& p, const Point& q, const CurveParams& curve, MulCounter& ctr) {
  if (p.is_infinity()) return q;
  if (q.is_infinity()) return p;
  const BigInt& m = curve.m;
  const BigInt &x1 = p.x(), &y1 = p.y(), &x2 = q.x(), &y2 = q.y();

  BigInt lambda;
  if (x1 == x2) {
    if (mod_reduce(y1 + y2, m) == 0) return Point::infinity();
    if (y1 != y2) {
      // Only reachable on a ring: y1^2 = y2^2 with y1 != +-y2.
      BigInt g;
      const BigInt diff = mod_reduce(y1 - y2, m);
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), m.get_mpz_t());
      throw RingInversionFailure(g);
    }
    const BigInt inv = slope_inverse(2 * y1, curve);
    const BigInt x_sq = mod_mul(x1, x1, m, ctr);
    lambda = mod_mul(3 * x_sq + curve.a, inv, m, ctr);
  } else {
    const BigInt inv = slope_inverse(x2 - x1, curve);
    lambda = mod_mul(y2 - y1, inv, m, ctr);
  }
  BigInt x3 = mod_reduce(mod_mul(lambda, lambda, m, ctr) - x1 - x2, m);
  BigInt y3 = mod_reduce(mod_mul(lambda, x1 - x3, m, ctr) - y1, m);
  return Point::affine(std::move(x3), std::move(y3));
}

Point point_add(const Point& p, const Point& q, const CurveParams& curve) {
  MulCounter scratch;
  return point_add(p, q, curve, scratch);
}

Point point_sub(const Point& p, const Point& q, const CurveParams& curve, MulCounter& ctr) {
  return point_add(p, point_neg(q, curve), curve, ctr);
}

Point point_sub(const Point& p, const Point& q, const CurveParams& curve) {
  MulCounter scratch;
  return point_sub(p, q, curve, scratch);
}

Point scalar_mul(const BigInt& k, const Point& p, const CurveParams& curve, MulCounter& ctr) {
  if (k < 0) return scalar_mul(-k, point_neg(p, curve), curve, ctr);
  if (k == 0 || p.is_infinity()) return Point::infinity();
  Point acc = p;
  for (auto i = static_cast<long>(bit_length(k)) - 2; i >= 0; --i) {
    acc = point_add(acc, acc, curve, ctr);
    if (mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) acc = point_add(acc, p, curve, ctr);
  }
  return acc;
}

Point scalar_mul(const BigInt& k, const Point& p, const CurveParams& curve) {
  MulCounter scratch;
  return scalar_mul(k, p, curve, scratch);
}

BigInt count_points(const CurveParams& curve) {
  const SmallCurve c = small_curve(curve);
  const auto root = square_root_table(c.m);
  std::uint64_t count = 1;
  for (std::uint64_t x = 0; x < c.m; ++x) {
    const std::uint64_t v = c.rhs(x);
    if (v == 0) {
      count += 1;
    } else if (root[v] >= 0) {
      count += 2;
    }
  }
  return BigInt(std::to_string(count));
}

std::vector<Point> enumerate_points(const CurveParams& curve) {
  const auto small = small_points(small_curve(curve));
  std::vector<Point> out;
  out.reserve(small.size());
  for (const auto& p : small) out.push_back(to_point(p));
  return out;
}

BigInt point_order(const Point& p, const CurveParams& curve) {
  if (!on_curve(p, curve)) throw std::invalid_argument("point_order: point not on curve");
  if (p.is_infinity()) return 1;
  const BigInt group_order = count_points(curve);
  BigInt order = group_order;
  auto factors = factor_small(group_order);
  factors.erase(std::unique(factors.begin(), factors.end()), factors.end());
  for (const auto& f : factors) {
    while (mpz_divisible_p(order.get_mpz_t(), f.get_mpz_t()) &&
           scalar_mul(order / f, p, curve).is_infinity()) {
      order /= f;
    }
  }
  return order;
}

CurveReport curve_security_check(const CurveParams& curve, unsigned min_prime_bits) {
  CurveReport report;
  report.order = count_points(curve);
  report.large_prime_factor = largest_prime_factor(report.order);
  report.pollard_ok = bit_length(report.large_prime_factor) >= min_prime_bits;
  const BigInt trace = curve.m + 1 - report.order;
  report.mov_ok = !mpz_divisible_p(trace.get_mpz_t(), curve.m.get_mpz_t());
  report.anomalous_ok = report.order != curve.m;
  return report;
}

std::vector<Point> find_half_points(const Point& s, const CurveParams& curve) {
  const SmallCurve c = small_curve(curve);
  if (!on_curve(s, curve)) throw std::invalid_argument("find_half_points: point not on curve");
  SmallPoint target;
  if (!s.is_infinity()) target = {false, s.x().get_ui(), s.y().get_ui()};
  std::vector<Point> halves;
  for (const auto& t : small_points(c)) {
    if (small_double(t, c) == target) halves.push_back(to_point(t));
  }
  return halves;
}

BigInt sqrt_mod_prime(const BigInt& a_in, const BigInt& p) {
  const BigInt a = mod_reduce(a_in, p);
  if (a == 0) return 0;
  if (p == 2) return a;
  if (mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1) return -1;
  // Tonelli-Shanks
  BigInt q = p - 1;
  unsigned s = 0;
  while (mpz_even_p(q.get_mpz_t())) {
    q >>= 1;
    ++s;
  }
  if (s == 1) return mod_exp(a, (p + 1) / 4, p);
  BigInt z = 2;
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) z += 1;
  BigInt c = mod_exp(z, q, p);
  BigInt r = mod_exp(a, (q + 1) / 2, p);
  BigInt t = mod_exp(a, q, p);
  unsigned m = s;
  while (t != 1) {
    unsigned i = 0;
    BigInt t2 = t;
    while (t2 != 1) {
      t2 = mod_reduce(t2 * t2, p);
      ++i;
    }
    BigInt b = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) b = mod_reduce(b * b, p);
    r = mod_reduce(r * b, p);
    c = mod_reduce(b * b, p);
    t = mod_reduce(t * c, p);
    m = i;
  }
  return r;
}

Point random_point(const CurveParams& curve, Rng& rng) {
  if (!curve.is_field) throw InvalidCurve("random_point needs a prime-field curve");
  const BigInt& m = curve.m;
  for (;;) {
    const BigInt x = rand_below(m, rng);
    const bool negate = rng.next_u64() & 1;
    const BigInt v = mod_reduce(x * x * x + curve.a * x + curve.b, m);
    const BigInt y = sqrt_mod_prime(v, m);
    if (y < 0) continue;
    // A single root is kept with probability 1/2 so every point is equally likely.
    if (y == 0) {
      if (negate) continue;
      return Point::affine(x, 0);
    }
    return Point::affine(x, negate ? BigInt(m - y) : y);
  }
}

Bytes encode_point(const Point& p, const CurveParams& curve) {
  if (p.is_infinity()) return {0x00};
  const std::size_t width = byte_length(curve.m);
  Bytes out;
  out.reserve(1 + 2 * width);
  out.push_back(0x04);
  const Bytes x = to_bytes(p.x(), width);
  const Bytes y = to_bytes(p.y(), width);
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

std::size_t encoded_point_size(const Point& p, const CurveParams& curve) {
  return p.is_infinity() ? 1 : 1 + 2 * byte_length(curve.m);
}

Point decode_point(std::span<const std::uint8_t> bytes, std::size_t& offset,
                   const CurveParams& curve) {
  if (offset >= bytes.size()) throw MalformedFrame("point: missing tag byte");
  const std::uint8_t tag = bytes[offset];
  if (tag == 0x00) {
    ++offset;
    return Point::infinity();
  }
  if (tag != 0x04) throw MalformedFrame("point: unknown tag byte");
  const std::size_t width = byte_length(curve.m);
  if (bytes.size() - offset < 1 + 2 * width) throw MalformedFrame("point: truncated coordinates");
  Point p = Point::affine(from_bytes(bytes.subspan(offset + 1, width)),
                          from_bytes(bytes.subspan(offset + 1 + width, width)));
  if (!on_curve(p, curve)) throw MalformedFrame("point: not on curve");
  offset += 1 + 2 * width;
  return p;
}

}  // namespace zkid
