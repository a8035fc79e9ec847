#pragma once

// Short-Weierstrass curves y^2 = x^3 + ax + b in affine coordinates, over a
// prime field or over Z_n for composite n. On a ring curve the usual chord
// and tangent formulas are reused; a non-invertible slope denominator is
// reported as RingInversionFailure instead of being hidden.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zkid/numtheory.hpp"

namespace zkid {

/// Upper bound on the modulus for exhaustive point counting and scans.
inline constexpr std::uint64_t kDeskScaleLimit = std::uint64_t{1} << 20;

struct CurveParams {
  BigInt m;
  BigInt a;
  BigInt b;
  bool is_field = true;

  /// Validates and normalises coefficients. Throws InvalidCurve when the
  /// curve is singular or when is_field is set and m is not prime.
  static CurveParams make(const BigInt& m, const BigInt& a, const BigInt& b, bool is_field = true);

  /// 4a^3 + 27b^2 mod m.
  BigInt discriminant() const;

  bool operator==(const CurveParams&) const = default;
};

class Point {
 public:
  Point() = default;  // point at infinity
  static Point infinity() { return Point(); }
  static Point affine(BigInt x, BigInt y) { return Point(std::move(x), std::move(y)); }

  bool is_infinity() const { return infinity_; }
  const BigInt& x() const;
  const BigInt& y() const;

  bool operator==(const Point& other) const;

 private:
  Point(BigInt x, BigInt y) : infinity_(false), x_(std::move(x)), y_(std::move(y)) {}

  bool infinity_ = true;
  BigInt x_;
  BigInt y_;
};

std::string to_string(const Point& p);

struct CurveReport {
  BigInt order;
  BigInt large_prime_factor;
  bool pollard_ok = false;
  bool mov_ok = false;
  bool anomalous_ok = false;

  bool all_ok() const { return pollard_ok && mov_ok && anomalous_ok; }
};

bool on_curve(const Point& p, const CurveParams& curve);

Point point_neg(const Point& p, const CurveParams& curve);

/// Chord-and-tangent addition. Field multiplications are counted in `ctr`:
/// three for a chord step, four for a tangent step.
Point point_add(const Point& p, const Point& q, const CurveParams& curve, MulCounter& ctr);
Point point_add(const Point& p, const Point& q, const CurveParams& curve);

Point point_sub(const Point& p, const Point& q, const CurveParams& curve, MulCounter& ctr);
Point point_sub(const Point& p, const Point& q, const CurveParams& curve);

/// Left-to-right double-and-add. 0*P is the point at infinity.
Point scalar_mul(const BigInt& k, const Point& p, const CurveParams& curve, MulCounter& ctr);
Point scalar_mul(const BigInt& k, const Point& p, const CurveParams& curve);

/// #E(F_m) by enumerating x and counting square roots of the right-hand side.
/// Requires a field curve with m <= 2^20 (ModulusTooLarge otherwise).
BigInt count_points(const CurveParams& curve);

/// Every point of a desk-scale field curve, infinity first.
std::vector<Point> enumerate_points(const CurveParams& curve);

/// Smallest k >= 1 with k*P = O.
BigInt point_order(const Point& p, const CurveParams& curve);

/// Checks against Pollard-rho/Pohlig-Hellman (large prime factor of the order),
/// MOV (m must not divide m + 1 - #E) and Semaev-Smart (#E != m).
CurveReport curve_security_check(const CurveParams& curve, unsigned min_prime_bits);

/// All T with 2T = S, by a scan of the whole group.
std::vector<Point> find_half_points(const Point& s, const CurveParams& curve);

/// Uniform random point of a field curve (never infinity). Uses
/// Tonelli-Shanks, so any prime modulus is accepted.
Point random_point(const CurveParams& curve, Rng& rng);

/// Square root of a quadratic residue modulo an odd prime, or -1 if none.
BigInt sqrt_mod_prime(const BigInt& a, const BigInt& p);

/// Encoded point: 0x00 for infinity, otherwise 0x04 || X || Y with both
/// coordinates zero-padded to the byte length of m.
Bytes encode_point(const Point& p, const CurveParams& curve);
std::size_t encoded_point_size(const Point& p, const CurveParams& curve);

/// Decodes one point from the front of `bytes`, advancing `offset`. Throws
/// MalformedFrame on a bad tag, short input, or an off-curve point.
Point decode_point(std::span<const std::uint8_t> bytes, std::size_t& offset,
                   const CurveParams& curve);

}  // namespace zkid
