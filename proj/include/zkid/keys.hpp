#pragma once

// Algebraic settings, protocol configuration and key material for the seven
// identification protocols.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "zkid/ecc.hpp"
#include "zkid/numtheory.hpp"
#include "zkid/wire.hpp"

namespace zkid {

inline constexpr std::string_view kDefaultIdentity = "ZKID-CARD-0001";

struct ProtocolConfig {
  std::uint32_t rounds = 1;
  std::uint32_t fs_secrets = 3;
  std::uint32_t gq_exponent = 65521;
  /// 1 for the bit-challenge protocols; the challenge width in bits for
  /// SCHNORR and EC_SCHNORR2G.
  std::uint32_t challenge_bits = 1;
  std::string identity = std::string(kDefaultIdentity);
};

/// Curve with base points of a common prime order.
struct EcGroupSetting {
  CurveParams curve;
  std::vector<Point> generators;
  BigInt order;
};

/// Curve over Z_n with n = p*q; the factors are known to whoever set it up.
struct RingCurveSetting {
  CurveParams curve;
  BigInt p;
  BigInt q;
};

using Setting = std::variant<RsaModulus, SchnorrGroup, EcGroupSetting, RingCurveSetting>;

// Key material. Each *Secret holds the matching public part.

struct QrPublic {
  BigInt n;
  BigInt b;  // b = x^2 mod n
  Bytes identity;
};
struct QrSecret {
  QrPublic pub;
  BigInt x;
};

struct FsPublic {
  BigInt n;
  std::vector<BigInt> v;  // v_i = s_i^2 mod n
  Bytes identity;
};
struct FsSecret {
  FsPublic pub;
  std::vector<BigInt> s;
};

struct GqPublic {
  BigInt n;
  BigInt v;  // prime exponent
  BigInt j;  // derived from identity
  Bytes identity;
};
struct GqSecret {
  GqPublic pub;
  BigInt s;  // j * s^v = 1 mod n
};

struct SchnorrPublic {
  SchnorrGroup group;
  BigInt b;  // g^x mod p
};
struct SchnorrSecret {
  SchnorrPublic pub;
  BigInt x;
};

struct EcSqrtPublic {
  CurveParams curve;
  Point b;  // 2A
};
struct EcSqrtSecret {
  EcSqrtPublic pub;
  Point a;
  // Factors of the ring modulus, needed to sample random ring points.
  BigInt p;
  BigInt q;
};

struct EcDlogPublic {
  CurveParams curve;
  Point g;
  BigInt order;
  Point b;  // m*G
};
struct EcDlogSecret {
  EcDlogPublic pub;
  BigInt m;
};

struct EcSchnorr2gPublic {
  CurveParams curve;
  Point p1;
  Point p2;
  BigInt order;
  Point v;  // Q1 + Q2 with Q_i = -d_i * P_i
};
struct EcSchnorr2gSecret {
  EcSchnorr2gPublic pub;
  BigInt d1;
  BigInt d2;
};

using VerifierKey = std::variant<QrPublic, FsPublic, GqPublic, SchnorrPublic, EcSqrtPublic,
                                 EcDlogPublic, EcSchnorr2gPublic>;
using ProverKey = std::variant<QrSecret, FsSecret, GqSecret, SchnorrSecret, EcSqrtSecret,
                               EcDlogSecret, EcSchnorr2gSecret>;

struct KeyPair {
  ProverKey prover;
  VerifierKey verifier;
};

ProtocolId protocol_of(const VerifierKey& key);
ProtocolId protocol_of(const ProverKey& key);
VerifierKey public_part(const ProverKey& key);

/// True when the secret satisfies its defining equation against the public part.
bool check_key_pair(const ProverKey& key);

Bytes identity_bytes(std::string_view identity);

// Key construction from explicit secrets. Each throws InvalidSetting when the
// secret or setting is unusable.
QrSecret make_qr_key(const BigInt& n, const BigInt& x, Bytes identity = {});
FsSecret make_fs_key(const BigInt& n, std::vector<BigInt> s, Bytes identity = {});
/// Needs the factorisation to extract the v-th root; gcd(v, phi(n)) must be 1.
GqSecret make_gq_key(const RsaModulus& modulus, const BigInt& v, Bytes identity);
SchnorrSecret make_schnorr_key(const SchnorrGroup& group, const BigInt& x);
EcSqrtSecret make_ec_sqrt_key(const RingCurveSetting& setting, const Point& a);
EcDlogSecret make_ec_dlog_key(const EcGroupSetting& setting, const BigInt& m);
EcSchnorr2gSecret make_ec_schnorr2g_key(const EcGroupSetting& setting, const BigInt& d1,
                                        const BigInt& d2);

KeyPair keygen(ProtocolId protocol, const Setting& setting, const ProtocolConfig& cfg, Rng& rng);

// Setting generation.

struct SettingParams {
  unsigned modulus_bits = 256;
  /// Subgroup order size for SCHNORR; 0 picks 160 bits for moduli of 256 bits
  /// and above, 5/8 of the modulus otherwise.
  unsigned subgroup_bits = 0;
  unsigned ec_field_bits = 16;
  unsigned ring_factor_bits = 16;
  std::uint32_t gq_exponent = 65521;
};

Setting make_setting(ProtocolId protocol, const SettingParams& params, Rng& rng);

/// Random prime-field curve of `field_bits` bits whose order has a large
/// prime factor and which passes the curve security checks, with
/// `generator_count` base points of that prime order.
EcGroupSetting gen_ec_group(unsigned field_bits, std::size_t generator_count, Rng& rng);

/// Builds a setting on a fixed curve by locating base points of the largest
/// prime order. Throws InvalidSetting if the curve is unsuitable.
EcGroupSetting ec_group_on(const CurveParams& curve, std::size_t generator_count, Rng& rng);

/// Curve over n = p*q, nonsingular modulo both factors.
RingCurveSetting gen_ring_curve(unsigned factor_bits, Rng& rng);

/// Random point of a ring curve, built from random points modulo each factor.
Point random_ring_point(const RingCurveSetting& setting, Rng& rng);

}  // namespace zkid
