#pragma once

// Toy keys shared by the protocol tests.

#include "zkid/keys.hpp"

namespace fixtures {

using namespace zkid;

inline CurveParams f17() { return CurveParams::make(17, 2, 2); }

inline EcGroupSetting f17_group() {
  return {f17(), {Point::affine(5, 1), Point::affine(6, 3)}, 19};
}

inline QrSecret qr77() { return make_qr_key(77, 9); }
inline FsSecret fs77() { return make_fs_key(77, {3, 5, 9}); }
inline SchnorrSecret schnorr23() { return make_schnorr_key({23, 11, 2}, 7); }
inline EcDlogSecret ec_dlog17(const BigInt& m = 3) { return make_ec_dlog_key(f17_group(), m); }
inline EcSchnorr2gSecret ec2g17() { return make_ec_schnorr2g_key(f17_group(), 4, 7); }
inline GqSecret gq77(const BigInt& v = 7) { return make_gq_key({77, 7, 11}, v, identity_bytes("A")); }

/// Fresh setting and key pair for `protocol` at test scale.
inline KeyPair random_keys(ProtocolId protocol, Rng& rng, unsigned modulus_bits = 128,
                           const ProtocolConfig& cfg = {}) {
  SettingParams params;
  params.modulus_bits = modulus_bits;
  params.ec_field_bits = 16;
  params.ring_factor_bits = 16;
  params.gq_exponent = cfg.gq_exponent;
  return keygen(protocol, make_setting(protocol, params, rng), cfg, rng);
}

inline ProtocolConfig config_for(ProtocolId protocol, std::uint32_t rounds,
                                 std::uint32_t wide_bits = 20) {
  ProtocolConfig cfg;
  cfg.rounds = rounds;
  if (protocol == ProtocolId::kSchnorr || protocol == ProtocolId::kEcSchnorr2g) {
    cfg.challenge_bits = wide_bits;
  }
  return cfg;
}

}  // namespace fixtures
