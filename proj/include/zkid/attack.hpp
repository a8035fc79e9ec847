#pragma once

// Secret recovery against EC_SQRT by a malicious verifier. Fixing the
// challenge to 1 yields S = 2R and M = R + A; once the ring modulus is
// factored, halving S modulo each factor and lifting by CRT gives R, and
// then A = M - R.

#include <vector>

#include "zkid/session.hpp"

namespace zkid {

struct AttackResult {
  Point recovered;   // A with 2A = B
  Point commitment;  // S observed from the victim
  Point response;    // M observed from the victim
  Point half;        // the R that was lifted
  std::vector<BigInt> factors;
  std::size_t candidates_tried = 0;
};

/// Drives one round against `victim` with c = 1 and recovers the secret.
/// Throws AttackFailed when no consistent lift exists, including for any
/// protocol other than EC_SQRT.
AttackResult ec_sqrt_attack(const VerifierKey& pub, ProverSession& victim);

struct AttackDemo {
  RingCurveSetting setting;
  Point secret;
  Point public_point;
  AttackResult result;
  bool verified = false;  // 2A == B for the recovered A
  double elapsed_ms = 0;
};

/// Fresh EC_SQRT instance over n = p*q with `pbits`-bit factors (at most 16)
/// and one attack against it. Throws InvalidSetting when pbits is out of range.
AttackDemo run_attack_demo(unsigned pbits, Rng& rng);

inline constexpr unsigned kMaxAttackFactorBits = 16;

}  // namespace zkid
