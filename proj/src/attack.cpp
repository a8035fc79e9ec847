#include "zkid/attack.hpp"

#include <chrono>

#include "zkid/errors.hpp"

namespace zkid {
namespace {

Point reduce_point(const Point& p, const CurveParams& curve) {
  if (p.is_infinity()) return p;
  return Point::affine(mod_reduce(p.x(), curve.m), mod_reduce(p.y(), curve.m));
}

std::vector<BigInt> distinct(const std::vector<BigInt>& factors) {
  std::vector<BigInt> out;
  for (const auto& f : factors) {
    if (out.empty() || out.back() != f) out.push_back(f);
  }
  return out;
}

}  // namespace

AttackResult ec_sqrt_attack(const VerifierKey& pub, ProverSession& victim) {
  if (protocol_of(pub) != ProtocolId::kEcSqrt || victim.protocol() != protocol_of(pub)) {
    // The EC_DLOG response r + m is a scalar mod a prime order: there is no
    // ring to factor and nothing to halve.
    throw AttackFailed(std::string(protocol_name(protocol_of(pub))) +
                           " responses do not reveal the secret to a c = 1 verifier",
                       0);
  }
  const auto& key = std::get<EcSqrtPublic>(pub);
  const CurveParams& ring = key.curve;

  AttackResult result;
  const ProtocolConfig& cfg = victim.config();
  const Frame commit = victim.commit();
  const Frame response = victim.respond(make_challenge_frame(pub, cfg, 1));
  std::size_t offset = 0;
  result.commitment = decode_point(commit.payload, offset, ring);
  offset = 0;
  result.response = decode_point(response.payload, offset, ring);

  result.factors = factor_small(ring.m);
  const auto primes = distinct(result.factors);
  if (primes.size() != result.factors.size() || primes.size() < 2) {
    throw AttackFailed("modulus is not a product of distinct primes", 0);
  }

  // Half-points of S modulo each prime factor.
  std::vector<std::vector<Point>> halves;
  for (const auto& p : primes) {
    const CurveParams local = CurveParams::make(p, mod_reduce(ring.a, p), mod_reduce(ring.b, p), true);
    std::vector<Point> h = find_half_points(reduce_point(result.commitment, local), local);
    if (h.empty()) throw AttackFailed("S has no half-point modulo " + p.get_str(), 0);
    halves.push_back(std::move(h));
  }

  // Walk every combination, lifting coordinates by CRT.
  std::vector<std::size_t> idx(primes.size(), 0);
  for (;;) {
    bool affine = true;
    std::vector<std::pair<BigInt, BigInt>> xs, ys;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const Point& h = halves[i][idx[i]];
      if (h.is_infinity()) {
        affine = false;
        break;
      }
      xs.emplace_back(h.x(), primes[i]);
      ys.emplace_back(h.y(), primes[i]);
    }
    if (affine) {
      ++result.candidates_tried;
      const Point r = Point::affine(crt_combine(xs), crt_combine(ys));
      try {
        if (point_add(r, r, ring) == result.commitment) {
          const Point a = point_sub(result.response, r, ring);
          if (!a.is_infinity() && point_add(a, a, ring) == key.b) {
            result.half = r;
            result.recovered = a;
            return result;
          }
        }
      } catch (const RingInversionFailure&) {
      }
    }
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == halves[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  throw AttackFailed("no lifted half-point of S is consistent with 2A = B", result.candidates_tried);
}

AttackDemo run_attack_demo(unsigned pbits, Rng& rng) {
  if (pbits < 3 || pbits > kMaxAttackFactorBits) {
    throw InvalidSetting("attack factor size must be between 3 and 16 bits");
  }
  AttackDemo demo;
  demo.setting = gen_ring_curve(pbits, rng);
  const KeyPair keys = keygen(ProtocolId::kEcSqrt, demo.setting, ProtocolConfig{}, rng);
  const auto& secret = std::get<EcSqrtSecret>(keys.prover);
  demo.secret = secret.a;
  demo.public_point = secret.pub.b;
  ProverSession victim(keys.prover, ProtocolConfig{}, rng.fork());

  const auto start = std::chrono::steady_clock::now();
  demo.result = ec_sqrt_attack(keys.verifier, victim);
  demo.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  demo.verified = point_add(demo.result.recovered, demo.result.recovered, demo.setting.curve) ==
                  demo.public_point;
  return demo;
}

}  // namespace zkid
