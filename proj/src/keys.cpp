#include "zkid/keys.hpp"

#include "zkid/errors.hpp"

namespace zkid {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool coprime(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g == 1;
}

void require_unit(const BigInt& x, const BigInt& n, const char* what) {
  if (x <= 0 || x >= n || !coprime(x, n)) {
    throw InvalidSetting(std::string(what) + " must be a unit modulo n");
  }
}

void require_generator(const CurveParams& curve, const Point& g, const BigInt& order) {
  if (!on_curve(g, curve)) throw InvalidSetting("base point " + to_string(g) + " is not on the curve");
  if (g.is_infinity()) throw InvalidSetting("base point is the point at infinity");
  if (order < 3 || !is_probable_prime(order)) {
    throw InvalidSetting("generator order " + order.get_str() + " must be a prime >= 3");
  }
  if (!scalar_mul(order, g, curve).is_infinity()) {
    throw InvalidSetting("base point does not have order " + order.get_str());
  }
}

template <class T>
const T& setting_as(const Setting& setting, ProtocolId protocol) {
  if (const auto* s = std::get_if<T>(&setting)) return *s;
  throw InvalidSetting("setting type does not match protocol " + std::string(protocol_name(protocol)));
}

unsigned default_subgroup_bits(unsigned modulus_bits) {
  if (modulus_bits >= 256) return 160;
  return std::max(2u, modulus_bits * 5 / 8);
}

}  // namespace

ProtocolId protocol_of(const VerifierKey& key) {
  return std::visit(Overloaded{
                        [](const QrPublic&) { return ProtocolId::kQr; },
                        [](const FsPublic&) { return ProtocolId::kFs; },
                        [](const GqPublic&) { return ProtocolId::kGq; },
                        [](const SchnorrPublic&) { return ProtocolId::kSchnorr; },
                        [](const EcSqrtPublic&) { return ProtocolId::kEcSqrt; },
                        [](const EcDlogPublic&) { return ProtocolId::kEcDlog; },
                        [](const EcSchnorr2gPublic&) { return ProtocolId::kEcSchnorr2g; },
                    },
                    key);
}

ProtocolId protocol_of(const ProverKey& key) { return protocol_of(public_part(key)); }

VerifierKey public_part(const ProverKey& key) {
  return std::visit([](const auto& k) -> VerifierKey { return k.pub; }, key);
}

bool check_key_pair(const ProverKey& key) {
  return std::visit(
      Overloaded{
          [](const QrSecret& k) { return mod_exp(k.x, 2, k.pub.n) == k.pub.b; },
          [](const FsSecret& k) {
            if (k.s.size() != k.pub.v.size()) return false;
            for (std::size_t i = 0; i < k.s.size(); ++i) {
              if (mod_exp(k.s[i], 2, k.pub.n) != k.pub.v[i]) return false;
            }
            return true;
          },
          [](const GqSecret& k) {
            return mod_reduce(k.pub.j * mod_exp(k.s, k.pub.v, k.pub.n), k.pub.n) == 1;
          },
          [](const SchnorrSecret& k) {
            return mod_exp(k.pub.group.g, k.x, k.pub.group.p) == k.pub.b;
          },
          [](const EcSqrtSecret& k) {
            try {
              return point_add(k.a, k.a, k.pub.curve) == k.pub.b;
            } catch (const RingInversionFailure&) {
              return false;
            }
          },
          [](const EcDlogSecret& k) { return scalar_mul(k.m, k.pub.g, k.pub.curve) == k.pub.b; },
          [](const EcSchnorr2gSecret& k) {
            const auto& c = k.pub.curve;
            const Point q1 = point_neg(scalar_mul(k.d1, k.pub.p1, c), c);
            const Point q2 = point_neg(scalar_mul(k.d2, k.pub.p2, c), c);
            return point_add(q1, q2, c) == k.pub.v;
          },
      },
      key);
}

Bytes identity_bytes(std::string_view identity) { return Bytes(identity.begin(), identity.end()); }

QrSecret make_qr_key(const BigInt& n, const BigInt& x, Bytes identity) {
  if (n < 3) throw InvalidSetting("QR modulus too small");
  require_unit(x, n, "QR secret x");
  return {{n, mod_exp(x, 2, n), std::move(identity)}, x};
}

FsSecret make_fs_key(const BigInt& n, std::vector<BigInt> s, Bytes identity) {
  if (n < 3) throw InvalidSetting("FS modulus too small");
  if (s.empty()) throw InvalidSetting("FS needs at least one secret");
  std::vector<BigInt> v;
  v.reserve(s.size());
  for (const auto& si : s) {
    require_unit(si, n, "FS secret s_i");
    v.push_back(mod_exp(si, 2, n));
  }
  return {{n, std::move(v), std::move(identity)}, std::move(s)};
}

GqSecret make_gq_key(const RsaModulus& modulus, const BigInt& v, Bytes identity) {
  const BigInt& n = modulus.n;
  if (v < 3 || !is_probable_prime(v)) throw InvalidSetting("GQ exponent v must be an odd prime");
  const BigInt phi = (modulus.p - 1) * (modulus.q - 1);
  if (!coprime(v, phi)) throw InvalidSetting("GQ exponent v shares a factor with phi(n)");
  const BigInt j = mod_reduce(from_bytes(identity), n);
  if (j <= 1 || !coprime(j, n)) throw InvalidSetting("identity does not map to a usable unit mod n");
  // s = (j^-1)^(v^-1 mod phi)
  const BigInt s = mod_exp(mod_inv(j, n), mod_inv(v, phi), n);
  return {{n, v, j, std::move(identity)}, s};
}

SchnorrSecret make_schnorr_key(const SchnorrGroup& group, const BigInt& x) {
  if (!validate_schnorr_group(group)) throw InvalidSetting("invalid Schnorr group");
  if (x <= 0 || x >= group.q) throw InvalidSetting("Schnorr secret must lie in [1, q)");
  return {{group, mod_exp(group.g, x, group.p)}, x};
}

EcSqrtSecret make_ec_sqrt_key(const RingCurveSetting& setting, const Point& a) {
  const auto& curve = setting.curve;
  if (setting.p * setting.q != curve.m) throw InvalidSetting("ring factors do not match modulus");
  if (a.is_infinity() || !on_curve(a, curve)) throw InvalidSetting("secret point not on the curve");
  Point b;
  try {
    b = point_add(a, a, curve);
  } catch (const RingInversionFailure&) {
    throw InvalidSetting("secret point cannot be doubled over the ring");
  }
  if (b.is_infinity()) throw InvalidSetting("secret point has order 2");
  return {{curve, b}, a, setting.p, setting.q};
}

EcDlogSecret make_ec_dlog_key(const EcGroupSetting& setting, const BigInt& m) {
  if (setting.generators.empty()) throw InvalidSetting("EC_DLOG needs a base point");
  const Point& g = setting.generators[0];
  require_generator(setting.curve, g, setting.order);
  if (m <= 0 || m >= setting.order) throw InvalidSetting("EC_DLOG secret must lie in [1, n)");
  return {{setting.curve, g, setting.order, scalar_mul(m, g, setting.curve)}, m};
}

EcSchnorr2gSecret make_ec_schnorr2g_key(const EcGroupSetting& setting, const BigInt& d1,
                                        const BigInt& d2) {
  if (setting.generators.size() < 2) throw InvalidSetting("EC_SCHNORR2G needs two base points");
  const auto& curve = setting.curve;
  const Point& p1 = setting.generators[0];
  const Point& p2 = setting.generators[1];
  require_generator(curve, p1, setting.order);
  require_generator(curve, p2, setting.order);
  for (const BigInt* d : {&d1, &d2}) {
    if (*d <= 0 || *d >= setting.order) throw InvalidSetting("EC_SCHNORR2G secrets must lie in [1, n)");
  }
  const Point q1 = point_neg(scalar_mul(d1, p1, curve), curve);
  const Point q2 = point_neg(scalar_mul(d2, p2, curve), curve);
  return {{curve, p1, p2, setting.order, point_add(q1, q2, curve)}, d1, d2};
}

KeyPair keygen(ProtocolId protocol, const Setting& setting, const ProtocolConfig& cfg, Rng& rng) {
  const Bytes identity = identity_bytes(cfg.identity);
  ProverKey key = [&]() -> ProverKey {
    switch (protocol) {
      case ProtocolId::kQr: {
        const auto& mod = setting_as<RsaModulus>(setting, protocol);
        return make_qr_key(mod.n, rand_unit(mod.n, rng), identity);
      }
      case ProtocolId::kFs: {
        const auto& mod = setting_as<RsaModulus>(setting, protocol);
        if (cfg.fs_secrets < 1) throw InvalidSetting("FS needs k >= 1");
        std::vector<BigInt> s;
        for (std::uint32_t i = 0; i < cfg.fs_secrets; ++i) s.push_back(rand_unit(mod.n, rng));
        return make_fs_key(mod.n, std::move(s), identity);
      }
      case ProtocolId::kGq: {
        const auto& mod = setting_as<RsaModulus>(setting, protocol);
        return make_gq_key(mod, cfg.gq_exponent, identity);
      }
      case ProtocolId::kSchnorr: {
        const auto& group = setting_as<SchnorrGroup>(setting, protocol);
        return make_schnorr_key(group, rand_range(1, group.q - 1, rng));
      }
      case ProtocolId::kEcSqrt: {
        const auto& ring = setting_as<RingCurveSetting>(setting, protocol);
        for (;;) {
          try {
            return make_ec_sqrt_key(ring, random_ring_point(ring, rng));
          } catch (const InvalidSetting&) {
            // the sampled point could not be doubled over the ring; draw again
          }
        }
      }
      case ProtocolId::kEcDlog: {
        const auto& group = setting_as<EcGroupSetting>(setting, protocol);
        return make_ec_dlog_key(group, rand_range(1, group.order - 1, rng));
      }
      case ProtocolId::kEcSchnorr2g: {
        const auto& group = setting_as<EcGroupSetting>(setting, protocol);
        const BigInt d1 = rand_range(1, group.order - 1, rng);
        const BigInt d2 = rand_range(1, group.order - 1, rng);
        return make_ec_schnorr2g_key(group, d1, d2);
      }
    }
    throw InvalidSetting("unknown protocol");
  }();
  VerifierKey pub = public_part(key);
  return {std::move(key), std::move(pub)};
}

Setting make_setting(ProtocolId protocol, const SettingParams& params, Rng& rng) {
  switch (protocol) {
    case ProtocolId::kQr:
    case ProtocolId::kFs:
      return gen_rsa_modulus(params.modulus_bits, rng);
    case ProtocolId::kGq: {
      if (params.gq_exponent < 3 || !is_probable_prime(params.gq_exponent)) {
        throw InvalidSetting("GQ exponent must be an odd prime");
      }
      for (;;) {
        RsaModulus mod = gen_rsa_modulus(params.modulus_bits, rng);
        const BigInt phi = (mod.p - 1) * (mod.q - 1);
        if (coprime(phi, params.gq_exponent)) return mod;
      }
    }
    case ProtocolId::kSchnorr: {
      const unsigned q_bits =
          params.subgroup_bits ? params.subgroup_bits : default_subgroup_bits(params.modulus_bits);
      return gen_schnorr_group(params.modulus_bits, q_bits, rng);
    }
    case ProtocolId::kEcSqrt:
      return gen_ring_curve(params.ring_factor_bits, rng);
    case ProtocolId::kEcDlog:
      return gen_ec_group(params.ec_field_bits, 1, rng);
    case ProtocolId::kEcSchnorr2g:
      return gen_ec_group(params.ec_field_bits, 2, rng);
  }
  throw InvalidSetting("unknown protocol");
}

EcGroupSetting ec_group_on(const CurveParams& curve, std::size_t generator_count, Rng& rng) {
  const BigInt group_order = count_points(curve);
  const auto factors = factor_small(group_order);
  const BigInt order = factors.back();
  if (order < 3) throw InvalidSetting("curve order has no odd prime factor");
  const BigInt cofactor = group_order / order;
  EcGroupSetting setting{curve, {}, order};
  while (setting.generators.size() < generator_count) {
    const Point g = scalar_mul(cofactor, random_point(curve, rng), curve);
    if (g.is_infinity()) continue;
    bool duplicate = false;
    for (const auto& existing : setting.generators) duplicate = duplicate || existing == g;
    if (!duplicate) setting.generators.push_back(g);
  }
  return setting;
}

EcGroupSetting gen_ec_group(unsigned field_bits, std::size_t generator_count, Rng& rng) {
  if (field_bits < 5 || field_bits > 20) {
    throw InvalidSetting("EC field size must be between 5 and 20 bits (desk scale)");
  }
  const unsigned min_prime_bits = field_bits > 6 ? field_bits - 3 : 3;
  for (;;) {
    const BigInt m = random_prime(field_bits, rng);
    if (m < 5) continue;
    const BigInt a = rand_below(m, rng);
    const BigInt b = rand_below(m, rng);
    CurveParams curve;
    try {
      curve = CurveParams::make(m, a, b, true);
    } catch (const InvalidCurve&) {
      continue;
    }
    const CurveReport report = curve_security_check(curve, min_prime_bits);
    if (!report.all_ok()) continue;
    return ec_group_on(curve, generator_count, rng);
  }
}

RingCurveSetting gen_ring_curve(unsigned factor_bits, Rng& rng) {
  if (factor_bits < 3 || factor_bits > 20) {
    throw InvalidSetting("ring factor size must be between 3 and 20 bits");
  }
  for (;;) {
    const BigInt p = random_prime(factor_bits, rng);
    const BigInt q = random_prime(factor_bits, rng);
    if (p == q || p < 5 || q < 5) continue;
    const BigInt n = p * q;
    const BigInt a = rand_below(n, rng);
    const BigInt b = rand_below(n, rng);
    const BigInt disc = mod_reduce(4 * a * a * a + 27 * b * b, n);
    if (!coprime(disc, n)) continue;
    return {CurveParams::make(n, a, b, false), p, q};
  }
}

Point random_ring_point(const RingCurveSetting& setting, Rng& rng) {
  const auto& c = setting.curve;
  const CurveParams cp = CurveParams::make(setting.p, c.a, c.b, true);
  const CurveParams cq = CurveParams::make(setting.q, c.a, c.b, true);
  const Point pp = random_point(cp, rng);
  const Point pq = random_point(cq, rng);
  const std::pair<BigInt, BigInt> xs[] = {{pp.x(), setting.p}, {pq.x(), setting.q}};
  const std::pair<BigInt, BigInt> ys[] = {{pp.y(), setting.p}, {pq.y(), setting.q}};
  return Point::affine(crt_combine(xs), crt_combine(ys));
}

}  // namespace zkid
