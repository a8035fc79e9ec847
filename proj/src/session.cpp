#include "zkid/session.hpp"

#include <algorithm>

#include "zkid/errors.hpp"

namespace zkid {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool uses_wide_challenge(ProtocolId id) {
  return id == ProtocolId::kSchnorr || id == ProtocolId::kEcSchnorr2g;
}

const CurveParams* curve_of(const VerifierKey& key) {
  return std::visit(Overloaded{
                        [](const EcSqrtPublic& k) { return &k.curve; },
                        [](const EcDlogPublic& k) { return &k.curve; },
                        [](const EcSchnorr2gPublic& k) { return &k.curve; },
                        [](const auto&) -> const CurveParams* { return nullptr; },
                    },
                    key);
}

const Bytes* identity_of(const VerifierKey& key) {
  return std::visit(Overloaded{
                        [](const QrPublic& k) -> const Bytes* { return &k.identity; },
                        [](const FsPublic& k) -> const Bytes* { return &k.identity; },
                        [](const GqPublic& k) -> const Bytes* { return &k.identity; },
                        [](const auto&) -> const Bytes* { return nullptr; },
                    },
                    key);
}

// Identity that travels in the params frame. QR carries it in every
// commitment instead.
Bytes params_identity(const VerifierKey& key) {
  if (std::holds_alternative<FsPublic>(key)) return std::get<FsPublic>(key).identity;
  if (std::holds_alternative<GqPublic>(key)) return std::get<GqPublic>(key).identity;
  return {};
}

void expect_frame(const Frame& frame, ProtocolId protocol, MsgType type, const char* what) {
  if (frame.protocol != protocol || frame.type != type) {
    throw MalformedFrame(std::string("expected a ") + what + " frame for " +
                         std::string(protocol_name(protocol)));
  }
}

std::size_t secret_size(const CommitmentSecret& secret, const VerifierKey& key) {
  return std::visit(Overloaded{
                        [](const BigInt& r) { return encoded_int_size(r); },
                        [](const std::pair<BigInt, BigInt>& r) {
                          return encoded_int_size(r.first) + encoded_int_size(r.second);
                        },
                        [&](const Point& r) { return encoded_point_size(r, *curve_of(key)); },
                    },
                    secret);
}

template <class T>
const T& secret_as(const CommitmentSecret& secret, ProtocolId protocol) {
  if (const auto* s = std::get_if<T>(&secret)) return *s;
  throw std::invalid_argument("commitment randomness has the wrong shape for " +
                              std::string(protocol_name(protocol)));
}

// Decoding helpers that report malformed payloads uniformly.
BigInt payload_int(std::span<const std::uint8_t> payload, std::size_t& offset) {
  try {
    return read_int(payload, offset);
  } catch (const WireError& e) {
    throw MalformedFrame(std::string("bad integer field: ") + e.what());
  }
}

void expect_consumed(std::span<const std::uint8_t> payload, std::size_t offset) {
  if (offset != payload.size()) throw MalformedFrame("unexpected bytes after payload fields");
}

BigInt single_int(const Frame& frame) {
  std::size_t offset = 0;
  BigInt x = payload_int(frame.payload, offset);
  expect_consumed(frame.payload, offset);
  return x;
}

Point single_point(const Frame& frame, const CurveParams& curve) {
  std::size_t offset = 0;
  Point p = decode_point(frame.payload, offset, curve);
  expect_consumed(frame.payload, offset);
  return p;
}

bool coprime(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g == 1;
}

}  // namespace

BigInt challenge_bound(const VerifierKey& key, const ProtocolConfig& cfg) {
  return std::visit(Overloaded{
                        [](const FsPublic& k) -> BigInt { return BigInt(1) << k.v.size(); },
                        [](const GqPublic& k) -> BigInt { return k.v; },
                        [&](const SchnorrPublic&) -> BigInt { return BigInt(1) << cfg.challenge_bits; },
                        [&](const EcSchnorr2gPublic&) -> BigInt {
                          return BigInt(1) << cfg.challenge_bits;
                        },
                        [](const auto&) -> BigInt { return 2; },
                    },
                    key);
}

std::size_t challenge_width(const VerifierKey& key, const ProtocolConfig& cfg) {
  return std::max<std::size_t>(1, byte_length(challenge_bound(key, cfg) - 1));
}

Frame make_challenge_frame(const VerifierKey& key, const ProtocolConfig& cfg, const BigInt& value) {
  if (value < 0 || value >= challenge_bound(key, cfg)) {
    throw ChallengeOutOfRange("challenge " + value.get_str() + " outside the challenge space");
  }
  return {protocol_of(key), MsgType::kChallenge, to_bytes(value, challenge_width(key, cfg))};
}

BigInt parse_challenge_frame(const VerifierKey& key, const ProtocolConfig& cfg, const Frame& frame) {
  expect_frame(frame, protocol_of(key), MsgType::kChallenge, "challenge");
  if (frame.payload.size() != challenge_width(key, cfg)) {
    throw MalformedFrame("challenge has the wrong width");
  }
  BigInt value = from_bytes(frame.payload);
  if (value >= challenge_bound(key, cfg)) {
    throw ChallengeOutOfRange("challenge " + value.get_str() + " outside the challenge space");
  }
  return value;
}

void validate_config(const VerifierKey& key, const ProtocolConfig& cfg) {
  const ProtocolId id = protocol_of(key);
  if (uses_wide_challenge(id)) {
    if (cfg.challenge_bits < 1 || cfg.challenge_bits > 512) {
      throw InvalidSetting("challenge_bits must lie in [1, 512]");
    }
  } else if (cfg.challenge_bits != 1) {
    throw InvalidSetting(std::string(protocol_name(id)) + " uses challenge_bits = 1");
  }
  if (const auto* fs = std::get_if<FsPublic>(&key); fs && (fs->v.empty() || fs->v.size() > 64)) {
    throw InvalidSetting("FS needs between 1 and 64 secrets");
  }
}

Frame make_params_frame(const VerifierKey& key, const ProtocolConfig& cfg) {
  Frame frame{protocol_of(key), MsgType::kParams, {}};
  append_int(frame.payload, cfg.rounds);
  append_int(frame.payload, cfg.challenge_bits);
  append_blob(frame.payload, params_identity(key));
  return frame;
}

Point ec_schnorr2g_w(const EcSchnorr2gPublic& pub, const BigInt& y1, const BigInt& y2,
                     const BigInt& e, MulCounter& ctr) {
  const auto& c = pub.curve;
  const Point w = point_add(scalar_mul(y1, pub.p1, c, ctr), scalar_mul(y2, pub.p2, c, ctr), c, ctr);
  return point_add(w, scalar_mul(e, pub.v, c, ctr), c, ctr);
}

// ---------------------------------------------------------------------------
// ProverSession

ProverSession::ProverSession(ProverKey key, ProtocolConfig cfg, Rng rng)
    : key_(std::move(key)),
      public_(public_part(key_)),
      cfg_(std::move(cfg)),
      protocol_(protocol_of(key_)),
      rng_(std::move(rng)) {
  validate_config(public_, cfg_);
}

CommitmentSecret ProverSession::draw_secret() {
  return std::visit(
      Overloaded{
          [&](const QrSecret& k) -> CommitmentSecret { return rand_unit(k.pub.n, rng_); },
          [&](const FsSecret& k) -> CommitmentSecret { return rand_unit(k.pub.n, rng_); },
          [&](const GqSecret& k) -> CommitmentSecret { return rand_unit(k.pub.n, rng_); },
          [&](const SchnorrSecret& k) -> CommitmentSecret { return rand_below(k.pub.group.q, rng_); },
          [&](const EcSqrtSecret& k) -> CommitmentSecret {
            // Both response branches and both verifier checks must be
            // computable over the ring; resample R until they are.
            const RingCurveSetting ring{k.pub.curve, k.p, k.q};
            const auto& c = k.pub.curve;
            for (;;) {
              Point r = random_ring_point(ring, rng_);
              try {
                const Point s = point_add(r, r, c);
                const Point m = point_add(r, k.a, c);
                (void)point_add(m, m, c);
                (void)point_add(s, k.pub.b, c);
                return r;
              } catch (const RingInversionFailure&) {
              }
            }
          },
          [&](const EcDlogSecret& k) -> CommitmentSecret { return rand_below(k.pub.order, rng_); },
          [&](const EcSchnorr2gSecret& k) -> CommitmentSecret {
            BigInt r1 = rand_range(1, k.pub.order - 1, rng_);
            BigInt r2 = rand_range(1, k.pub.order - 1, rng_);
            return std::pair{std::move(r1), std::move(r2)};
          },
      },
      key_);
}

ProverSession::Prepared ProverSession::prepare(CommitmentSecret secret, MulCounter& ctr) const {
  Bytes payload;
  std::visit(
      Overloaded{
          [&](const QrSecret& k) {
            const auto& r = secret_as<BigInt>(secret, protocol_);
            append_blob(payload, k.pub.identity);
            append_int(payload, mod_mul(r, r, k.pub.n, ctr));
          },
          [&](const FsSecret& k) {
            const auto& r = secret_as<BigInt>(secret, protocol_);
            append_int(payload, mod_mul(r, r, k.pub.n, ctr));
          },
          [&](const GqSecret& k) {
            const auto& r = secret_as<BigInt>(secret, protocol_);
            append_int(payload, mod_exp(r, k.pub.v, k.pub.n, ctr));
          },
          [&](const SchnorrSecret& k) {
            const auto& r = secret_as<BigInt>(secret, protocol_);
            append_int(payload, mod_exp(k.pub.group.g, r, k.pub.group.p, ctr));
          },
          [&](const EcSqrtSecret& k) {
            const auto& r = secret_as<Point>(secret, protocol_);
            payload = encode_point(point_add(r, r, k.pub.curve, ctr), k.pub.curve);
          },
          [&](const EcDlogSecret& k) {
            const auto& r = secret_as<BigInt>(secret, protocol_);
            payload = encode_point(scalar_mul(r, k.pub.g, k.pub.curve, ctr), k.pub.curve);
          },
          [&](const EcSchnorr2gSecret& k) {
            const auto& [r1, r2] = secret_as<std::pair<BigInt, BigInt>>(secret, protocol_);
            const auto& c = k.pub.curve;
            const Point q =
                point_add(scalar_mul(r1, k.pub.p1, c, ctr), scalar_mul(r2, k.pub.p2, c, ctr), c, ctr);
            payload = encode_point(q, c);
          },
      },
      key_);
  return {std::move(secret), std::move(payload)};
}

void ProverSession::precompute(std::size_t count) {
  if (!uses_wide_challenge(protocol_)) {
    throw InvalidSetting("precomputed commitments are only used by SCHNORR and EC_SCHNORR2G");
  }
  precompute_mode_ = true;
  for (std::size_t i = 0; i < count; ++i) pool_.push_back(prepare(draw_secret(), offline_));
  note_state();
}

Frame ProverSession::commit() {
  if (pending_) throw StateOrderViolation("commit called while a challenge is outstanding");
  if (!pool_.empty()) {
    Prepared next = std::move(pool_.front());
    pool_.pop_front();
    return emit_commit(std::move(next));
  }
  return emit_commit(prepare(draw_secret(), online_));
}

Frame ProverSession::commit_with(CommitmentSecret secret) {
  if (pending_) throw StateOrderViolation("commit called while a challenge is outstanding");
  return emit_commit(prepare(std::move(secret), online_));
}

Frame ProverSession::emit_commit(Prepared prepared) {
  pending_ = std::move(prepared.secret);
  last_commitment_ = prepared.payload;
  note_state();
  return {protocol_, MsgType::kCommit, std::move(prepared.payload)};
}

Frame ProverSession::respond(const Frame& challenge_frame) {
  if (!pending_) throw StateOrderViolation("respond called before commit");
  const BigInt e = parse_challenge_frame(public_, cfg_, challenge_frame);
  const CommitmentSecret& secret = *pending_;
  Bytes payload;
  std::visit(
      Overloaded{
          [&](const QrSecret& k) {
            const auto& r = std::get<BigInt>(secret);
            append_int(payload, e == 0 ? r : mod_mul(r, k.x, k.pub.n, online_));
          },
          [&](const FsSecret& k) {
            BigInt y = std::get<BigInt>(secret);
            for (std::size_t i = 0; i < k.s.size(); ++i) {
              if (mpz_tstbit(e.get_mpz_t(), i)) y = mod_mul(y, k.s[i], k.pub.n, online_);
            }
            append_int(payload, y);
          },
          [&](const GqSecret& k) {
            const auto& r = std::get<BigInt>(secret);
            const BigInt se = mod_exp(k.s, e, k.pub.n, online_);
            append_int(payload, mod_mul(r, se, k.pub.n, online_));
          },
          [&](const SchnorrSecret& k) {
            const auto& r = std::get<BigInt>(secret);
            const BigInt& q = k.pub.group.q;
            append_int(payload, mod_reduce(r + mod_mul(k.x, e, q, online_), q));
          },
          [&](const EcSqrtSecret& k) {
            const auto& r = std::get<Point>(secret);
            const Point out = e == 0 ? r : point_add(r, k.a, k.pub.curve, online_);
            payload = encode_point(out, k.pub.curve);
          },
          [&](const EcDlogSecret& k) {
            const auto& r = std::get<BigInt>(secret);
            append_int(payload, e == 0 ? r : mod_reduce(r + k.m, k.pub.order));
          },
          [&](const EcSchnorr2gSecret& k) {
            const auto& [r1, r2] = std::get<std::pair<BigInt, BigInt>>(secret);
            const BigInt& n = k.pub.order;
            append_int(payload, mod_reduce(r1 + mod_mul(e, k.d1, n, online_), n));
            append_int(payload, mod_reduce(r2 + mod_mul(e, k.d2, n, online_), n));
          },
      },
      key_);
  pending_.reset();
  last_commitment_.clear();
  ++completed_rounds_;
  return {protocol_, MsgType::kResponse, std::move(payload)};
}

void ProverSession::note_state() {
  std::size_t bytes = last_commitment_.size();
  if (pending_) bytes += secret_size(*pending_, public_);
  for (const auto& p : pool_) bytes += secret_size(p.secret, public_) + p.payload.size();
  peak_state_ = std::max(peak_state_, bytes);
}

std::size_t ProverSession::key_bytes() const {
  const auto blob = [](const Bytes& b) { return 2 + b.size(); };
  const auto curve_bytes = [](const CurveParams& c) {
    return encoded_int_size(c.m) + encoded_int_size(c.a) + encoded_int_size(c.b);
  };
  return std::visit(
      Overloaded{
          [&](const QrSecret& k) {
            return encoded_int_size(k.x) + encoded_int_size(k.pub.n) + blob(k.pub.identity);
          },
          [&](const FsSecret& k) {
            std::size_t total = encoded_int_size(k.pub.n) + blob(k.pub.identity);
            for (const auto& s : k.s) total += encoded_int_size(s);
            return total;
          },
          [&](const GqSecret& k) {
            return encoded_int_size(k.s) + encoded_int_size(k.pub.n) + encoded_int_size(k.pub.v) +
                   blob(k.pub.identity);
          },
          [&](const SchnorrSecret& k) {
            std::size_t total = encoded_int_size(k.x) + encoded_int_size(k.pub.group.q);
            // p and g are only read while computing commitments.
            if (!precompute_mode_) {
              total += encoded_int_size(k.pub.group.p) + encoded_int_size(k.pub.group.g);
            }
            return total;
          },
          [&](const EcSqrtSecret& k) {
            return encoded_point_size(k.a, k.pub.curve) + curve_bytes(k.pub.curve) +
                   encoded_int_size(k.p) + encoded_int_size(k.q);
          },
          [&](const EcDlogSecret& k) {
            return encoded_int_size(k.m) + encoded_int_size(k.pub.order) +
                   encoded_point_size(k.pub.g, k.pub.curve) + curve_bytes(k.pub.curve);
          },
          [&](const EcSchnorr2gSecret& k) {
            std::size_t total =
                encoded_int_size(k.d1) + encoded_int_size(k.d2) + encoded_int_size(k.pub.order);
            if (!precompute_mode_) {
              total += encoded_point_size(k.pub.p1, k.pub.curve) +
                       encoded_point_size(k.pub.p2, k.pub.curve) + curve_bytes(k.pub.curve);
            }
            return total;
          },
      },
      key_);
}

// ---------------------------------------------------------------------------
// VerifierSession

VerifierSession::VerifierSession(VerifierKey key, ProtocolConfig cfg, Rng rng)
    : key_(std::move(key)), cfg_(std::move(cfg)), protocol_(protocol_of(key_)), rng_(std::move(rng)) {
  validate_config(key_, cfg_);
}

bool VerifierSession::receive_params(const Frame& frame) {
  expect_frame(frame, protocol_, MsgType::kParams, "params");
  std::size_t offset = 0;
  const BigInt rounds = payload_int(frame.payload, offset);
  const BigInt bits = payload_int(frame.payload, offset);
  Bytes identity;
  try {
    identity = read_blob(frame.payload, offset);
  } catch (const WireError& e) {
    throw MalformedFrame(std::string("bad identity field: ") + e.what());
  }
  expect_consumed(frame.payload, offset);
  return rounds == cfg_.rounds && bits == cfg_.challenge_bits && identity == params_identity(key_);
}

void VerifierSession::receive_commitment(const Frame& frame) {
  if (stage_ != Stage::kAwaitCommit) {
    throw StateOrderViolation("commitment received out of order");
  }
  expect_frame(frame, protocol_, MsgType::kCommit, "commit");
  identity_ok_ = true;
  if (const CurveParams* curve = curve_of(key_)) {
    commit_point_ = single_point(frame, *curve);
  } else if (std::holds_alternative<QrPublic>(key_)) {
    std::size_t offset = 0;
    Bytes identity;
    try {
      identity = read_blob(frame.payload, offset);
    } catch (const WireError& e) {
      throw MalformedFrame(std::string("bad identity field: ") + e.what());
    }
    commit_int_ = payload_int(frame.payload, offset);
    expect_consumed(frame.payload, offset);
    identity_ok_ = identity == *identity_of(key_);
  } else {
    commit_int_ = single_int(frame);
  }
  stage_ = Stage::kCommitted;
}

Frame VerifierSession::challenge() {
  if (stage_ != Stage::kCommitted) throw StateOrderViolation("challenge requested before commitment");
  return challenge_with(rand_below(challenge_bound(key_, cfg_), rng_));
}

Frame VerifierSession::challenge_with(const BigInt& value) {
  if (stage_ != Stage::kCommitted) throw StateOrderViolation("challenge requested before commitment");
  Frame frame = make_challenge_frame(key_, cfg_, value);
  challenge_ = value;
  stage_ = Stage::kChallenged;
  return frame;
}

bool VerifierSession::check(const Frame& response) {
  if (stage_ != Stage::kChallenged) throw StateOrderViolation("response checked before challenge");
  stage_ = Stage::kAwaitCommit;
  ++completed_;
  expect_frame(response, protocol_, MsgType::kResponse, "response");
  const bool ok = evaluate(response);
  if (ok) ++accepted_;
  return ok;
}

bool VerifierSession::evaluate(const Frame& response) {
  const BigInt& e = challenge_;
  MulCounter& ctr = muls_;
  return std::visit(
      Overloaded{
          [&](const QrPublic& k) {
            const BigInt r = single_int(response);
            const BigInt& s = commit_int_;
            if (!identity_ok_ || s <= 0 || s >= k.n || !coprime(s, k.n) || r >= k.n) return false;
            const BigInt lhs = mod_mul(r, r, k.n, ctr);
            return lhs == (e == 0 ? s : mod_mul(s, k.b, k.n, ctr));
          },
          [&](const FsPublic& k) {
            const BigInt y = single_int(response);
            const BigInt& x = commit_int_;
            if (x <= 0 || x >= k.n || !coprime(x, k.n) || y >= k.n) return false;
            BigInt rhs = x;
            for (std::size_t i = 0; i < k.v.size(); ++i) {
              if (mpz_tstbit(e.get_mpz_t(), i)) rhs = mod_mul(rhs, k.v[i], k.n, ctr);
            }
            return mod_mul(y, y, k.n, ctr) == rhs;
          },
          [&](const GqPublic& k) {
            const BigInt y = single_int(response);
            const BigInt& t = commit_int_;
            if (t <= 0 || t >= k.n || !coprime(t, k.n) || y >= k.n) return false;
            const BigInt lhs =
                mod_mul(mod_exp(y, k.v, k.n, ctr), mod_exp(k.j, e, k.n, ctr), k.n, ctr);
            return lhs == t;
          },
          [&](const SchnorrPublic& k) {
            const BigInt y = single_int(response);
            const auto& [p, q, g] = k.group;
            const BigInt& h = commit_int_;
            if (h <= 0 || h >= p || y >= q) return false;
            return mod_exp(g, y, p, ctr) == mod_mul(h, mod_exp(k.b, e, p, ctr), p, ctr);
          },
          [&](const EcSqrtPublic& k) {
            const Point r = single_point(response, k.curve);
            const Point& s = commit_point_;
            try {
              const Point lhs = point_add(r, r, k.curve, ctr);
              return lhs == (e == 0 ? s : point_add(s, k.b, k.curve, ctr));
            } catch (const RingInversionFailure&) {
              return false;
            }
          },
          [&](const EcDlogPublic& k) {
            const BigInt z = single_int(response);
            if (z >= k.order) return false;
            const Point lhs = scalar_mul(z, k.g, k.curve, ctr);
            return lhs == (e == 0 ? commit_point_ : point_add(commit_point_, k.b, k.curve, ctr));
          },
          [&](const EcSchnorr2gPublic& k) {
            std::size_t offset = 0;
            const BigInt y1 = payload_int(response.payload, offset);
            const BigInt y2 = payload_int(response.payload, offset);
            expect_consumed(response.payload, offset);
            if (y1 >= k.order || y2 >= k.order) return false;
            const Point w = ec_schnorr2g_w(k, y1, y2, e, ctr);
            const Point& q = commit_point_;
            // Accept iff x_Q = x_W.
            if (w.is_infinity() || q.is_infinity()) return w.is_infinity() && q.is_infinity();
            return w.x() == q.x();
          },
      },
      key_);
}

}  // namespace zkid
