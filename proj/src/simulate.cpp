#include <algorithm>

#include "zkid/errors.hpp"
#include "zkid/protocols.hpp"

namespace zkid {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const BigInt& coin_int(const SimulatorCoin& coin) {
  if (const auto* c = std::get_if<BigInt>(&coin)) return *c;
  throw std::invalid_argument("simulator coin must be a single integer for this protocol");
}

const std::pair<BigInt, BigInt>& coin_pair(const SimulatorCoin& coin) {
  if (const auto* c = std::get_if<std::pair<BigInt, BigInt>>(&coin)) return *c;
  throw std::invalid_argument("simulator coin must be a pair for EC_SCHNORR2G");
}

SimulatorCoin draw_coin(const VerifierKey& pub, Rng& rng) {
  return std::visit(
      Overloaded{
          [&](const QrPublic& k) -> SimulatorCoin { return rand_unit(k.n, rng); },
          [&](const FsPublic& k) -> SimulatorCoin { return rand_unit(k.n, rng); },
          [&](const GqPublic& k) -> SimulatorCoin { return rand_unit(k.n, rng); },
          [&](const SchnorrPublic& k) -> SimulatorCoin { return rand_below(k.group.q, rng); },
          [&](const EcSqrtPublic& k) -> SimulatorCoin { return rand_range(1, k.curve.m - 1, rng); },
          [&](const EcDlogPublic& k) -> SimulatorCoin { return rand_below(k.order, rng); },
          [&](const EcSchnorr2gPublic& k) -> SimulatorCoin {
            BigInt y1 = rand_below(k.order, rng);
            BigInt y2 = rand_below(k.order, rng);
            return std::pair{std::move(y1), std::move(y2)};
          },
      },
      pub);
}

Frame int_frame(ProtocolId id, MsgType type, const BigInt& x) {
  Frame f{id, type, {}};
  append_int(f.payload, x);
  return f;
}

Frame point_frame(ProtocolId id, MsgType type, const Point& p, const CurveParams& curve) {
  return {id, type, encode_point(p, curve)};
}

}  // namespace

RoundFrames simulate_round_with(const VerifierKey& pub, const ProtocolConfig& cfg,
                                const BigInt& e, const SimulatorCoin& coin) {
  const ProtocolId id = protocol_of(pub);
  RoundFrames out;
  out.challenge = make_challenge_frame(pub, cfg, e);
  MulCounter scratch;
  std::visit(
      Overloaded{
          [&](const QrPublic& k) {
            const BigInt& a = coin_int(coin);
            BigInt s = mod_mul(a, a, k.n, scratch);
            if (e == 1) s = mod_mul(s, mod_inv(k.b, k.n), k.n, scratch);
            out.commit = {id, MsgType::kCommit, {}};
            append_blob(out.commit.payload, k.identity);
            append_int(out.commit.payload, s);
            out.response = int_frame(id, MsgType::kResponse, a);
          },
          [&](const FsPublic& k) {
            const BigInt& y = coin_int(coin);
            BigInt x = mod_mul(y, y, k.n, scratch);
            for (std::size_t i = 0; i < k.v.size(); ++i) {
              if (mpz_tstbit(e.get_mpz_t(), i)) x = mod_mul(x, mod_inv(k.v[i], k.n), k.n, scratch);
            }
            out.commit = int_frame(id, MsgType::kCommit, x);
            out.response = int_frame(id, MsgType::kResponse, y);
          },
          [&](const GqPublic& k) {
            const BigInt& y = coin_int(coin);
            const BigInt t = mod_mul(mod_exp(y, k.v, k.n), mod_exp(k.j, e, k.n), k.n, scratch);
            out.commit = int_frame(id, MsgType::kCommit, t);
            out.response = int_frame(id, MsgType::kResponse, y);
          },
          [&](const SchnorrPublic& k) {
            const BigInt& y = coin_int(coin);
            const auto& [p, q, g] = k.group;
            const BigInt b_inv_e = mod_exp(mod_inv(k.b, p), e, p);
            out.commit = int_frame(id, MsgType::kCommit, mod_mul(mod_exp(g, y, p), b_inv_e, p, scratch));
            out.response = int_frame(id, MsgType::kResponse, y);
          },
          [&](const EcSqrtPublic& k) {
            const Point r = scalar_mul(coin_int(coin), k.b, k.curve);
            Point s = point_add(r, r, k.curve);
            if (e == 1) {
              s = point_sub(s, k.b, k.curve);
              (void)point_add(s, k.b, k.curve);  // the verifier must be able to form S + B
            }
            out.commit = point_frame(id, MsgType::kCommit, s, k.curve);
            out.response = point_frame(id, MsgType::kResponse, r, k.curve);
          },
          [&](const EcDlogPublic& k) {
            const BigInt& z = coin_int(coin);
            Point a = scalar_mul(z, k.g, k.curve);
            if (e == 1) a = point_sub(a, k.b, k.curve);
            out.commit = point_frame(id, MsgType::kCommit, a, k.curve);
            out.response = int_frame(id, MsgType::kResponse, z);
          },
          [&](const EcSchnorr2gPublic& k) {
            const auto& [y1, y2] = coin_pair(coin);
            const Point q = ec_schnorr2g_w(k, y1, y2, e, scratch);
            out.commit = point_frame(id, MsgType::kCommit, q, k.curve);
            out.response = {id, MsgType::kResponse, {}};
            append_int(out.response.payload, y1);
            append_int(out.response.payload, y2);
          },
      },
      pub);
  return out;
}

RoundFrames simulate_round(const VerifierKey& pub, const ProtocolConfig& cfg, Rng& rng) {
  const BigInt e = rand_below(challenge_bound(pub, cfg), rng);
  for (;;) {
    try {
      return simulate_round_with(pub, cfg, e, draw_coin(pub, rng));
    } catch (const RingInversionFailure&) {
      // EC_SQRT only: this coin hit a non-invertible slope; draw another.
    }
  }
}

Transcript simulate_transcript(const VerifierKey& pub, const ProtocolConfig& cfg, std::size_t t,
                               Rng& rng) {
  Transcript tr;
  tr.protocol = protocol_of(pub);
  ProtocolConfig run_cfg = cfg;
  run_cfg.rounds = static_cast<std::uint32_t>(t);
  VerifierSession verifier(pub, run_cfg, rng.fork());

  const auto record = [&](std::vector<TranscriptEntry>& log, std::size_t round, Direction dir,
                          const Frame& frame) {
    const std::size_t size = encode_frame(frame).size();
    (dir == Direction::kProverToVerifier ? tr.bytes_p2v : tr.bytes_v2p) += size;
    tr.max_frame = std::max(tr.max_frame, size);
    log.push_back({round, dir, frame});
  };

  record(tr.setup, 0, Direction::kProverToVerifier, make_params_frame(pub, run_cfg));
  bool ok = true;
  for (std::size_t round = 1; round <= t; ++round) {
    const RoundFrames rf = simulate_round(pub, run_cfg, rng);
    record(tr.entries, round, Direction::kProverToVerifier, rf.commit);
    record(tr.entries, round, Direction::kVerifierToProver, rf.challenge);
    record(tr.entries, round, Direction::kProverToVerifier, rf.response);
    verifier.receive_commitment(rf.commit);
    verifier.challenge_with(parse_challenge_frame(pub, run_cfg, rf.challenge));
    ok = ok && verifier.check(rf.response);
    tr.rounds_run = round;
  }
  tr.verdict = ok ? Verdict::kAccept : Verdict::kReject;
  record(tr.entries, tr.rounds_run, Direction::kVerifierToProver,
         Frame{tr.protocol, MsgType::kVerdict, {static_cast<std::uint8_t>(ok ? 1 : 0)}});
  return tr;
}

Verdict cheating_prover_run(const VerifierKey& pub, const ProtocolConfig& cfg, std::size_t t,
                            Rng& rng, const CheatOptions& options) {
  VerifierSession verifier(pub, cfg, rng.fork());
  const BigInt bound = challenge_bound(pub, cfg);
  for (std::size_t round = 1; round <= t; ++round) {
    const BigInt guess = options.guess == GuessStrategy::kRandom ? rand_below(bound, rng) : BigInt(0);
    RoundFrames rf;
    for (;;) {
      try {
        rf = simulate_round_with(pub, cfg, guess, draw_coin(pub, rng));
        break;
      } catch (const RingInversionFailure&) {
      }
    }
    verifier.receive_commitment(rf.commit);
    if (options.rigged_challenge) {
      verifier.challenge_with(*options.rigged_challenge);
    } else {
      verifier.challenge();
    }
    if (!verifier.check(rf.response)) return Verdict::kReject;
  }
  return Verdict::kAccept;
}

}  // namespace zkid
