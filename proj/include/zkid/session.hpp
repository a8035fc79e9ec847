#pragma once

// Prover and verifier state machines. Each round runs
//
//   prover.commit() -> verifier.receive_commitment() -> verifier.challenge()
//   -> prover.respond() -> verifier.check()
//
// and any call out of this order raises StateOrderViolation. The prover's
// per-round randomness is erased as soon as the response is produced.

#include <cstdint>
#include <deque>
#include <optional>
#include <utility>
#include <variant>

#include "zkid/keys.hpp"
#include "zkid/wire.hpp"

namespace zkid {

/// Per-round prover randomness: r, (r1, r2), or a point R.
using CommitmentSecret = std::variant<BigInt, std::pair<BigInt, BigInt>, Point>;

/// Exclusive upper bound of the challenge space: 2 for bit challenges, 2^k
/// for the Fiat-Shamir bit vector, v for GQ, 2^challenge_bits otherwise.
BigInt challenge_bound(const VerifierKey& key, const ProtocolConfig& cfg);

/// Challenges travel as fixed-width big-endian integers of this many bytes.
std::size_t challenge_width(const VerifierKey& key, const ProtocolConfig& cfg);

Frame make_challenge_frame(const VerifierKey& key, const ProtocolConfig& cfg, const BigInt& value);

/// Decodes and range-checks a challenge frame. Throws MalformedFrame or
/// ChallengeOutOfRange.
BigInt parse_challenge_frame(const VerifierKey& key, const ProtocolConfig& cfg, const Frame& frame);

/// Rejects configurations that do not fit the protocol (InvalidSetting).
void validate_config(const VerifierKey& key, const ProtocolConfig& cfg);

Frame make_params_frame(const VerifierKey& key, const ProtocolConfig& cfg);

/// W = y1*P1 + y2*P2 + e*V; the verifier accepts iff x_W equals x_Q.
Point ec_schnorr2g_w(const EcSchnorr2gPublic& pub, const BigInt& y1, const BigInt& y2,
                     const BigInt& e, MulCounter& ctr);

class ProverSession {
 public:
  ProverSession(ProverKey key, ProtocolConfig cfg, Rng rng);

  ProtocolId protocol() const { return protocol_; }
  const ProtocolConfig& config() const { return cfg_; }
  const ProverKey& key() const { return key_; }
  const VerifierKey& public_key() const { return public_; }

  Frame params_frame() const { return make_params_frame(public_, cfg_); }

  /// Draws fresh randomness (or takes a precomputed commitment) and commits.
  Frame commit();
  /// Commits with caller-chosen randomness.
  Frame commit_with(CommitmentSecret secret);
  Frame respond(const Frame& challenge);

  /// Offline phase for SCHNORR and EC_SCHNORR2G: prepares `count`
  /// commitments whose cost is charged to offline_muls().
  void precompute(std::size_t count);
  std::size_t precomputed() const { return pool_.size(); }
  bool uses_precomputation() const { return precompute_mode_; }

  bool has_pending_secret() const { return pending_.has_value(); }
  std::size_t completed_rounds() const { return completed_rounds_; }

  const MulCounter& online_muls() const { return online_; }
  const MulCounter& offline_muls() const { return offline_; }

  /// Bytes of key material read during the online phase, each value
  /// serialised in wire form.
  std::size_t key_bytes() const;
  /// Largest serialised size of per-round state seen so far (precomputed
  /// pool, pending randomness and cached commitment).
  std::size_t peak_state_bytes() const { return peak_state_; }

 private:
  struct Prepared {
    CommitmentSecret secret;
    Bytes payload;
  };

  Prepared prepare(CommitmentSecret secret, MulCounter& ctr) const;
  CommitmentSecret draw_secret();
  Frame emit_commit(Prepared prepared);
  void note_state();

  ProverKey key_;
  VerifierKey public_;
  ProtocolConfig cfg_;
  ProtocolId protocol_;
  Rng rng_;
  MulCounter online_;
  MulCounter offline_;

  std::optional<CommitmentSecret> pending_;
  Bytes last_commitment_;
  std::deque<Prepared> pool_;
  bool precompute_mode_ = false;
  std::size_t completed_rounds_ = 0;
  std::size_t peak_state_ = 0;
};

class VerifierSession {
 public:
  VerifierSession(VerifierKey key, ProtocolConfig cfg, Rng rng);

  ProtocolId protocol() const { return protocol_; }
  const ProtocolConfig& config() const { return cfg_; }
  const VerifierKey& key() const { return key_; }

  /// Validates the prover's announced parameters. Returns false when they
  /// do not match this verifier's configuration or key.
  bool receive_params(const Frame& frame);

  /// Stores the commitment. Throws MalformedFrame if it cannot be decoded.
  void receive_commitment(const Frame& frame);
  Frame challenge();
  Frame challenge_with(const BigInt& value);
  /// Evaluates the verification equation for this round.
  bool check(const Frame& response);

  std::size_t accepted_rounds() const { return accepted_; }
  std::size_t completed_rounds() const { return completed_; }
  const BigInt& last_challenge() const { return challenge_; }

  MulCounter& muls() { return muls_; }

 private:
  enum class Stage { kAwaitCommit, kCommitted, kChallenged };

  bool evaluate(const Frame& response);

  VerifierKey key_;
  ProtocolConfig cfg_;
  ProtocolId protocol_;
  Rng rng_;
  MulCounter muls_;
  Stage stage_ = Stage::kAwaitCommit;

  // Decoded commitment: an integer for the Z_n protocols, a point otherwise.
  BigInt commit_int_;
  Point commit_point_;
  bool identity_ok_ = true;
  BigInt challenge_;
  std::size_t accepted_ = 0;
  std::size_t completed_ = 0;
};

}  // namespace zkid
