#pragma once

// Protocol runs over a metered channel, the transcript simulator and the
// cheating-prover harness.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "zkid/session.hpp"

namespace zkid {

enum class Verdict : std::uint8_t { kReject = 0, kAccept = 1 };

struct TranscriptEntry {
  std::size_t round = 0;  // 1-based; the verdict frame carries the last round number
  Direction direction = Direction::kProverToVerifier;
  Frame frame;
};

struct Transcript {
  ProtocolId protocol = ProtocolId::kQr;
  /// Frames exchanged before the first round (the params frame).
  std::vector<TranscriptEntry> setup;
  /// Commit, challenge and response per round, then the verdict frame.
  std::vector<TranscriptEntry> entries;
  Verdict verdict = Verdict::kReject;
  std::size_t rounds_run = 0;
  std::optional<std::size_t> failed_round;
  std::uint64_t bytes_p2v = 0;
  std::uint64_t bytes_v2p = 0;
  std::size_t max_frame = 0;

  std::uint64_t bandwidth_bits() const { return 8 * (bytes_p2v + bytes_v2p); }
};

/// Runs the verifier's configured number of rounds. Stops at the first
/// failed round. Frames the verifier cannot decode count as a rejection;
/// out-of-order calls propagate as StateOrderViolation.
Transcript run_rounds(ProverSession& prover, VerifierSession& verifier, MeteredChannel& channel);

/// One commit/challenge/response triple, as produced by the simulator.
struct RoundFrames {
  Frame commit;
  Frame challenge;
  Frame response;
};

/// Simulator coin: the response value(s) chosen before the commitment. For
/// EC_SQRT the coin is a scalar k and the response point is k*B.
using SimulatorCoin = std::variant<BigInt, std::pair<BigInt, BigInt>>;

/// Builds an accepting round for a fixed challenge without the secret: the
/// response is chosen first and the commitment solved for.
RoundFrames simulate_round_with(const VerifierKey& pub, const ProtocolConfig& cfg,
                                const BigInt& challenge, const SimulatorCoin& coin);
/// Draws the challenge, then the coin, then calls simulate_round_with.
RoundFrames simulate_round(const VerifierKey& pub, const ProtocolConfig& cfg, Rng& rng);

/// t simulated rounds, each checked by a fresh verifier, framed as a
/// transcript with a trailing verdict.
Transcript simulate_transcript(const VerifierKey& pub, const ProtocolConfig& cfg, std::size_t t,
                               Rng& rng);

enum class GuessStrategy { kRandom, kAlwaysZero };

struct CheatOptions {
  GuessStrategy guess = GuessStrategy::kRandom;
  /// When set, the verifier issues this challenge every round.
  std::optional<BigInt> rigged_challenge;
};

/// Secret-less prover that guesses each challenge and prepares a commitment
/// passing only that branch. Accept iff every guess was right.
Verdict cheating_prover_run(const VerifierKey& pub, const ProtocolConfig& cfg, std::size_t t,
                            Rng& rng, const CheatOptions& options = {});

}  // namespace zkid
