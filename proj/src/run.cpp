#include "zkid/errors.hpp"
#include "zkid/protocols.hpp"

namespace zkid {
namespace {

constexpr auto kP2V = Direction::kProverToVerifier;
constexpr auto kV2P = Direction::kVerifierToProver;

}  // namespace

Transcript run_rounds(ProverSession& prover, VerifierSession& verifier, MeteredChannel& channel) {
  if (prover.protocol() != verifier.protocol()) {
    throw InvalidSetting("prover and verifier run different protocols");
  }
  Transcript tr;
  tr.protocol = verifier.protocol();
  const std::size_t rounds = verifier.config().rounds;

  const auto send = [&](std::vector<TranscriptEntry>& log, std::size_t round, Direction dir,
                        Frame frame) {
    channel.send(dir, frame);
    log.push_back({round, dir, std::move(frame)});
    return channel.recv(dir);
  };

  bool ok = true;
  try {
    ok = verifier.receive_params(send(tr.setup, 0, kP2V, prover.params_frame()));
  } catch (const MalformedFrame&) {
    ok = false;
  } catch (const WireError& e) {
    if (dynamic_cast<const ChannelClosed*>(&e)) throw;
    ok = false;
  }
  if (!ok) tr.failed_round = 0;

  for (std::size_t round = 1; ok && round <= rounds; ++round) {
    tr.rounds_run = round;
    try {
      verifier.receive_commitment(send(tr.entries, round, kP2V, prover.commit()));
      const Frame challenge = send(tr.entries, round, kV2P, verifier.challenge());
      ok = verifier.check(send(tr.entries, round, kP2V, prover.respond(challenge)));
    } catch (const ChannelClosed&) {
      throw;
    } catch (const WireError&) {
      ok = false;
    } catch (const MalformedFrame&) {
      ok = false;
    } catch (const ChallengeOutOfRange&) {
      ok = false;
    }
    if (!ok) tr.failed_round = round;
  }

  tr.verdict = ok ? Verdict::kAccept : Verdict::kReject;
  Frame verdict{verifier.protocol(), MsgType::kVerdict, {static_cast<std::uint8_t>(ok ? 1 : 0)}};
  try {
    send(tr.entries, tr.rounds_run, kV2P, std::move(verdict));
  } catch (const ChannelClosed&) {
    throw;
  } catch (const WireError&) {
    // A mangled verdict does not change the verifier's decision.
  }

  tr.bytes_p2v = channel.bytes(kP2V);
  tr.bytes_v2p = channel.bytes(kV2P);
  tr.max_frame = channel.max_frame_size();
  return tr;
}

}  // namespace zkid
