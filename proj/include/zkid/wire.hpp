#pragma once

// Frame codec and metered channel.
//
// Frame layout (all multi-byte fields big-endian):
//
//   +----------+----------+-------------+-----------------+
//   | protocol | msg_type | length (2)  | payload (length)|
//   +----------+----------+-------------+-----------------+
//
// Integers inside payloads are [length:2][minimal big-endian magnitude].

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zkid/numtheory.hpp"

namespace zkid {

enum class ProtocolId : std::uint8_t {
  kQr = 0x01,
  kFs = 0x02,
  kGq = 0x03,
  kSchnorr = 0x04,
  kEcSqrt = 0x11,
  kEcDlog = 0x12,
  kEcSchnorr2g = 0x13,
};

inline constexpr ProtocolId kAllProtocols[] = {
    ProtocolId::kQr,     ProtocolId::kFs,     ProtocolId::kGq,          ProtocolId::kSchnorr,
    ProtocolId::kEcSqrt, ProtocolId::kEcDlog, ProtocolId::kEcSchnorr2g,
};

enum class MsgType : std::uint8_t {
  kCommit = 0x01,
  kChallenge = 0x02,
  kResponse = 0x03,
  kVerdict = 0x04,
  kParams = 0x05,
};

/// Command-line / report name: qr, fs, gq, schnorr, ec-sqrt, ec-dlog, ec-schnorr2g.
std::string_view protocol_name(ProtocolId id);
std::optional<ProtocolId> parse_protocol_name(std::string_view name);
std::optional<ProtocolId> protocol_from_byte(std::uint8_t b);
bool is_elliptic(ProtocolId id);

inline constexpr std::size_t kFrameHeaderSize = 4;
inline constexpr std::size_t kMaxPayload = 65535;

struct Frame {
  ProtocolId protocol = ProtocolId::kQr;
  MsgType type = MsgType::kCommit;
  Bytes payload;

  bool operator==(const Frame&) const = default;
};

Bytes encode_frame(const Frame& frame);
Frame decode_frame(std::span<const std::uint8_t> bytes);

/// Appends [length:2][magnitude] for x >= 0.
void append_int(Bytes& out, const BigInt& x);
Bytes encode_int(const BigInt& x);
std::size_t encoded_int_size(const BigInt& x);
/// Reads one integer starting at `offset` and advances it. Throws Truncated.
BigInt read_int(std::span<const std::uint8_t> bytes, std::size_t& offset);
/// Decodes exactly one integer; trailing bytes raise TrailingBytes.
BigInt decode_int(std::span<const std::uint8_t> bytes);

/// Length-prefixed opaque byte string, same prefix as integers.
void append_blob(Bytes& out, std::span<const std::uint8_t> blob);
Bytes read_blob(std::span<const std::uint8_t> bytes, std::size_t& offset);

std::string to_hex(std::span<const std::uint8_t> bytes);

enum class Direction : std::uint8_t {
  kProverToVerifier,
  kVerifierToProver,
};

std::string_view direction_arrow(Direction d);

/// In-process link between prover and verifier that counts encoded bytes.
/// Frames are queued in wire form and decoded on receipt, so an interceptor
/// that corrupts bytes is seen by the receiver as a bad frame.
class MeteredChannel {
 public:
  struct LogEntry {
    Direction direction;
    Bytes wire;
  };
  using Interceptor = std::function<void(Direction, Bytes&)>;

  void send(Direction direction, const Frame& frame);
  Frame recv(Direction direction);

  void close() { closed_ = true; }
  bool closed() const { return closed_; }

  /// Called on the encoded bytes of every frame after they are metered.
  void set_interceptor(Interceptor interceptor) { interceptor_ = std::move(interceptor); }

  std::uint64_t bytes(Direction direction) const;
  std::uint64_t total_bytes() const { return bytes_p2v_ + bytes_v2p_; }
  std::uint64_t bandwidth_bits() const { return 8 * total_bytes(); }
  std::size_t max_frame_size() const { return max_frame_; }
  const std::vector<LogEntry>& log() const { return log_; }

 private:
  std::deque<Bytes>& queue(Direction direction);

  bool closed_ = false;
  std::uint64_t bytes_p2v_ = 0;
  std::uint64_t bytes_v2p_ = 0;
  std::size_t max_frame_ = 0;
  std::deque<Bytes> to_verifier_;
  std::deque<Bytes> to_prover_;
  std::vector<LogEntry> log_;
  Interceptor interceptor_;
};

}  // namespace zkid
