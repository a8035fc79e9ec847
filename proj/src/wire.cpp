#include "zkid/wire.hpp"

#include <array>

#include "zkid/errors.hpp"

namespace zkid {
namespace {

constexpr std::array<std::pair<ProtocolId, std::string_view>, 7> kNames = {{
    {ProtocolId::kQr, "qr"},
    {ProtocolId::kFs, "fs"},
    {ProtocolId::kGq, "gq"},
    {ProtocolId::kSchnorr, "schnorr"},
    {ProtocolId::kEcSqrt, "ec-sqrt"},
    {ProtocolId::kEcDlog, "ec-dlog"},
    {ProtocolId::kEcSchnorr2g, "ec-schnorr2g"},
}};

std::size_t read_length(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  if (offset > bytes.size() || bytes.size() - offset < 2) throw Truncated("missing length prefix");
  const std::size_t len = (std::size_t{bytes[offset]} << 8) | bytes[offset + 1];
  offset += 2;
  if (bytes.size() - offset < len) throw Truncated("length prefix exceeds available bytes");
  return len;
}

void append_length(Bytes& out, std::size_t len) {
  if (len > kMaxPayload) throw PayloadTooLarge("field longer than 65535 bytes");
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  out.push_back(static_cast<std::uint8_t>(len & 0xff));
}

}  // namespace

std::string_view protocol_name(ProtocolId id) {
  for (const auto& [pid, name] : kNames) {
    if (pid == id) return name;
  }
  return "unknown";
}

std::optional<ProtocolId> parse_protocol_name(std::string_view name) {
  for (const auto& [pid, n] : kNames) {
    if (n == name) return pid;
  }
  return std::nullopt;
}

std::optional<ProtocolId> protocol_from_byte(std::uint8_t b) {
  for (const auto& [pid, name] : kNames) {
    if (static_cast<std::uint8_t>(pid) == b) return pid;
  }
  return std::nullopt;
}

bool is_elliptic(ProtocolId id) { return static_cast<std::uint8_t>(id) >= 0x10; }

Bytes encode_frame(const Frame& frame) {
  if (frame.payload.size() > kMaxPayload) {
    throw PayloadTooLarge("payload of " + std::to_string(frame.payload.size()) + " bytes");
  }
  Bytes out;
  out.reserve(kFrameHeaderSize + frame.payload.size());
  out.push_back(static_cast<std::uint8_t>(frame.protocol));
  out.push_back(static_cast<std::uint8_t>(frame.type));
  append_length(out, frame.payload.size());
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderSize) throw Truncated("frame shorter than its header");
  const auto protocol = protocol_from_byte(bytes[0]);
  if (!protocol) throw UnknownProtocol("unknown protocol byte " + std::to_string(bytes[0]));
  const std::uint8_t type = bytes[1];
  if (type < 0x01 || type > 0x05) throw UnknownMsgType("unknown message type " + std::to_string(type));
  const std::size_t len = (std::size_t{bytes[2]} << 8) | bytes[3];
  if (bytes.size() < kFrameHeaderSize + len) throw Truncated("payload shorter than declared length");
  if (bytes.size() > kFrameHeaderSize + len) throw TrailingBytes("bytes after the frame payload");
  return {*protocol, static_cast<MsgType>(type),
          Bytes(bytes.begin() + kFrameHeaderSize, bytes.end())};
}

void append_int(Bytes& out, const BigInt& x) {
  if (x < 0) throw std::invalid_argument("append_int: negative value");
  const std::size_t len = byte_length(x);
  append_length(out, len);
  const Bytes mag = to_bytes(x, len);
  out.insert(out.end(), mag.begin(), mag.end());
}

Bytes encode_int(const BigInt& x) {
  Bytes out;
  append_int(out, x);
  return out;
}

std::size_t encoded_int_size(const BigInt& x) { return 2 + byte_length(x); }

BigInt read_int(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  const std::size_t len = read_length(bytes, offset);
  BigInt x = from_bytes(bytes.subspan(offset, len));
  offset += len;
  return x;
}

BigInt decode_int(std::span<const std::uint8_t> bytes) {
  std::size_t offset = 0;
  BigInt x = read_int(bytes, offset);
  if (offset != bytes.size()) throw TrailingBytes("bytes after the encoded integer");
  return x;
}

void append_blob(Bytes& out, std::span<const std::uint8_t> blob) {
  append_length(out, blob.size());
  out.insert(out.end(), blob.begin(), blob.end());
}

Bytes read_blob(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  const std::size_t len = read_length(bytes, offset);
  Bytes out(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
            bytes.begin() + static_cast<std::ptrdiff_t>(offset + len));
  offset += len;
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

std::string_view direction_arrow(Direction d) {
  return d == Direction::kProverToVerifier ? "P->V" : "V->P";
}

std::deque<Bytes>& MeteredChannel::queue(Direction direction) {
  return direction == Direction::kProverToVerifier ? to_verifier_ : to_prover_;
}

void MeteredChannel::send(Direction direction, const Frame& frame) {
  if (closed_) throw ChannelClosed("send on a closed channel");
  Bytes wire = encode_frame(frame);
  (direction == Direction::kProverToVerifier ? bytes_p2v_ : bytes_v2p_) += wire.size();
  max_frame_ = std::max(max_frame_, wire.size());
  log_.push_back({direction, wire});
  if (interceptor_) interceptor_(direction, wire);
  queue(direction).push_back(std::move(wire));
}

Frame MeteredChannel::recv(Direction direction) {
  if (closed_) throw ChannelClosed("recv on a closed channel");
  auto& q = queue(direction);
  if (q.empty()) throw ChannelEmpty("no frame waiting");
  Bytes wire = std::move(q.front());
  q.pop_front();
  return decode_frame(wire);
}

std::uint64_t MeteredChannel::bytes(Direction direction) const {
  return direction == Direction::kProverToVerifier ? bytes_p2v_ : bytes_v2p_;
}

}  // namespace zkid
