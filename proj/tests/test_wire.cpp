#include <doctest.h>

#include "vectors.hpp"
#include "zkid/errors.hpp"
#include "zkid/wire.hpp"

using namespace zkid;

namespace {

Frame random_frame(Rng& rng) {
  Frame f;
  f.protocol = kAllProtocols[rng.next_u64() % 7];
  f.type = static_cast<MsgType>(1 + rng.next_u64() % 5);
  const std::size_t len = rng.next_u64() % 4 == 0 ? rng.next_u64() % 2000 : rng.next_u64() % 64;
  for (std::size_t i = 0; i < len; ++i) f.payload.push_back(static_cast<std::uint8_t>(rng.next_u64()));
  return f;
}

}  // namespace

TEST_CASE("frame layout") {
  const Frame empty{ProtocolId::kQr, MsgType::kCommit, {}};
  CHECK(encode_frame(empty) == golden("qr_commit_empty"));
  CHECK(decode_frame(golden("qr_commit_empty")) == empty);
  const Frame f{ProtocolId::kEcSchnorr2g, MsgType::kParams, Bytes(300, 0xab)};
  const Bytes wire = encode_frame(f);
  CHECK(wire.size() == 304);
  CHECK(wire[0] == 0x13);
  CHECK(wire[1] == 0x05);
  CHECK(wire[2] == 0x01);
  CHECK(wire[3] == 0x2c);
}

TEST_CASE("frame size limits") {
  CHECK_NOTHROW(encode_frame({ProtocolId::kQr, MsgType::kCommit, Bytes(65535)}));
  CHECK_THROWS_AS(encode_frame({ProtocolId::kQr, MsgType::kCommit, Bytes(65536)}), PayloadTooLarge);
}

TEST_CASE("decode_frame errors") {
  CHECK_THROWS_AS(decode_frame(Bytes{0x01, 0x01, 0x00}), Truncated);
  CHECK_THROWS_AS(decode_frame(Bytes{0x01, 0x01, 0x00, 0x02, 0xaa}), Truncated);
  CHECK_THROWS_AS(decode_frame(Bytes{0x01, 0x01, 0x00, 0x00, 0x00}), TrailingBytes);
  CHECK_THROWS_AS(decode_frame(Bytes{0x05, 0x01, 0x00, 0x00}), UnknownProtocol);
  CHECK_THROWS_AS(decode_frame(Bytes{0x00, 0x01, 0x00, 0x00}), UnknownProtocol);
  CHECK_THROWS_AS(decode_frame(Bytes{0x01, 0x06, 0x00, 0x00}), UnknownMsgType);
  CHECK_THROWS_AS(decode_frame(Bytes{0x01, 0x00, 0x00, 0x00}), UnknownMsgType);
  // All wire errors share a base class.
  CHECK_THROWS_AS(decode_frame(Bytes{}), WireError);
}

TEST_CASE("frame round trip over random frames") {
  Rng rng(31);
  for (int i = 0; i < 10000; ++i) {
    const Frame f = random_frame(rng);
    REQUIRE(decode_frame(encode_frame(f)) == f);
  }
}

TEST_CASE("decode never accepts a mutated frame silently") {
  // Any single-byte change either fails to decode or decodes to a different frame.
  Rng rng(32);
  for (int i = 0; i < 2000; ++i) {
    const Frame f = random_frame(rng);
    Bytes wire = encode_frame(f);
    const std::size_t pos = rng.next_u64() % wire.size();
    wire[pos] ^= static_cast<std::uint8_t>(1 + rng.next_u64() % 255);
    bool same = false;
    try {
      same = decode_frame(wire) == f;
    } catch (const WireError&) {
    }
    CHECK_FALSE(same);
  }
}

TEST_CASE("integer encoding") {
  CHECK(encode_int(0) == golden("int_0"));
  CHECK(encode_int(77) == golden("int_77"));
  CHECK(encode_int(256) == golden("int_256"));
  CHECK(encoded_int_size(256) == 4);
  CHECK(decode_int(Bytes{0x00, 0x01, 0x4d}) == 77);
  CHECK_THROWS_AS(decode_int(Bytes{0x00}), Truncated);
  CHECK_THROWS_AS(decode_int(Bytes{0x00, 0x02, 0x01}), Truncated);
  CHECK_THROWS_AS(decode_int(Bytes{0x00, 0x00, 0x00}), TrailingBytes);
  CHECK_THROWS_AS(encode_int(-1), std::invalid_argument);

  Rng rng(33);
  for (int i = 0; i < 10000; ++i) {
    const BigInt x = rng.random_bits(static_cast<unsigned>(rng.next_u64() % 1024));
    const Bytes enc = encode_int(x);
    REQUIRE(enc.size() == 2 + byte_length(x));
    REQUIRE(decode_int(enc) == x);
  }
}

TEST_CASE("blobs") {
  Bytes out;
  append_blob(out, Bytes{'A', 'B'});
  append_int(out, 5);
  std::size_t off = 0;
  CHECK(read_blob(out, off) == Bytes{'A', 'B'});
  CHECK(read_int(out, off) == 5);
  CHECK(off == out.size());
  CHECK(to_hex(out) == "000241420001" "05");
}

TEST_CASE("protocol names") {
  for (ProtocolId id : kAllProtocols) {
    CHECK(parse_protocol_name(protocol_name(id)) == id);
    CHECK(protocol_from_byte(static_cast<std::uint8_t>(id)) == id);
  }
  CHECK_FALSE(parse_protocol_name("rsa").has_value());
  CHECK(is_elliptic(ProtocolId::kEcDlog));
  CHECK_FALSE(is_elliptic(ProtocolId::kSchnorr));
}

TEST_CASE("metered channel") {
  MeteredChannel ch;
  const Frame commit{ProtocolId::kQr, MsgType::kCommit, {0x04}};
  ch.send(Direction::kProverToVerifier, commit);
  CHECK(ch.bytes(Direction::kProverToVerifier) == 5);
  CHECK(ch.bytes(Direction::kVerifierToProver) == 0);
  CHECK(ch.recv(Direction::kProverToVerifier) == commit);
  CHECK_THROWS_AS(ch.recv(Direction::kProverToVerifier), ChannelEmpty);

  const Frame a{ProtocolId::kQr, MsgType::kChallenge, {1}};
  const Frame b{ProtocolId::kQr, MsgType::kChallenge, {0}};
  ch.send(Direction::kVerifierToProver, a);
  ch.send(Direction::kVerifierToProver, b);
  CHECK(ch.recv(Direction::kVerifierToProver) == a);  // FIFO
  CHECK(ch.recv(Direction::kVerifierToProver) == b);
  CHECK(ch.total_bytes() == 15);
  CHECK(ch.bandwidth_bits() == 120);
  CHECK(ch.max_frame_size() == 5);
  CHECK(ch.log().size() == 3);

  std::uint64_t logged = 0;
  for (const auto& e : ch.log()) logged += e.wire.size();
  CHECK(logged == ch.total_bytes());

  ch.close();
  CHECK_THROWS_AS(ch.send(Direction::kProverToVerifier, commit), ChannelClosed);
  CHECK_THROWS_AS(ch.recv(Direction::kProverToVerifier), ChannelClosed);
}

TEST_CASE("channel interceptor corrupts bytes in flight") {
  MeteredChannel ch;
  ch.set_interceptor([](Direction, Bytes& wire) { wire.push_back(0xff); });
  ch.send(Direction::kProverToVerifier, {ProtocolId::kFs, MsgType::kCommit, {1, 2}});
  CHECK(ch.bytes(Direction::kProverToVerifier) == 6);  // metered before tampering
  CHECK_THROWS_AS(ch.recv(Direction::kProverToVerifier), TrailingBytes);
}
