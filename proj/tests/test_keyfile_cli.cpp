#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "zkid/cli.hpp"
#include "zkid/errors.hpp"
#include "zkid/keyfile.hpp"

using namespace zkid;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("zkid-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct CliResult {
  int status;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("key files round-trip for every protocol") {
  Rng rng(81);
  for (ProtocolId id : kAllProtocols) {
    const KeyPair keys = fixtures::random_keys(id, rng, 96);
    const std::string pub_text = serialize_public(keys.verifier);
    const std::string secret_text = serialize_secret(keys.prover);
    CHECK(pub_text.rfind("protocol = " + std::string(protocol_name(id)) + "\n", 0) == 0);
    CHECK(serialize_public(parse_public(pub_text)) == pub_text);
    CHECK(serialize_secret(parse_secret(secret_text)) == secret_text);
  }
}

TEST_CASE("key file parse errors") {
  const std::string good = serialize_secret(fixtures::qr77());
  CHECK_NOTHROW(parse_secret(good));
  CHECK_THROWS_AS(parse_public("protocol = nope\n"), KeyFileError);
  CHECK_THROWS_AS(parse_public("n = 0x4d\n"), KeyFileError);
  CHECK_THROWS_AS(parse_public("protocol = qr\nn 0x4d\n"), KeyFileError);
  CHECK_THROWS_AS(parse_public("protocol = qr\nn = 77\nb = 0x4\nidentity = a\n"), KeyFileError);
  CHECK_THROWS_AS(parse_public("protocol = qr\nn = 0x4d\nn = 0x4d\n"), KeyFileError);
  CHECK_THROWS_AS(parse_public("protocol = qr\nn = 0xzz\nb = 0x4\nidentity = a\n"), KeyFileError);

  std::string wrong = good;
  const auto pos = wrong.find("x = 0x9");
  REQUIRE(pos != std::string::npos);
  wrong.replace(pos, 7, "x = 0xa");
  CHECK_THROWS_AS(parse_secret(wrong), KeyFileError);

  const std::string off_curve =
      "protocol = ec-dlog\ncurve_m = 0x11\ncurve_a = 0x2\ncurve_b = 0x2\n"
      "G = (0x5, 0x2)\norder = 0x13\nB = infinity\n";
  CHECK_THROWS_AS(parse_public(off_curve), KeyFileError);
}

TEST_CASE("curve files") {
  const CurveParams c = parse_curve_file("# toy\nm = 0x11\na = 0x2\nb = 0x2\n");
  CHECK(c.m == 17);
  CHECK_THROWS_AS(parse_curve_file("m = 0x11\na = 0x0\nb = 0x0\n"), InvalidCurve);
  CHECK_THROWS_AS(parse_curve_file("m = 0x11\na = 0x2\n"), KeyFileError);
}

TEST_CASE("cli keygen") {
  TempDir dir;
  const std::string prefix = dir.file("s");
  const auto r = cli({"keygen", "--protocol", "schnorr", "--bits", "64", "--out", prefix});
  CHECK(r.status == kExitOk);
  CHECK(fs::exists(prefix + ".pub"));
  CHECK(fs::exists(prefix + ".secret"));
  const auto pub = parse_public(read_text_file(prefix + ".pub"));
  CHECK(protocol_of(pub) == ProtocolId::kSchnorr);

  CHECK(cli({"keygen", "--protocol", "gq", "--v", "4", "--out", dir.file("g")}).status == kExitUsage);
  CHECK(cli({"keygen", "--protocol", "bogus", "--out", dir.file("b")}).status == kExitUsage);
  CHECK(cli({"keygen", "--protocol", "qr"}).status == kExitUsage);

  const std::string fsp = dir.file("fs");
  REQUIRE(cli({"keygen", "--protocol", "fs", "--k", "3", "--bits", "64", "--out", fsp}).status == kExitOk);
  const auto fs_key = std::get<FsPublic>(parse_public(read_text_file(fsp + ".pub")));
  CHECK(fs_key.v.size() == 3);
}

TEST_CASE("cli keygen on a supplied curve") {
  TempDir dir;
  write_text_file(dir.file("c.txt"), "m = 0x11\na = 0x2\nb = 0x2\n");
  const auto r = cli({"keygen", "--protocol", "ec-dlog", "--curve-file", dir.file("c.txt"), "--out", dir.file("e")});
  REQUIRE(r.status == kExitOk);
  const auto key = std::get<EcDlogPublic>(parse_public(read_text_file(dir.file("e.pub"))));
  CHECK(key.curve.m == 17);
  CHECK(key.order == 19);
}

TEST_CASE("cli run") {
  TempDir dir;
  for (const char* name : {"qr", "fs", "gq", "schnorr", "ec-sqrt", "ec-dlog", "ec-schnorr2g"}) {
    const std::string prefix = dir.file(name);
    REQUIRE(cli({"keygen", "--protocol", name, "--bits", std::string(name).rfind("ec", 0) == 0 ? "12" : "64",
                 "--out", prefix})
                .status == kExitOk);
    const auto r = cli({"run", "--rounds", "8", "--pub", prefix + ".pub", "--secret", prefix + ".secret"});
    CHECK_MESSAGE(r.status == kExitOk, name);
    CHECK(contains(r.out, "verdict: accept"));
  }

  const std::string a = dir.file("a"), b = dir.file("b");
  REQUIRE(cli({"keygen", "--protocol", "qr", "--bits", "64", "--seed", "2", "--out", a}).status == kExitOk);
  REQUIRE(cli({"keygen", "--protocol", "qr", "--bits", "64", "--seed", "3", "--out", b}).status == kExitOk);
  const auto bad = cli({"run", "--rounds", "20", "--pub", b + ".pub", "--secret", a + ".secret"});
  CHECK(bad.status == kExitReject);
  CHECK(contains(bad.out, "verdict: reject"));

  const auto other = cli({"run", "--pub", dir.file("schnorr") + ".pub", "--secret", a + ".secret"});
  CHECK(other.status == kExitReject);

  const auto once = cli({"run", "--seed", "5", "--pub", a + ".pub", "--secret", a + ".secret"});
  const auto twice = cli({"run", "--seed", "5", "--pub", a + ".pub", "--secret", a + ".secret"});
  CHECK(once.out == twice.out);

  CHECK(cli({"run", "--protocol", "fs", "--pub", a + ".pub", "--secret", a + ".secret"}).status == kExitUsage);
  CHECK(cli({"run", "--pub", dir.file("missing.pub"), "--secret", a + ".secret"}).status == kExitRuntime);
}

TEST_CASE("cli bench") {
  const auto r = cli({"bench", "--modbits", "64", "--rounds", "10", "--format", "csv"});
  REQUIRE(r.status == kExitOk);
  CHECK(r.out.rfind("protocol,bandwidth_bits,prover_modmuls,memory_bytes,elapsed_ms\n", 0) == 0);
  CHECK(cli({"bench", "--protocols", "qr"}).status == kExitUsage);
  CHECK(cli({"bench", "--protocols", "qr,nope"}).status == kExitUsage);
  CHECK(cli({"bench", "--format", "xml"}).status == kExitUsage);
}

TEST_CASE("cli attack") {
  const auto r = cli({"attack", "--demo", "ec-sqrt", "--pbits", "8"});
  CHECK(r.status == kExitOk);
  CHECK(contains(r.out, "2A == B: true"));
  CHECK(cli({"attack", "--demo", "ec-sqrt", "--pbits", "20"}).status == kExitUsage);
  CHECK(cli({"attack", "--demo", "other"}).status == kExitUsage);
}

TEST_CASE("cli curve-check") {
  TempDir dir;
  write_text_file(dir.file("super.txt"), "m = 0xb\na = 0x0\nb = 0x1\n");
  const auto s = cli({"curve-check", "--curve-file", dir.file("super.txt")});
  CHECK(s.status == kExitOk);
  CHECK(contains(s.out, "mov_ok: false"));
  CHECK(contains(s.out, "overall: fail"));

  write_text_file(dir.file("good.txt"), "m = 0x11\na = 0x2\nb = 0x2\n");
  const auto g = cli({"curve-check", "--curve-file", dir.file("good.txt"), "--min-prime-bits", "4"});
  CHECK(g.status == kExitOk);
  CHECK(contains(g.out, "order: 19"));
  CHECK(contains(g.out, "overall: pass"));

  write_text_file(dir.file("sing.txt"), "m = 0x11\na = 0x0\nb = 0x0\n");
  CHECK(cli({"curve-check", "--curve-file", dir.file("sing.txt")}).status == kExitRuntime);
}

TEST_CASE("cli info") {
  const auto levels = cli({"info", "security-levels"});
  CHECK(levels.status == kExitOk);
  CHECK(contains(levels.out, "128 256 3072"));
  const auto fields = cli({"info", "nist-fields"});
  CHECK(fields.status == kExitOk);
  CHECK(contains(fields.out, "521 571"));
  CHECK(cli({"info", "bogus"}).status == kExitUsage);
  CHECK(cli({}).status == kExitUsage);
}
