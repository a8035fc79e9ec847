#include "zkid/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <optional>

#include "zkid/attack.hpp"
#include "zkid/bench.hpp"
#include "zkid/errors.hpp"
#include "zkid/keyfile.hpp"
#include "zkid/protocols.hpp"

namespace zkid {
namespace {

// Usage problems found after parsing (bad protocol names, out-of-range values).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ProtocolId protocol_arg(const std::string& name) {
  const auto id = parse_protocol_name(name);
  if (!id) throw UsageError("unknown protocol `" + name + "`");
  return *id;
}

std::vector<ProtocolId> protocol_list(const std::string& csv) {
  std::vector<ProtocolId> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = std::min(csv.find(',', start), csv.size());
    const std::string name = csv.substr(start, comma - start);
    if (!name.empty()) out.push_back(protocol_arg(name));
    start = comma + 1;
  }
  return out;
}

struct KeygenArgs {
  std::string protocol;
  unsigned bits = 0;
  std::uint32_t k = 3;
  std::uint32_t v = 65521;
  std::string curve_file;
  std::string out;
  std::string identity = std::string(kDefaultIdentity);
  std::uint64_t seed = 1;
};

int cmd_keygen(const KeygenArgs& a, std::ostream& out) {
  const ProtocolId id = protocol_arg(a.protocol);
  if (a.k < 1 || a.k > 64) throw UsageError("--k must be between 1 and 64");
  if (id == ProtocolId::kGq && (a.v < 3 || !is_probable_prime(a.v))) {
    throw UsageError("--v must be an odd prime");
  }
  Rng rng(a.seed);
  ProtocolConfig cfg;
  cfg.fs_secrets = a.k;
  cfg.gq_exponent = a.v;
  cfg.identity = a.identity;

  Setting setting;
  if (!a.curve_file.empty()) {
    if (id != ProtocolId::kEcDlog && id != ProtocolId::kEcSchnorr2g) {
      throw UsageError("--curve-file applies to ec-dlog and ec-schnorr2g");
    }
    const CurveParams curve = parse_curve_file(read_text_file(a.curve_file));
    setting = ec_group_on(curve, id == ProtocolId::kEcSchnorr2g ? 2 : 1, rng);
  } else {
    SettingParams params;
    params.gq_exponent = a.v;
    if (is_elliptic(id)) {
      const unsigned bits = a.bits ? a.bits : 16;
      if (bits > 20) throw UsageError("--bits for elliptic protocols is at most 20");
      params.ec_field_bits = bits;
      params.ring_factor_bits = bits;
    } else {
      const unsigned bits = a.bits ? a.bits : 256;
      if (bits < 32 || bits > 4096) throw UsageError("--bits must be between 32 and 4096");
      params.modulus_bits = bits;
    }
    setting = make_setting(id, params, rng);
  }

  const KeyPair keys = keygen(id, setting, cfg, rng);
  write_text_file(a.out + ".pub", serialize_public(keys.verifier));
  write_text_file(a.out + ".secret", serialize_secret(keys.prover));
  out << "protocol: " << protocol_name(id) << '\n';
  out << serialize_public(keys.verifier);
  out << "wrote " << a.out << ".pub and " << a.out << ".secret\n";
  return kExitOk;
}

struct RunArgs {
  std::string protocol;
  std::uint32_t rounds = 10;
  std::uint32_t challenge_bits = 1;
  std::string pub;
  std::string secret;
  std::uint64_t seed = 1;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  std::optional<ProtocolId> wanted;
  if (!a.protocol.empty()) wanted = protocol_arg(a.protocol);
  if (a.rounds > 100000) throw UsageError("--rounds is at most 100000");

  const ProverKey prover_key = parse_secret(read_text_file(a.secret));
  const VerifierKey verifier_key = parse_public(read_text_file(a.pub));
  const ProtocolId id = protocol_of(prover_key);
  if (wanted && *wanted != id) throw UsageError("--protocol does not match the secret key file");

  ProtocolConfig cfg;
  cfg.rounds = a.rounds;
  cfg.challenge_bits = a.challenge_bits;
  out << "protocol: " << protocol_name(id) << '\n';
  if (protocol_of(verifier_key) != id) {
    out << "public key is for " << protocol_name(protocol_of(verifier_key)) << '\n';
    out << "verdict: reject\n";
    return kExitReject;
  }

  Rng rng(a.seed);
  ProverSession prover(prover_key, cfg, rng.fork());
  VerifierSession verifier(verifier_key, cfg, rng.fork());
  MeteredChannel channel;
  const Transcript tr = run_rounds(prover, verifier, channel);

  for (const auto& e : tr.setup) {
    out << "setup " << direction_arrow(e.direction) << ' ' << to_hex(encode_frame(e.frame)) << '\n';
  }
  for (const auto& e : tr.entries) {
    out << "round " << e.round << ' ' << direction_arrow(e.direction) << ' '
        << to_hex(encode_frame(e.frame)) << '\n';
  }
  out << "rounds run: " << tr.rounds_run << '\n';
  out << "bandwidth_bits: " << tr.bandwidth_bits() << '\n';
  if (tr.failed_round) out << "failed round: " << *tr.failed_round << '\n';
  out << "verdict: " << (tr.verdict == Verdict::kAccept ? "accept" : "reject") << '\n';
  return tr.verdict == Verdict::kAccept ? kExitOk : kExitReject;
}

struct BenchArgs {
  std::string protocols = "qr,fs,gq,schnorr";
  unsigned modbits = 256;
  std::uint32_t rounds = 100;
  std::uint32_t k = 3;
  std::uint32_t v = 65521;
  std::string format = "table";
  std::uint64_t seed = 1;
  bool parallel = false;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const auto protocols = protocol_list(a.protocols);
  if (protocols.size() < 2) throw UsageError("--protocols needs at least two protocols");
  if (a.format != "table" && a.format != "csv") throw UsageError("--format is table or csv");
  if (a.modbits < 32 || a.modbits > 4096) throw UsageError("--modbits must be between 32 and 4096");
  if (a.k < 1 || a.k > 64) throw UsageError("--k must be between 1 and 64");
  if (a.v < 3 || !is_probable_prime(a.v)) throw UsageError("--v must be an odd prime");
  BenchSettings s;
  s.modulus_bits = a.modbits;
  s.rounds = a.rounds;
  s.fs_secrets = a.k;
  s.gq_exponent = a.v;
  s.parallel = a.parallel;
  Rng rng(a.seed);
  const BenchReport report = compare(protocols, s, rng);
  out << (a.format == "csv" ? format_csv(report) : format_table(report));
  return kExitOk;
}

int cmd_attack(const std::string& demo_name, unsigned pbits, std::uint64_t seed, std::ostream& out) {
  if (demo_name != "ec-sqrt") throw UsageError("only `--demo ec-sqrt` is available");
  if (pbits < 3 || pbits > kMaxAttackFactorBits) throw UsageError("--pbits must be between 3 and 16");
  Rng rng(seed);
  const AttackDemo demo = run_attack_demo(pbits, rng);
  const auto& c = demo.setting.curve;
  out << "curve: y^2 = x^3 + " << c.a.get_str() << "x + " << c.b.get_str() << " over Z_" << c.m.get_str()
      << '\n';
  out << "B: " << to_string(demo.public_point) << '\n';
  out << "observed S: " << to_string(demo.result.commitment) << '\n';
  out << "observed M: " << to_string(demo.result.response) << '\n';
  out << "factors:";
  for (const auto& f : demo.result.factors) out << ' ' << f.get_str();
  out << '\n';
  out << "lifted R: " << to_string(demo.result.half) << '\n';
  out << "candidates tried: " << demo.result.candidates_tried << '\n';
  out << "recovered A: " << to_string(demo.result.recovered) << '\n';
  out << "2A == B: " << (demo.verified ? "true" : "false") << '\n';
  char ms[64];
  std::snprintf(ms, sizeof ms, "elapsed_ms (timing): %.3f\n", demo.elapsed_ms);
  out << ms;
  return demo.verified ? kExitOk : kExitRuntime;
}

int cmd_curve_check(const std::string& path, unsigned min_prime_bits, std::ostream& out) {
  const CurveParams curve = parse_curve_file(read_text_file(path));
  const CurveReport r = curve_security_check(curve, min_prime_bits);
  const auto yn = [](bool b) { return b ? "true" : "false"; };
  out << "curve: y^2 = x^3 + " << curve.a.get_str() << "x + " << curve.b.get_str() << " over F_"
      << curve.m.get_str() << '\n';
  out << "order: " << r.order.get_str() << '\n';
  out << "large_prime_factor: " << r.large_prime_factor.get_str() << '\n';
  out << "pollard_ok: " << yn(r.pollard_ok) << '\n';
  out << "mov_ok: " << yn(r.mov_ok) << '\n';
  out << "anomalous_ok: " << yn(r.anomalous_ok) << '\n';
  out << "overall: " << (r.all_ok() ? "pass" : "fail") << '\n';
  return kExitOk;
}

int cmd_info(const std::string& topic, std::ostream& out) {
  if (topic == "security-levels") {
    out << "level ecc_bits rsa_bits cipher\n";
    for (const auto& row : security_levels()) {
      out << row.symmetric_bits << ' ' << row.ecc_bits << ' ' << row.rsa_bits << ' ' << row.algorithm
          << '\n';
    }
    return kExitOk;
  }
  if (topic == "nist-fields") {
    out << "prime_bits binary_degree\n";
    for (const auto& row : nist_field_sizes()) out << row.prime_bits << ' ' << row.binary_degree << '\n';
    return kExitOk;
  }
  throw UsageError("unknown info topic `" + topic + "` (security-levels or nist-fields)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-knowledge identification protocols: key generation, runs and benchmarks", "zkid"};
  app.require_subcommand(1);

  KeygenArgs kg;
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a key pair");
  keygen_cmd->add_option("--protocol", kg.protocol, "qr, fs, gq, schnorr, ec-sqrt, ec-dlog, ec-schnorr2g")
      ->required();
  keygen_cmd->add_option("--bits", kg.bits, "Modulus bits (classical) or field/factor bits (elliptic)");
  keygen_cmd->add_option("--k", kg.k, "Number of FS secrets");
  keygen_cmd->add_option("--v", kg.v, "GQ exponent (prime)");
  keygen_cmd->add_option("--curve-file", kg.curve_file, "Curve file for ec-dlog / ec-schnorr2g");
  keygen_cmd->add_option("--out", kg.out, "Output prefix; writes <out>.pub and <out>.secret")->required();
  keygen_cmd->add_option("--identity", kg.identity, "Identity string for QR, FS and GQ");
  keygen_cmd->add_option("--seed", kg.seed, "RNG seed");

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Run the protocol between a prover and a verifier");
  run_cmd->add_option("--protocol", ra.protocol, "Expected protocol");
  run_cmd->add_option("--rounds", ra.rounds, "Number of rounds");
  run_cmd->add_option("--challenge-bits", ra.challenge_bits, "Challenge width for schnorr / ec-schnorr2g");
  run_cmd->add_option("--pub", ra.pub, "Verifier's public key file")->required();
  run_cmd->add_option("--secret", ra.secret, "Prover's secret key file")->required();
  run_cmd->add_option("--seed", ra.seed, "RNG seed");

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "Compare protocols");
  bench_cmd->add_option("--protocols", ba.protocols, "Comma-separated protocol names");
  bench_cmd->add_option("--modbits", ba.modbits, "Classical modulus bits");
  bench_cmd->add_option("--rounds", ba.rounds, "Rounds for bit-challenge protocols");
  bench_cmd->add_option("--k", ba.k, "Number of FS secrets");
  bench_cmd->add_option("--v", ba.v, "GQ exponent (prime)");
  bench_cmd->add_option("--format", ba.format, "table or csv");
  bench_cmd->add_option("--seed", ba.seed, "RNG seed");
  bench_cmd->add_flag("--parallel", ba.parallel, "Run protocol rows concurrently");

  std::string demo = "ec-sqrt";
  unsigned pbits = 16;
  std::uint64_t attack_seed = 1;
  auto* attack_cmd = app.add_subcommand("attack", "Recover an EC_SQRT secret as a malicious verifier");
  attack_cmd->add_option("--demo", demo, "Attack to run");
  attack_cmd->add_option("--pbits", pbits, "Bits per prime factor (at most 16)");
  attack_cmd->add_option("--seed", attack_seed, "RNG seed");

  std::string curve_file;
  unsigned min_prime_bits = 4;
  auto* curve_cmd = app.add_subcommand("curve-check", "Security checks for a small prime-field curve");
  curve_cmd->add_option("--curve-file", curve_file, "File with m, a, b")->required();
  curve_cmd->add_option("--min-prime-bits", min_prime_bits, "Minimum bits of the largest prime factor");

  std::string topic;
  auto* info_cmd = app.add_subcommand("info", "Key-size tables");
  info_cmd->add_option("topic", topic, "security-levels or nist-fields")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*keygen_cmd) return cmd_keygen(kg, out);
    if (*run_cmd) return cmd_run(ra, out);
    if (*bench_cmd) return cmd_bench(ba, out);
    if (*attack_cmd) return cmd_attack(demo, pbits, attack_seed, out);
    if (*curve_cmd) return cmd_curve_check(curve_file, min_prime_bits, out);
    if (*info_cmd) return cmd_info(topic, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidSetting& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidCurve& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace zkid
