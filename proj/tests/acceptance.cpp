// Acceptance checks, one PASS/FAIL line each. Exit status is the number of
// failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "zkid/attack.hpp"
#include "zkid/bench.hpp"
#include "zkid/cli.hpp"
#include "zkid/errors.hpp"
#include "zkid/protocols.hpp"

using namespace zkid;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    if (ok) detail = what;
    ok = false;
  }
};

// Splits `trials` over the hardware threads; each worker gets its own stream.
std::uint64_t count_parallel(std::uint64_t trials, std::uint64_t seed,
                             const std::function<bool(Rng&)>& trial) {
  const unsigned workers = std::max(1u, std::min(16u, std::thread::hardware_concurrency()));
  std::vector<std::uint64_t> hits(workers, 0);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      Rng rng(seed * 1000 + w);
      const std::uint64_t share = trials / workers + (w < trials % workers ? 1 : 0);
      for (std::uint64_t i = 0; i < share; ++i) hits[w] += trial(rng) ? 1 : 0;
    });
  }
  for (auto& t : pool) t.join();
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return total;
}

Outcome completeness() {
  Outcome o;
  const auto start = Clock::now();
  Rng rng(101);
  for (ProtocolId id : kAllProtocols) {
    ProtocolConfig cfg;
    cfg.rounds = 50;
    SettingParams params;
    params.modulus_bits = 256;
    params.ec_field_bits = 16;
    params.ring_factor_bits = 16;
    const Setting setting = make_setting(id, params, rng);
    const KeyPair keys = keygen(id, setting, cfg, rng);
    int accepted = 0;
    for (int run = 0; run < 100; ++run) {
      ProverSession p(keys.prover, cfg, rng.fork());
      VerifierSession v(keys.verifier, cfg, rng.fork());
      MeteredChannel ch;
      const Transcript tr = run_rounds(p, v, ch);
      accepted += tr.verdict == Verdict::kAccept && tr.rounds_run == 50 ? 1 : 0;
    }
    o.require(accepted == 100, std::string(protocol_name(id)) + " accepted " + std::to_string(accepted) + "/100");
  }
  const double elapsed = ms_since(start);
  o.require(elapsed < 30000, "took " + std::to_string(elapsed) + " ms");
  if (o.ok) o.detail = "700 runs accepted in " + std::to_string(static_cast<int>(elapsed)) + " ms";
  return o;
}

Outcome soundness() {
  Outcome o;
  Rng rng(102);
  const KeyPair qr = fixtures::random_keys(ProtocolId::kQr, rng, 256);
  const KeyPair ec = fixtures::random_keys(ProtocolId::kEcDlog, rng);
  std::ostringstream detail;
  for (const KeyPair* keys : {&qr, &ec}) {
    const VerifierKey pub = keys->verifier;
    const std::string name(protocol_name(protocol_of(pub)));
    ProtocolConfig one;
    one.rounds = 1;
    const double n1 = 1e4;
    const double f1 = count_parallel(10000, 1, [&](Rng& r) {
                        return cheating_prover_run(pub, one, 1, r) == Verdict::kAccept;
                      }) / n1;
    o.require(std::abs(f1 - 0.5) <= 0.02, name + " t=1 frequency " + std::to_string(f1));

    ProtocolConfig ten;
    ten.rounds = 10;
    const double n10 = 1e6;
    const double p = std::ldexp(1.0, -10);
    const double sigma = std::sqrt(n10 * p * (1 - p));
    const std::uint64_t hits = count_parallel(1000000, 2, [&](Rng& r) {
      return cheating_prover_run(pub, ten, 10, r) == Verdict::kAccept;
    });
    o.require(std::abs(hits - n10 * p) <= 3 * sigma,
              name + " t=10 accepted " + std::to_string(hits) + " of 1e6");
    detail << name << " t=1 " << f1 << ", t=10 " << hits << "/1e6; ";
  }
  if (o.ok) o.detail = detail.str();
  return o;
}

using Triple = std::tuple<Bytes, Bytes, Bytes>;

std::vector<Triple> honest_multiset(const ProverKey& key, const std::vector<CommitmentSecret>& coins) {
  const VerifierKey pub = public_part(key);
  const BigInt bound = challenge_bound(pub, {});
  std::vector<Triple> out;
  ProverSession p(key, {}, Rng(1));
  for (BigInt c = 0; c < bound; ++c) {
    for (const auto& r : coins) {
      const Frame commit = p.commit_with(r);
      const Frame challenge = make_challenge_frame(pub, {}, c);
      const Frame response = p.respond(challenge);
      out.emplace_back(commit.payload, challenge.payload, response.payload);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Triple> simulated_multiset(const VerifierKey& pub, const std::vector<SimulatorCoin>& coins) {
  const BigInt bound = challenge_bound(pub, {});
  std::vector<Triple> out;
  for (BigInt c = 0; c < bound; ++c) {
    for (const auto& coin : coins) {
      const RoundFrames rf = simulate_round_with(pub, {}, c, coin);
      out.emplace_back(rf.commit.payload, rf.challenge.payload, rf.response.payload);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome zero_knowledge() {
  Outcome o;
  std::vector<CommitmentSecret> qr_coins;
  std::vector<SimulatorCoin> qr_sim;
  for (std::uint64_t r = 1; r < 77; ++r) {
    if (!oracle::brute_inverse(r, 77)) continue;
    qr_coins.emplace_back(BigInt(r));
    qr_sim.emplace_back(BigInt(r));
  }
  int keys = 0;
  for (const auto& c : qr_coins) {
    const BigInt x = std::get<BigInt>(c);
    const QrSecret key = make_qr_key(77, x);
    o.require(honest_multiset(key, qr_coins) == simulated_multiset(key.pub, qr_sim),
              "QR n=77 x=" + x.get_str());
    ++keys;
  }
  std::vector<CommitmentSecret> ec_coins;
  std::vector<SimulatorCoin> ec_sim;
  for (int r = 0; r < 19; ++r) {
    ec_coins.emplace_back(BigInt(r));
    ec_sim.emplace_back(BigInt(r));
  }
  for (int m = 1; m < 19; ++m) {
    const EcDlogSecret key = fixtures::ec_dlog17(m);
    o.require(honest_multiset(key, ec_coins) == simulated_multiset(key.pub, ec_sim),
              "EC_DLOG m=" + std::to_string(m));
    ++keys;
  }
  if (o.ok) o.detail = std::to_string(keys) + " secrets, multisets equal";
  return o;
}

Outcome orderings() {
  Outcome o;
  const ProtocolId four[] = {ProtocolId::kQr, ProtocolId::kFs, ProtocolId::kGq, ProtocolId::kSchnorr};
  const std::vector<ProtocolId> bandwidth = {ProtocolId::kSchnorr, ProtocolId::kFs, ProtocolId::kGq,
                                             ProtocolId::kQr};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const BenchReport r = compare(four, BenchSettings{}, rng);
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    o.require(r.ordering(Criterion::kBandwidth) == bandwidth, tag + "bandwidth order");
    for (Criterion c : {Criterion::kModmuls, Criterion::kMemory, Criterion::kTime}) {
      const auto order = r.ordering(c);
      const auto& s = r.metrics(ProtocolId::kSchnorr);
      bool strict = order.front() == ProtocolId::kSchnorr;
      for (ProtocolId other : {ProtocolId::kQr, ProtocolId::kFs, ProtocolId::kGq}) {
        const auto& m = r.metrics(other);
        if (c == Criterion::kModmuls) strict = strict && s.prover_modmuls < m.prover_modmuls;
        if (c == Criterion::kMemory) strict = strict && s.memory_bytes < m.memory_bytes;
        if (c == Criterion::kTime) strict = strict && s.elapsed_ms < m.elapsed_ms;
      }
      o.require(strict, tag + "schnorr not strictly minimal on criterion " + std::to_string(static_cast<int>(c)));
    }
  }
  if (o.ok) o.detail = "5/5 seeds";
  return o;
}

Outcome schnorr_online() {
  Outcome o;
  Rng rng(105);
  for (std::uint32_t bits : {1u, 20u}) {
    ProtocolConfig cfg;
    cfg.rounds = 100;
    cfg.challenge_bits = bits;
    const KeyPair keys = fixtures::random_keys(ProtocolId::kSchnorr, rng, 256, cfg);
    ProverSession p(keys.prover, cfg, rng.fork());
    VerifierSession v(keys.verifier, cfg, rng.fork());
    p.precompute(cfg.rounds);
    const std::uint64_t before = p.online_muls().count();
    MeteredChannel ch;
    const Transcript tr = run_rounds(p, v, ch);
    o.require(tr.verdict == Verdict::kAccept, "run rejected");
    o.require(p.online_muls().count() - before == 100,
              std::to_string(p.online_muls().count() - before) + " online multiplications for 100 rounds");
  }
  if (o.ok) o.detail = "100 multiplications over 100 rounds";
  return o;
}

Outcome attack() {
  Outcome o;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(600 + seed);
    const auto start = Clock::now();
    const AttackDemo demo = run_attack_demo(16, rng);
    const double elapsed = ms_since(start);
    worst = std::max(worst, elapsed);
    o.require(demo.verified, "instance " + std::to_string(seed) + " not recovered");
    const Point doubled = point_add(demo.result.recovered, demo.result.recovered, demo.setting.curve);
    o.require(doubled == demo.public_point, "instance " + std::to_string(seed) + ": 2A != B");
    o.require(elapsed < 1000, "instance " + std::to_string(seed) + " took " + std::to_string(elapsed) + " ms");
  }
  std::ostringstream out, err;
  o.require(run_cli({"attack", "--demo", "ec-sqrt", "--pbits", "16"}, out, err) == kExitOk &&
                out.str().find("2A == B: true") != std::string::npos,
            "cli attack --pbits 16");
  if (o.ok) o.detail = "20/20, slowest " + std::to_string(worst) + " ms";
  return o;
}

Outcome curve_checks() {
  Outcome o;
  o.require(!curve_security_check(CurveParams::make(11, 0, 1), 2).mov_ok, "F_11 y^2=x^3+1 not flagged");
  int anomalous = 0;
  for (std::int64_t m : {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43}) {
    for (std::int64_t a = 0; a < m; ++a) {
      for (std::int64_t b = 0; b < m; ++b) {
        if ((4 * a * a * a + 27 * b * b) % m == 0) continue;
        if (static_cast<std::int64_t>(oracle::Curve{m, a, b}.points().size()) != m) continue;
        ++anomalous;
        o.require(!curve_security_check(CurveParams::make(m, a, b), 2).anomalous_ok,
                  "anomalous curve over F_" + std::to_string(m) + " passed");
      }
    }
  }
  o.require(anomalous > 0, "no anomalous curves constructed");
  const CurveReport good = curve_security_check(fixtures::f17(), 4);
  o.require(good.pollard_ok && good.mov_ok && good.anomalous_ok, "F_17 curve failed a check");
  if (o.ok) o.detail = std::to_string(anomalous) + " anomalous curves flagged";
  return o;
}

Outcome group_law() {
  Outcome o;
  const CurveParams c = fixtures::f17();
  const oracle::Curve ref{17, 2, 2};
  for (const Point& g : enumerate_points(c)) {
    Point acc = Point::infinity();
    for (int k = 0; k < 19; ++k) {
      o.require(scalar_mul(k, g, c) == acc, "k=" + std::to_string(k) + " P=" + to_string(g));
      if (!g.is_infinity()) {
        const oracle::Pt r = ref.mul(k, {false, g.x().get_si(), g.y().get_si()});
        o.require(r.inf ? acc.is_infinity() : acc == Point::affine(r.x, r.y), "oracle k=" + std::to_string(k));
      }
      acc = point_add(acc, g, c);
    }
  }
  Rng rng(108);
  int curves = 0;
  while (curves < 50) {
    const BigInt m = random_prime(curves < 25 ? 8 : 16, rng);
    if (m < 5) continue;
    CurveParams curve;
    try {
      curve = CurveParams::make(m, rand_below(m, rng), rand_below(m, rng));
    } catch (const InvalidCurve&) {
      continue;
    }
    const BigInt trace = m + 1 - count_points(curve);
    o.require(trace * trace <= 4 * m, "Hasse bound fails over F_" + m.get_str());
    ++curves;
  }
  o.require(count_points(c) == 19, "count_points(F_17 curve) != 19");
  if (o.ok) o.detail = "k < 19 on all points, 50 curves within the Hasse bound";
  return o;
}

Frame random_frame(Rng& rng) {
  Frame f;
  f.protocol = kAllProtocols[rng.next_u64() % 7];
  f.type = static_cast<MsgType>(1 + rng.next_u64() % 5);
  const std::size_t len = rng.next_u64() % 64 == 0 ? rng.next_u64() % 4096 : rng.next_u64() % 96;
  for (std::size_t i = 0; i < len; ++i) f.payload.push_back(static_cast<std::uint8_t>(rng.next_u64()));
  return f;
}

std::vector<Bytes> channel_log(ProtocolId id, std::uint64_t seed) {
  Rng rng(seed);
  const ProtocolConfig cfg = fixtures::config_for(id, 12);
  const KeyPair keys = fixtures::random_keys(id, rng, 128, cfg);
  ProverSession p(keys.prover, cfg, rng.fork());
  VerifierSession v(keys.verifier, cfg, rng.fork());
  MeteredChannel ch;
  run_rounds(p, v, ch);
  std::vector<Bytes> out;
  for (const auto& e : ch.log()) out.push_back(e.wire);
  return out;
}

Outcome wire_determinism() {
  Outcome o;
  for (ProtocolId id : kAllProtocols) {
    o.require(channel_log(id, 109) == channel_log(id, 109),
              std::string(protocol_name(id)) + " logs differ under one seed");
  }
  Rng rng(110);
  int mismatches = 0;
  for (int i = 0; i < 100000; ++i) {
    const Frame f = random_frame(rng);
    if (!(decode_frame(encode_frame(f)) == f)) ++mismatches;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " frame mismatches");
  if (o.ok) o.detail = "7 protocols byte-identical, 1e5 frames round-trip";
  return o;
}

Outcome info_tables() {
  Outcome o;
  const auto fields = nist_field_sizes();
  const std::vector<std::pair<unsigned, unsigned>> want_fields = {
      {192, 163}, {224, 233}, {256, 283}, {384, 409}, {521, 571}};
  o.require(fields.size() == 5, "field table has " + std::to_string(fields.size()) + " rows");
  for (std::size_t i = 0; i < std::min(fields.size(), want_fields.size()); ++i) {
    o.require(fields[i].prime_bits == want_fields[i].first && fields[i].binary_degree == want_fields[i].second,
              "field row " + std::to_string(i));
  }
  const std::vector<std::tuple<unsigned, unsigned, unsigned>> want_levels = {
      {80, 160, 1024}, {112, 224, 2048}, {128, 256, 3072}, {192, 384, 8192}, {256, 512, 15360}};
  const auto levels = security_levels();
  o.require(levels.size() == 5, "level table has " + std::to_string(levels.size()) + " rows");
  for (const auto& [sym, ecc, rsa] : want_levels) {
    const SecurityLevel l = security_lookup(sym);
    o.require(l.ecc_bits == ecc && l.rsa_bits == rsa, "level " + std::to_string(sym));
  }
  if (o.ok) o.detail = "both tables match";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"completeness", completeness},       {"soundness statistics", soundness},
      {"zero-knowledge multisets", zero_knowledge}, {"benchmark orderings", orderings},
      {"schnorr online cost", schnorr_online}, {"ec-sqrt attack", attack},
      {"curve checks", curve_checks},       {"group law oracle", group_law},
      {"wire determinism", wire_determinism}, {"info tables", info_tables},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    const auto start = Clock::now();
    Outcome result;
    try {
      result = check();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2d %-26s %8.0f ms  %s\n", result.ok ? "PASS" : "FAIL", index, name, ms_since(start),
                result.detail.c_str());
    std::fflush(stdout);
    failures += result.ok ? 0 : 1;
  }
  return failures;
}
