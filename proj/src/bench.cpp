#include "zkid/bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <thread>

#include "zkid/errors.hpp"
#include "zkid/protocols.hpp"

namespace zkid {
namespace {

constexpr std::array<SecurityLevel, 5> kSecurityLevels = {{
    {80, 160, 1024, "SKIPJACK"},
    {112, 224, 2048, "Triple-DES"},
    {128, 256, 3072, "AES small"},
    {192, 384, 8192, "AES medium"},
    {256, 512, 15360, "AES large"},
}};

constexpr std::array<NistField, 5> kNistFields = {{
    {192, 163},
    {224, 233},
    {256, 283},
    {384, 409},
    {521, 571},
}};

bool precomputes(ProtocolId id) { return id == ProtocolId::kSchnorr || id == ProtocolId::kEcSchnorr2g; }

double criterion_value(const Metrics& m, Criterion c) {
  switch (c) {
    case Criterion::kBandwidth:
      return static_cast<double>(m.bandwidth_bits);
    case Criterion::kModmuls:
      return static_cast<double>(m.prover_modmuls);
    case Criterion::kMemory:
      return static_cast<double>(m.memory_bytes);
    case Criterion::kTime:
      return m.elapsed_ms;
  }
  return 0;
}

}  // namespace

Metrics bench_protocol(ProtocolId protocol, const ProtocolConfig& cfg, const Setting& setting,
                       Rng& rng) {
  const KeyPair keys = keygen(protocol, setting, cfg, rng);
  ProverSession prover(keys.prover, cfg, rng.fork());
  VerifierSession verifier(keys.verifier, cfg, rng.fork());
  MeteredChannel channel;

  const auto start = std::chrono::steady_clock::now();
  if (precomputes(protocol)) prover.precompute(cfg.rounds);
  const Transcript tr = run_rounds(prover, verifier, channel);
  const auto stop = std::chrono::steady_clock::now();

  Metrics m;
  m.bandwidth_bits = channel.bandwidth_bits();
  m.prover_modmuls = prover.online_muls().count();
  m.offline_modmuls = prover.offline_muls().count();
  m.memory_bytes = prover.key_bytes() + channel.max_frame_size() + prover.peak_state_bytes();
  m.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  m.accepted = tr.verdict == Verdict::kAccept;
  return m;
}

ProtocolConfig bench_config(ProtocolId protocol, const BenchSettings& settings) {
  ProtocolConfig cfg;
  cfg.rounds = settings.rounds;
  cfg.fs_secrets = settings.fs_secrets;
  cfg.gq_exponent = settings.gq_exponent;
  if (precomputes(protocol)) {
    cfg.rounds = settings.schnorr_rounds;
    cfg.challenge_bits = settings.schnorr_challenge_bits;
  }
  return cfg;
}

SettingParams bench_setting_params(const BenchSettings& settings) {
  SettingParams params;
  params.modulus_bits = settings.modulus_bits;
  params.ec_field_bits = settings.ec_field_bits;
  params.ring_factor_bits = settings.ring_factor_bits;
  params.gq_exponent = settings.gq_exponent;
  return params;
}

std::vector<ProtocolId> BenchReport::ordering(Criterion criterion) const {
  std::vector<BenchRow> sorted = rows;
  std::stable_sort(sorted.begin(), sorted.end(), [&](const BenchRow& a, const BenchRow& b) {
    return criterion_value(a.metrics, criterion) < criterion_value(b.metrics, criterion);
  });
  std::vector<ProtocolId> out;
  for (const auto& row : sorted) out.push_back(row.protocol);
  return out;
}

const Metrics& BenchReport::metrics(ProtocolId protocol) const {
  for (const auto& row : rows) {
    if (row.protocol == protocol) return row.metrics;
  }
  throw std::out_of_range("protocol not in report: " + std::string(protocol_name(protocol)));
}

BenchReport compare(std::span<const ProtocolId> protocols, const BenchSettings& settings, Rng& rng) {
  if (protocols.size() < 2) throw InvalidSetting("compare needs at least two protocols");
  // Seeds are drawn up front so serial and parallel runs see the same streams.
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < protocols.size(); ++i) seeds.push_back(rng.next_u64());

  BenchReport report;
  report.rows.resize(protocols.size());
  const auto run_row = [&](std::size_t i) {
    Rng row_rng(seeds[i]);
    const ProtocolId p = protocols[i];
    const Setting setting = make_setting(p, bench_setting_params(settings), row_rng);
    report.rows[i] = {p, bench_protocol(p, bench_config(p, settings), setting, row_rng)};
  };

  if (settings.parallel) {
    std::vector<std::exception_ptr> errors(protocols.size());
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < protocols.size(); ++i) {
      workers.emplace_back([&, i] {
        try {
          run_row(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::size_t i = 0; i < protocols.size(); ++i) run_row(i);
  }
  return report;
}

std::string format_table(const BenchReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %14s %14s %14s %12s\n", "protocol", "bandwidth_bits",
                "prover_modmuls", "memory_bytes", "elapsed_ms*");
  out << line;
  for (const auto& row : report.rows) {
    const Metrics& m = row.metrics;
    std::snprintf(line, sizeof line, "%-14s %14llu %14llu %14llu %12.3f\n",
                  std::string(protocol_name(row.protocol)).c_str(),
                  static_cast<unsigned long long>(m.bandwidth_bits),
                  static_cast<unsigned long long>(m.prover_modmuls),
                  static_cast<unsigned long long>(m.memory_bytes), m.elapsed_ms);
    out << line;
  }
  out << "* wall-clock timing; not deterministic\n";
  return out.str();
}

std::string format_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "protocol,bandwidth_bits,prover_modmuls,memory_bytes,elapsed_ms\n";
  for (const auto& row : report.rows) {
    const Metrics& m = row.metrics;
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", m.elapsed_ms);
    out << protocol_name(row.protocol) << ',' << m.bandwidth_bits << ',' << m.prover_modmuls << ','
        << m.memory_bytes << ',' << ms << '\n';
  }
  return out.str();
}

SecurityLevel security_lookup(unsigned level) {
  for (const auto& row : kSecurityLevels) {
    if (row.symmetric_bits == level) return row;
  }
  throw UnknownLevel("no key-size entry for a " + std::to_string(level) + "-bit security level");
}

std::span<const SecurityLevel> security_levels() { return kSecurityLevels; }

std::span<const NistField> nist_field_sizes() { return kNistFields; }

}  // namespace zkid
