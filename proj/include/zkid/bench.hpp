#pragma once

// Benchmark harness: bandwidth, prover multiplications, memory and wall time
// per protocol, plus the key-size lookup tables.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zkid/keys.hpp"

namespace zkid {

struct Metrics {
  std::uint64_t bandwidth_bits = 0;
  /// Online prover multiplications. Commitments prepared ahead of time
  /// (SCHNORR, EC_SCHNORR2G) are charged to offline_modmuls instead.
  std::uint64_t prover_modmuls = 0;
  std::uint64_t offline_modmuls = 0;
  /// Online key bytes + largest frame + peak per-round prover state.
  std::uint64_t memory_bytes = 0;
  double elapsed_ms = 0;
  bool accepted = false;
};

/// keygen is untimed; the timed region covers any precomputation and the run.
Metrics bench_protocol(ProtocolId protocol, const ProtocolConfig& cfg, const Setting& setting,
                       Rng& rng);

struct BenchSettings {
  unsigned modulus_bits = 256;
  std::uint32_t rounds = 100;
  std::uint32_t fs_secrets = 3;
  std::uint32_t gq_exponent = 65521;
  /// SCHNORR and EC_SCHNORR2G run a single round with a wide challenge.
  std::uint32_t schnorr_challenge_bits = 20;
  std::uint32_t schnorr_rounds = 1;
  unsigned ec_field_bits = 16;
  unsigned ring_factor_bits = 16;
  bool parallel = false;
};

ProtocolConfig bench_config(ProtocolId protocol, const BenchSettings& settings);
SettingParams bench_setting_params(const BenchSettings& settings);

enum class Criterion { kBandwidth, kModmuls, kMemory, kTime };

struct BenchRow {
  ProtocolId protocol;
  Metrics metrics;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  /// Protocols sorted ascending by the criterion (ties keep row order).
  std::vector<ProtocolId> ordering(Criterion criterion) const;
  const Metrics& metrics(ProtocolId protocol) const;
};

/// Benchmarks each protocol on a freshly generated setting. Needs at least
/// two protocols (InvalidSetting otherwise).
BenchReport compare(std::span<const ProtocolId> protocols, const BenchSettings& settings, Rng& rng);

std::string format_table(const BenchReport& report);
std::string format_csv(const BenchReport& report);

struct SecurityLevel {
  unsigned symmetric_bits;
  unsigned ecc_bits;
  unsigned rsa_bits;
  const char* algorithm;
};

/// ECC and RSA key sizes for a symmetric-equivalent level. Throws UnknownLevel.
SecurityLevel security_lookup(unsigned level);
std::span<const SecurityLevel> security_levels();

struct NistField {
  unsigned prime_bits;
  unsigned binary_degree;
};

std::span<const NistField> nist_field_sizes();

}  // namespace zkid
