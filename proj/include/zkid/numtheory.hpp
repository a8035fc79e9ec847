#pragma once

// Big-integer modular arithmetic for the classical identification protocols.
//
// All randomness is drawn from an explicit, seedable Rng so that keys and
// transcripts are reproducible. Multiplication counts are accumulated in a
// MulCounter owned by the caller (one per session).

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace zkid {

using BigInt = mpz_class;
using Bytes = std::vector<std::uint8_t>;

/// Deterministic random source. Wraps mt19937_64, whose output sequence is
/// fixed by the standard, so a seed yields the same stream on every platform.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0x5eed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  /// Uniform integer with at most `bits` bits.
  BigInt random_bits(unsigned bits);

  /// Independent child stream; used to give each session its own source.
  Rng fork() { return Rng(engine_()); }

 private:
  std::mt19937_64 engine_;
};

/// Number of modular multiplications performed by one party. Squarings
/// count as multiplications; inversions and additions are not counted.
class MulCounter {
 public:
  void tick(std::uint64_t n = 1) { count_ += n; }
  std::uint64_t count() const { return count_; }
  void reset() { count_ = 0; }

 private:
  std::uint64_t count_ = 0;
};

struct RsaModulus {
  BigInt n;
  BigInt p;
  BigInt q;
};

struct SchnorrGroup {
  BigInt p;
  BigInt q;
  BigInt g;
};

std::size_t bit_length(const BigInt& x);
std::size_t byte_length(const BigInt& x);
std::size_t popcount(const BigInt& x);

/// (a * b) mod m, counted as one multiplication.
BigInt mod_mul(const BigInt& a, const BigInt& b, const BigInt& m, MulCounter& ctr);

/// Non-negative representative of x mod m.
BigInt mod_reduce(const BigInt& x, const BigInt& m);

/// Left-to-right square-and-multiply. Adds (bitlen(e) - 1) squarings and
/// (popcount(e) - 1) multiplications to `ctr`; exp = 0 costs nothing.
BigInt mod_exp(const BigInt& base, const BigInt& exp, const BigInt& m, MulCounter& ctr);
BigInt mod_exp(const BigInt& base, const BigInt& exp, const BigInt& m);

/// Inverse of a modulo m. Throws NotInvertible carrying gcd(a, m).
BigInt mod_inv(const BigInt& a, const BigInt& m);

/// Miller-Rabin with `rounds` witnesses. Witnesses are derived from n itself,
/// so the answer is a pure function of (n, rounds).
bool is_probable_prime(const BigInt& n, unsigned rounds = 40);

/// Uniform over [0, bound) by rejection sampling.
BigInt rand_below(const BigInt& bound, Rng& rng);

/// Uniform over [lo, hi].
BigInt rand_range(const BigInt& lo, const BigInt& hi, Rng& rng);

/// Uniform unit of Z_m^*.
BigInt rand_unit(const BigInt& m, Rng& rng);

/// Random prime with exactly `bits` bits. `top_bits` leading bits are forced
/// to one (2 keeps products of two such primes at full length).
BigInt random_prime(unsigned bits, Rng& rng, unsigned top_bits = 1);

RsaModulus gen_rsa_modulus(unsigned bits, Rng& rng);

SchnorrGroup gen_schnorr_group(unsigned p_bits, unsigned q_bits, Rng& rng);

/// True when q | p - 1, both are prime, and g generates the order-q subgroup.
bool validate_schnorr_group(const SchnorrGroup& group);

/// Unique x modulo the product of the moduli with x = r_i (mod m_i).
/// Throws NonCoprimeModuli when two moduli share a factor.
BigInt crt_combine(std::span<const std::pair<BigInt, BigInt>> residues);

/// Big-endian magnitude zero-padded to `width` bytes. Throws
/// std::invalid_argument if x does not fit.
Bytes to_bytes(const BigInt& x, std::size_t width);
BigInt from_bytes(std::span<const std::uint8_t> bytes);

/// Prime factorisation by trial division; intended for values below 2^40.
std::vector<BigInt> factor_small(BigInt n);

}  // namespace zkid
