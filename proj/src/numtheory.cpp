#include "zkid/numtheory.hpp"

#include <array>
#include <stdexcept>

#include "zkid/errors.hpp"

namespace zkid {
namespace {

constexpr std::array<unsigned, 24> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                                   41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

// Witness stream for Miller-Rabin, seeded from the candidate.
std::uint64_t witness_seed(const BigInt& n) {
  BigInt low = n & BigInt("0xffffffffffffffff");
  std::uint64_t seed = 0;
  mpz_export(&seed, nullptr, -1, sizeof(seed), 0, 0, low.get_mpz_t());
  return seed ^ (0x9e3779b97f4a7c15ULL * bit_length(n));
}

}  // namespace

BigInt Rng::random_bits(unsigned bits) {
  BigInt out = 0;
  unsigned remaining = bits;
  while (remaining > 0) {
    unsigned take = remaining >= 64 ? 64 : remaining;
    std::uint64_t word = engine_();
    if (take < 64) word &= (std::uint64_t{1} << take) - 1;
    BigInt w;
    mpz_import(w.get_mpz_t(), 1, -1, sizeof(word), 0, 0, &word);
    out = (out << take) | w;
    remaining -= take;
  }
  return out;
}

std::size_t bit_length(const BigInt& x) {
  if (x == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

std::size_t byte_length(const BigInt& x) { return (bit_length(x) + 7) / 8; }

std::size_t popcount(const BigInt& x) {
  if (x < 0) throw std::invalid_argument("popcount of negative value");
  return mpz_popcount(x.get_mpz_t());
}

BigInt mod_reduce(const BigInt& x, const BigInt& m) {
  BigInt r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

BigInt mod_mul(const BigInt& a, const BigInt& b, const BigInt& m, MulCounter& ctr) {
  ctr.tick();
  return mod_reduce(a * b, m);
}

BigInt mod_exp(const BigInt& base, const BigInt& exp, const BigInt& m, MulCounter& ctr) {
  if (m < 2) throw std::invalid_argument("mod_exp: modulus must be at least 2");
  if (exp < 0) throw std::invalid_argument("mod_exp: negative exponent");
  if (exp == 0) return 1;
  const BigInt b = mod_reduce(base, m);
  BigInt result = b;
  for (auto i = static_cast<long>(bit_length(exp)) - 2; i >= 0; --i) {
    result = mod_mul(result, result, m, ctr);
    if (mpz_tstbit(exp.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
      result = mod_mul(result, b, m, ctr);
    }
  }
  return result;
}

BigInt mod_exp(const BigInt& base, const BigInt& exp, const BigInt& m) {
  MulCounter scratch;
  return mod_exp(base, exp, m, scratch);
}

BigInt mod_inv(const BigInt& a, const BigInt& m) {
  if (m < 1) throw std::invalid_argument("mod_inv: modulus must be positive");
  if (m == 1) return 0;
  BigInt inv;
  const BigInt r = mod_reduce(a, m);
  if (mpz_invert(inv.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t()) == 0) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
    throw NotInvertible(g);
  }
  return inv;
}

bool is_probable_prime(const BigInt& n, unsigned rounds) {
  if (rounds < 1) throw std::invalid_argument("is_probable_prime: rounds must be >= 1");
  if (n < 2) return false;
  for (unsigned p : kSmallPrimes) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  const BigInt n_minus_1 = n - 1;
  BigInt d = n_minus_1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  Rng witnesses(witness_seed(n));
  const BigInt span = n - 3;  // witnesses in [2, n - 2]
  BigInt x;
  for (unsigned round = 0; round < rounds; ++round) {
    const BigInt a = rand_below(span, witnesses) + 2;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n_minus_1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mod_reduce(x * x, n);
      if (x == n_minus_1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

BigInt rand_below(const BigInt& bound, Rng& rng) {
  if (bound < 1) throw std::invalid_argument("rand_below: bound must be >= 1");
  if (bound == 1) return 0;
  const auto bits = static_cast<unsigned>(bit_length(bound - 1));
  for (;;) {
    BigInt candidate = rng.random_bits(bits);
    if (candidate < bound) return candidate;
  }
}

BigInt rand_range(const BigInt& lo, const BigInt& hi, Rng& rng) {
  if (hi < lo) throw std::invalid_argument("rand_range: empty range");
  return lo + rand_below(hi - lo + 1, rng);
}

BigInt rand_unit(const BigInt& m, Rng& rng) {
  if (m < 2) throw std::invalid_argument("rand_unit: modulus must be at least 2");
  for (;;) {
    BigInt r = rand_below(m, rng);
    if (r == 0) continue;
    BigInt g;
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
    if (g == 1) return r;
  }
}

BigInt random_prime(unsigned bits, Rng& rng, unsigned top_bits) {
  if (bits < 2) throw std::invalid_argument("random_prime: need at least 2 bits");
  if (top_bits < 1 || top_bits > bits) throw std::invalid_argument("random_prime: bad top_bits");
  if (bits == 2) return (rng.next_u64() & 1) ? 3 : 2;
  for (;;) {
    BigInt candidate = rng.random_bits(bits);
    for (unsigned i = 0; i < top_bits; ++i) mpz_setbit(candidate.get_mpz_t(), bits - 1 - i);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (is_probable_prime(candidate)) return candidate;
  }
}

RsaModulus gen_rsa_modulus(unsigned bits, Rng& rng) {
  if (bits < 16) throw std::invalid_argument("gen_rsa_modulus: bits must be >= 16");
  const unsigned p_bits = (bits + 1) / 2;
  const unsigned q_bits = bits / 2;
  for (;;) {
    BigInt p = random_prime(p_bits, rng, 2);
    BigInt q = random_prime(q_bits, rng, 2);
    if (p == q) continue;
    BigInt n = p * q;
    if (bit_length(n) != bits) continue;
    return {std::move(n), std::move(p), std::move(q)};
  }
}

SchnorrGroup gen_schnorr_group(unsigned p_bits, unsigned q_bits, Rng& rng) {
  if (q_bits < 2 || q_bits >= p_bits) {
    throw std::invalid_argument("gen_schnorr_group: need 2 <= q_bits < p_bits");
  }
  const BigInt p_lo = BigInt(1) << (p_bits - 1);
  const BigInt p_hi = (BigInt(1) << p_bits) - 1;
  for (;;) {
    const BigInt q = random_prime(q_bits, rng);
    // p = k*q + 1 with p in [p_lo, p_hi] and k even (p odd).
    BigInt k_lo = (p_lo - 1 + q - 1) / q;
    BigInt k_hi = (p_hi - 1) / q;
    if (mpz_odd_p(k_lo.get_mpz_t())) k_lo += 1;
    if (mpz_odd_p(k_hi.get_mpz_t())) k_hi -= 1;
    if (k_hi < k_lo) continue;
    const BigInt half_span = (k_hi - k_lo) / 2;
    for (int attempt = 0; attempt < 4096; ++attempt) {
      const BigInt k = k_lo + 2 * rand_range(0, half_span, rng);
      const BigInt p = k * q + 1;
      if (!is_probable_prime(p)) continue;
      for (;;) {
        const BigInt h = rand_range(2, p - 2, rng);
        BigInt g = mod_exp(h, k, p);
        if (g != 1) return {p, q, std::move(g)};
      }
    }
  }
}

bool validate_schnorr_group(const SchnorrGroup& group) {
  const auto& [p, q, g] = group;
  if (p < 3 || q < 2) return false;
  if (!is_probable_prime(p) || !is_probable_prime(q)) return false;
  if (!mpz_divisible_p(BigInt(p - 1).get_mpz_t(), q.get_mpz_t())) return false;
  if (g <= 1 || g >= p) return false;
  return mod_exp(g, q, p) == 1;
}

BigInt crt_combine(std::span<const std::pair<BigInt, BigInt>> residues) {
  if (residues.empty()) throw std::invalid_argument("crt_combine: no residues");
  BigInt x = mod_reduce(residues[0].first, residues[0].second);
  BigInt modulus = residues[0].second;
  for (std::size_t i = 1; i < residues.size(); ++i) {
    const auto& [r, m] = residues[i];
    BigInt g;
    mpz_gcd(g.get_mpz_t(), modulus.get_mpz_t(), m.get_mpz_t());
    if (g != 1) {
      throw NonCoprimeModuli("crt_combine: moduli " + modulus.get_str() + " and " + m.get_str() +
                             " share factor " + g.get_str());
    }
    // x + modulus * t = r (mod m)
    const BigInt t = mod_reduce((r - x) * mod_inv(modulus, m), m);
    x += modulus * t;
    modulus *= m;
  }
  return mod_reduce(x, modulus);
}

Bytes to_bytes(const BigInt& x, std::size_t width) {
  if (x < 0) throw std::invalid_argument("to_bytes: negative value");
  const std::size_t len = byte_length(x);
  if (len > width) throw std::invalid_argument("to_bytes: value does not fit");
  Bytes out(width, 0);
  if (len > 0) {
    std::size_t written = 0;
    mpz_export(out.data() + (width - len), &written, 1, 1, 1, 0, x.get_mpz_t());
  }
  return out;
}

BigInt from_bytes(std::span<const std::uint8_t> bytes) {
  BigInt out = 0;
  if (!bytes.empty()) mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return out;
}

std::vector<BigInt> factor_small(BigInt n) {
  if (n < 1) throw std::invalid_argument("factor_small: n must be positive");
  std::vector<BigInt> factors;
  while (mpz_even_p(n.get_mpz_t()) && n > 1) {
    factors.emplace_back(2);
    n >>= 1;
  }
  for (BigInt d = 3; d * d <= n; d += 2) {
    while (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
      factors.push_back(d);
      n /= d;
    }
  }
  if (n > 1) factors.push_back(n);
  return factors;
}

}  // namespace zkid
