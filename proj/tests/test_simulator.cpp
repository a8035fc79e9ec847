#include <doctest.h>

#include <algorithm>
#include <tuple>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "zkid/protocols.hpp"

using namespace zkid;
using namespace fixtures;

namespace {

using Triple = std::tuple<Bytes, Bytes, Bytes>;

Triple triple(const Frame& commit, const Frame& challenge, const Frame& response) {
  return {commit.payload, challenge.payload, response.payload};
}

std::vector<BigInt> units(const BigInt& n) {
  std::vector<BigInt> out;
  for (BigInt r = 1; r < n; ++r) {
    if (oracle::brute_inverse(r.get_ui(), n.get_ui())) out.push_back(r);
  }
  return out;
}

/// Every honest transcript over all prover coins and challenges.
std::vector<Triple> honest_multiset(const ProverKey& key, const std::vector<CommitmentSecret>& coins) {
  const VerifierKey pub = public_part(key);
  const BigInt bound = challenge_bound(pub, {});
  std::vector<Triple> out;
  ProverSession p(key, {}, Rng(1));
  for (BigInt c = 0; c < bound; ++c) {
    for (const auto& r : coins) {
      const Frame commit = p.commit_with(r);
      const Frame challenge = make_challenge_frame(pub, {}, c);
      out.push_back(triple(commit, challenge, p.respond(challenge)));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Every simulated transcript over all simulator coins and challenges.
std::vector<Triple> simulated_multiset(const VerifierKey& pub, const std::vector<SimulatorCoin>& coins) {
  const BigInt bound = challenge_bound(pub, {});
  std::vector<Triple> out;
  for (BigInt c = 0; c < bound; ++c) {
    for (const auto& coin : coins) {
      const RoundFrames rf = simulate_round_with(pub, {}, c, coin);
      out.push_back(triple(rf.commit, rf.challenge, rf.response));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("QR over n = 77: honest and simulated transcript multisets are equal") {
  const auto key = qr77();
  const auto u = units(77);
  REQUIRE(u.size() == 60);
  const std::vector<CommitmentSecret> honest_coins(u.begin(), u.end());
  const std::vector<SimulatorCoin> sim_coins(u.begin(), u.end());
  const auto honest = honest_multiset(key, honest_coins);
  CHECK(honest.size() == 120);
  CHECK(honest == simulated_multiset(key.pub, sim_coins));
}

TEST_CASE("QR moduli below 100: multisets agree for every secret") {
  for (int n : {15, 21, 33, 35, 65, 91}) {
    const auto u = units(n);
    const std::vector<CommitmentSecret> honest_coins(u.begin(), u.end());
    const std::vector<SimulatorCoin> sim_coins(u.begin(), u.end());
    for (const auto& x : u) {
      const auto key = make_qr_key(n, x);
      CHECK_MESSAGE(honest_multiset(key, honest_coins) == simulated_multiset(key.pub, sim_coins),
                    "n=" << n << " x=" << x.get_str());
    }
  }
}

TEST_CASE("EC_DLOG on the 19-point curve: honest and simulated multisets are equal") {
  for (int m = 1; m < 19; ++m) {
    const auto key = ec_dlog17(m);
    std::vector<CommitmentSecret> honest_coins;
    std::vector<SimulatorCoin> sim_coins;
    for (int r = 0; r < 19; ++r) {
      honest_coins.emplace_back(BigInt(r));
      sim_coins.emplace_back(BigInt(r));
    }
    const auto honest = honest_multiset(key, honest_coins);
    CHECK(honest.size() == 38);
    CHECK_MESSAGE(honest == simulated_multiset(key.pub, sim_coins), "m=" << m);
  }
}

TEST_CASE("a transcript multiset depends on the public key") {
  // Sanity check that the comparison has teeth: a different b changes the set.
  const auto u = units(77);
  const std::vector<SimulatorCoin> sim_coins(u.begin(), u.end());
  const std::vector<CommitmentSecret> honest_coins(u.begin(), u.end());
  CHECK(honest_multiset(make_qr_key(77, 9), honest_coins) !=
        simulated_multiset(make_qr_key(77, 10).pub, sim_coins));
}
