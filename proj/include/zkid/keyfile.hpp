#pragma once

// Text key files: one `key = value` pair per line, `#` starts a comment.
// Integers are hex with a 0x prefix, points are `(0xX, 0xY)` or `infinity`,
// the identity is raw text. Every file starts with `protocol = <name>`.
//
//   qr            n, b, identity                  secret: x
//   fs            n, identity, k, v1..vk          secret: s1..sk
//   gq            n, v, J, identity               secret: s
//   schnorr       p, q, g, b                      secret: x
//   ec-sqrt       curve_m, curve_a, curve_b, B    secret: A, p, q
//   ec-dlog       curve_*, G, order, B            secret: m
//   ec-schnorr2g  curve_*, P1, P2, order, V       secret: d1, d2
//
// A secret file repeats the public fields.

#include <string>
#include <string_view>

#include "zkid/keys.hpp"

namespace zkid {

std::string serialize_public(const VerifierKey& key);
std::string serialize_secret(const ProverKey& key);

/// Parse and validate. Throws KeyFileError on missing or malformed fields,
/// off-curve points, or a secret that fails its defining equation.
VerifierKey parse_public(std::string_view text);
ProverKey parse_secret(std::string_view text);

/// Curve description with keys m, a, b. Throws KeyFileError on bad syntax
/// and InvalidCurve on a singular curve.
CurveParams parse_curve_file(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace zkid
