#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace zkid {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// numtheory

class NotInvertible : public Error {
 public:
  explicit NotInvertible(mpz_class gcd)
      : Error("value is not invertible: gcd = " + gcd.get_str()), gcd_(std::move(gcd)) {}
  const mpz_class& gcd() const { return gcd_; }

 private:
  mpz_class gcd_;
};

class NonCoprimeModuli : public Error {
 public:
  using Error::Error;
};

// ecc

/// Raised on a ring curve when a slope denominator shares a factor with the
/// modulus. The gcd is a nontrivial divisor of the modulus.
class RingInversionFailure : public Error {
 public:
  explicit RingInversionFailure(mpz_class gcd)
      : Error("slope denominator not invertible: gcd = " + gcd.get_str()), gcd_(std::move(gcd)) {}
  const mpz_class& gcd() const { return gcd_; }

 private:
  mpz_class gcd_;
};

class ModulusTooLarge : public Error {
 public:
  using Error::Error;
};

class InvalidCurve : public Error {
 public:
  using Error::Error;
};

// protocols

class InvalidSetting : public Error {
 public:
  using Error::Error;
};

class StateOrderViolation : public Error {
 public:
  using Error::Error;
};

class ChallengeOutOfRange : public Error {
 public:
  using Error::Error;
};

class MalformedFrame : public Error {
 public:
  using Error::Error;
};

class AttackFailed : public Error {
 public:
  AttackFailed(const std::string& what, std::size_t candidates_tried)
      : Error(what + " (" + std::to_string(candidates_tried) + " candidates tried)"),
        candidates_tried_(candidates_tried) {}
  std::size_t candidates_tried() const { return candidates_tried_; }

 private:
  std::size_t candidates_tried_;
};

// wire

class WireError : public Error {
 public:
  using Error::Error;
};
class PayloadTooLarge : public WireError {
 public:
  using WireError::WireError;
};
class Truncated : public WireError {
 public:
  using WireError::WireError;
};
class UnknownProtocol : public WireError {
 public:
  using WireError::WireError;
};
class UnknownMsgType : public WireError {
 public:
  using WireError::WireError;
};
class TrailingBytes : public WireError {
 public:
  using WireError::WireError;
};
class ChannelClosed : public WireError {
 public:
  using WireError::WireError;
};
class ChannelEmpty : public WireError {
 public:
  using WireError::WireError;
};

// cli
class KeyFileError : public Error {
 public:
  using Error::Error;
};

// bench

class UnknownLevel : public Error {
 public:
  using Error::Error;
};

}  // namespace zkid
