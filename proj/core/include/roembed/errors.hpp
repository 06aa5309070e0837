#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roembed {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The surface text does not match the formula grammar.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected);

  /// Zero-based byte offset of the offending token.
  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

/// A variable occurs more than once in a formula.
class ReadOnceViolation : public Error {
 public:
  explicit ReadOnceViolation(std::string var);
  const std::string& var() const noexcept { return var_; }

 private:
  std::string var_;
};

/// The formula simplified to a constant function.
class DegenerateConstant : public Error {
 public:
  explicit DegenerateConstant(bool value);
  bool value() const noexcept { return value_; }

 private:
  bool value_;
};

class MissingVariable : public Error {
 public:
  explicit MissingVariable(std::string var);
  const std::string& var() const noexcept { return var_; }

 private:
  std::string var_;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class MalformedCertificate : public Error {
 public:
  using Error::Error;
};

/// Serialized input (JSON, trees) that is not well formed.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

class SizeLimitExceeded : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// A certificate failed verification where no counterexample is returned:
/// the extractor's self-check, or the structural check above the size limit.
class VerificationFailed : public Error {
 public:
  VerificationFailed(std::string what, std::string x, std::string y);
  const std::string& x() const noexcept { return x_; }
  const std::string& y() const noexcept { return y_; }

 private:
  std::string x_;
  std::string y_;
};

}  // namespace roembed
