#include "roembed/errors.hpp"

#include <utility>

namespace roembed {

SyntaxError::SyntaxError(std::size_t position, std::string expected)
    : Error("syntax error at position " + std::to_string(position) + ": expected " + expected),
      position_(position),
      expected_(std::move(expected)) {}

ReadOnceViolation::ReadOnceViolation(std::string var)
    : Error("read-once violation: variable '" + var + "' occurs more than once"),
      var_(std::move(var)) {}

DegenerateConstant::DegenerateConstant(bool value)
    : Error(std::string("formula reduces to the constant ") + (value ? "1" : "0")), value_(value) {}

MissingVariable::MissingVariable(std::string var)
    : Error("missing or unknown variable '" + var + "'"), var_(std::move(var)) {}

VerificationFailed::VerificationFailed(std::string what, std::string x, std::string y)
    : Error(std::move(what)), x_(std::move(x)), y_(std::move(y)) {}

}  // namespace roembed
