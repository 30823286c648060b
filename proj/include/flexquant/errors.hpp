// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLEXQUANT_ERRORS_HPP
#define FLEXQUANT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace flexquant {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input: bad file, bad format string, shape mismatch,
// out-of-domain argument. CLI exit code 2.
class InputError : public Error {
 public:
  explicit InputError(const std::string& msg) : Error(msg) {}
};

// Requested operation the datapath does not support, e.g. an INT x FP
// dot product. CLI exit code 3.
class UnsupportedMixedOperands : public Error {
 public:
  UnsupportedMixedOperands() : Error("unsupported_mixed_operands") {}
  explicit UnsupportedMixedOperands(const std::string& msg) : Error(msg) {}
};

// Broken internal invariant. CLI exit code 4.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& msg) : Error(msg) {}
};

}  // namespace flexquant

#endif  // FLEXQUANT_ERRORS_HPP
