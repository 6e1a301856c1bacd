// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace xden {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input: bad parameters, malformed files, violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Inputs are individually valid but mutually inconsistent (dimensions,
// region counts, provenance).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// The problem has no usable solution: zero mass, every region unidentifiable.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// A computation produced a non-finite value.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& msg, int iteration)
      : Error(msg), iteration(iteration) {}
  int iteration = -1;
};

// Log transform requested on a non-positive intensity. Carries the first
// offending pixel.
class SaturationError : public ValidationError {
 public:
  SaturationError(const std::string& msg, int px, int py)
      : ValidationError(msg), px(px), py(py) {}
  int px = -1, py = -1;
};

// A detector cannot cover the requested volume.
class CoverageError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A mesh part failed the watertightness parity check.
class NonWatertightError : public ValidationError {
 public:
  NonWatertightError(const std::string& msg, std::string part)
      : ValidationError(msg), part_name(std::move(part)) {}
  std::string part_name;
};

}  // namespace xden
