// Copyright 2026 The nuadv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NUADV_ERROR_H_
#define NUADV_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nuadv {

// Precondition violations (bad config values, out-of-range arguments) are
// reported with std::invalid_argument. Everything below is a failure of the
// data or of the numerics and carries its own type so callers can map it.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data problems: malformed files, schema violations, degenerate
// statistics. The CLI maps these to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

class ConstantFeature : public DataError {
 public:
  explicit ConstantFeature(std::size_t index)
      : DataError("feature " + std::to_string(index) + " is constant"),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class ConstantLabel : public DataError {
 public:
  ConstantLabel() : DataError("label column is constant") {}
};

class InsufficientSamples : public DataError {
 public:
  using DataError::DataError;
};

class EmptyInput : public DataError {
 public:
  using DataError::DataError;
};

class NoPositiveSamples : public DataError {
 public:
  NoPositiveSamples() : DataError("no samples of the perturbed class") {}
};

class DimensionMismatch : public DataError {
 public:
  DimensionMismatch(const std::string& what, std::size_t expected,
                    std::size_t actual)
      : DataError(what + ": expected dimension " + std::to_string(expected) +
                  ", got " + std::to_string(actual)) {}
};

class EmptyMutableSet : public DataError {
 public:
  EmptyMutableSet() : DataError("mask has no mutable feature") {}
};

// Numeric failures. The CLI maps these to exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonInvertibleOmega : public NumericError {
 public:
  using NumericError::NumericError;
};

class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

class CalibrationFailed : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace nuadv

#endif  // NUADV_ERROR_H_
