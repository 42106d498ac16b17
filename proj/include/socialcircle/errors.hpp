// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace socialcircle {

/// Malformed or unusable input data (trajectory files, checkpoints, cases).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Invalid model, partition or training configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Training produced a non-finite loss.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(int epoch, double loss)
      : std::runtime_error("non-finite loss " + std::to_string(loss) + " at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

}  // namespace socialcircle
