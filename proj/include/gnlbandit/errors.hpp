#pragma once

#include <stdexcept>
#include <string>

namespace gnl {

// Scalar parameter out of its admissible range (mu, eta, counts, ...).
class InvalidParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Nest structure does not partition the arm set.
class InvalidPartitionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input vector is degenerate for the requested evaluation (e.g. all-zero).
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Observed reward outside the configured range.
class RewardRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Experiment configuration is malformed or inconsistent.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Output file could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gnl
