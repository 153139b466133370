#pragma once

#include <stdexcept>
#include <string>

namespace scjitai {

// A distribution or dynamics parameter outside its mathematical domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid environment / agent / experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// API called in the wrong lifecycle state (step before reset, step after end).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Tensor dimension mismatch.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Factorization failure and similar numerical breakdowns.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable input or unwritable output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scjitai
