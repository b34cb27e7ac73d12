#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sbc {

// Dimension mismatches, out-of-range parameters and other caller errors.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A plant input outside the admissible input set.
class ConstraintViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Actuator-side protocol breaches (e.g. a packet ingested at the wrong tick).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Singular solves, non-finite intermediate values.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was asked to do something its preconditions rule out.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DistributionError : public std::invalid_argument {
 public:
  enum class Kind { kRange, kNormalization };

  DistributionError(Kind kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Configuration problems; `key()` names the offending config key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what),
        key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace sbc
