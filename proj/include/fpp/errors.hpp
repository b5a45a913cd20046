#pragma once

#include <stdexcept>
#include <string>

namespace fpp {

// Malformed input: bad distribution masses, invalid config keys, missing artifacts.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Well-formed input outside an operation's domain: sites outside the box,
// a < 2, instances too large to enumerate.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace fpp
