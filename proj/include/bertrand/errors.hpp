#pragma once

#include <stdexcept>
#include <string>

namespace bertrand {

// Query or build outside what a sieve (or other table) covers.
class CoverageError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Request would exceed the configured memory/size budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside an operation's parameter domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Lookup of a registry identifier that does not exist.
class UnknownIdError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bertrand
