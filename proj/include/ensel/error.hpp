#pragma once

#include <stdexcept>
#include <string>

namespace ensel {

// Bad or inconsistent input data (malformed records, invariant violations,
// missing labels). The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid invocation or configuration. The CLI maps this to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ensel
