#pragma once

#include <stdexcept>
#include <string>

namespace primeclock {

/// Raised when a computation would leave the exactly representable
/// 64-bit range (indices, squares, enumeration caps).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Cache or manifest file that cannot be trusted (version, checksum, shape).
class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace primeclock
