#pragma once

#include <stdexcept>
#include <string>

namespace lrp {

/// Violated precondition or malformed input supplied by the caller.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request that would exceed a memory or enumeration budget.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Corrupt or incompatible persistent file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed (e.g. the coupling lost a witness edge).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Statistical fit could not be performed on the given data.
class FitFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

}  // namespace lrp
