#pragma once

#include <stdexcept>
#include <string>

namespace l2approx {

/// Malformed input or a violated precondition. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical invariant that must hold by theory failed at run time
/// (pairing asymmetry, small-eigenvalue bound breach, ...). Exit code 3.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace l2approx
