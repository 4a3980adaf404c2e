#ifndef BTRATE_ERROR_HPP_
#define BTRATE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace btrate {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid input data (bad matrix, bad parameters, parse errors).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Valid data on which the requested method is undefined, e.g. a reducible
/// comparison matrix or an item without losses.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// An iterative method ran out of its iteration budget.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace btrate

#endif  // BTRATE_ERROR_HPP_
