#pragma once

#include <stdexcept>
#include <string>

namespace wspline {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// measure construction
struct AllZeroError : Error { using Error::Error; };
struct NegativeMassError : Error { using Error::Error; };
struct DegenerateRasterError : Error { using Error::Error; };

// exact OT oracle
struct TooLargeError : Error { using Error::Error; };

// sinkhorn
struct NoConvergenceError : Error { using Error::Error; };
struct EpsTooSmallError : Error { using Error::Error; };
struct NotConvergedError : Error { using Error::Error; };

// gaussian
struct NotSPDError : Error { using Error::Error; };
struct InfeasibleConstraintError : Error { using Error::Error; };

// spline energies
struct BackendMismatchError : Error { using Error::Error; };
struct ConstraintViolatedError : Error {
  int index;
  ConstraintViolatedError(int idx, const std::string& msg) : Error(msg), index(idx) {}
};
struct SingularSystemError : Error { using Error::Error; };

// optimizer
struct NoProgressError : Error { using Error::Error; };

// io / config
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace wspline
