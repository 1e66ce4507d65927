#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace dpd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Numerical tolerances shared by every module.
struct Tolerances {
  double integrality = 1e-6;     // |x_j - round(x_j)| for integer coordinates
  double feasibility = 1e-7;     // constraint slack
  double complementarity = 1e-7; // lambda_s * slack_s
  double reduced_cost = 1e-7;    // column-generation termination
  double gap_rel = 1e-6;         // branch-and-bound optimality gap, relative to 1+|obj|
  double pivot = 1e-9;           // simplex pivot magnitude
};

inline constexpr Tolerances kTol{};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an input is structurally invalid (dimensions, bounds, config).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Raised when a block's mixed-integer set X_i turns out to be empty.
class InfeasibleBlock : public Error {
 public:
  using Error::Error;
};

// Raised when an enumeration cap, node budget or iteration cap is exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// Raised when the simplex cannot certify its own output.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// Raised by bounds that need a Slater certificate when none is available.
class MissingSlater : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace dpd
