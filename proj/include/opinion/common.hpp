#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace opinion {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Default tolerance for structural checks (row sums, zero patterns).
inline constexpr double kTolStruct = 1e-12;

/// Default tolerance for eigenvalue classification (distance to 1, unit disk margin).
inline constexpr double kTolEig = 1e-8;

/// Input violates a documented contract: malformed matrix, wrong dimensions,
/// failed precondition. Maps to exit code 2 at the command line.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a trustworthy answer (solver
/// non-convergence, ambiguous multiplicity, exhausted sample budget).
/// Maps to exit code 3 at the command line.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace opinion
