#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace holonomy {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// Tolerance ladder: exact algebraic identities vs. composed numerics.
inline constexpr double kExactTol = 1e-12;
inline constexpr double kNumericTol = 1e-10;

enum class ErrorCode {
  InvalidDimension,
  DimensionMismatch,
  ConstraintViolation,
  InternalConsistency,
  UnphysicalTensor,
  Unnormalized,
  OutOfRange,
  NotMaximallyEntangled,
  NotPure,
  Precondition,
  SingularB,
  OpenLoop,
  DegenerateDirection,
  Schema,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Restriction applied to the unitary chosen on subsystem B.
enum class Group { Unitary, Special, Orthogonal };

const char* to_string(Group group);
Group group_from_string(const std::string& name);

}  // namespace holonomy
