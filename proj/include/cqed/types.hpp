#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cqed {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Error hierarchy. Every numerical or contract failure in the library derives
// from cqed::Error so the CLI can map it onto a single exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CQED_DEFINE_ERROR(Name) \
  class Name : public Error {   \
   public:                      \
    using Error::Error;         \
  }

CQED_DEFINE_ERROR(TruncationError);
CQED_DEFINE_ERROR(IndexError);
CQED_DEFINE_ERROR(DegenerateStateError);
CQED_DEFINE_ERROR(WeightError);
CQED_DEFINE_ERROR(InvariantError);
CQED_DEFINE_ERROR(IntegrationError);
CQED_DEFINE_ERROR(DomainError);
CQED_DEFINE_ERROR(DegenerateBranchError);
CQED_DEFINE_ERROR(SubspaceError);
CQED_DEFINE_ERROR(NonHermitianError);
CQED_DEFINE_ERROR(QuadratureError);
CQED_DEFINE_ERROR(SamplingError);
CQED_DEFINE_ERROR(CoverageError);
CQED_DEFINE_ERROR(NoDetectionError);
CQED_DEFINE_ERROR(ConfigError);

#undef CQED_DEFINE_ERROR

}  // namespace cqed
