#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace mre {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

enum class ErrorCode {
  NonMonicDenominator,
  NotHurwitz,
  DegreeMismatch,
  OrderMismatch,
  DuplicateFrequency,
  ZeroAmplitude,
  DimensionMismatch,
  GammaLostPositivity,
  BetaNonPositive,
  NotSymmetric,
  EmptySamples,
  LogTooShort,
  NonPositiveEigen,
  NonPositiveInput,
  ZeroExcitation,
  TOrderViolation,
  UnknownPreset,
  InvalidConfig,
  IoFailure,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonMonicDenominator: return "NonMonicDenominator";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::DuplicateFrequency: return "DuplicateFrequency";
    case ErrorCode::ZeroAmplitude: return "ZeroAmplitude";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::GammaLostPositivity: return "GammaLostPositivity";
    case ErrorCode::BetaNonPositive: return "BetaNonPositive";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::EmptySamples: return "EmptySamples";
    case ErrorCode::LogTooShort: return "LogTooShort";
    case ErrorCode::NonPositiveEigen: return "NonPositiveEigen";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::ZeroExcitation: return "ZeroExcitation";
    case ErrorCode::TOrderViolation: return "TOrderViolation";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// All library failures are reported through this exception; `code()` lets
/// callers branch without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Forces exact symmetry in place; used after every update of Ω and Γ.
template <typename Derived>
void symmetrize(Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  m = (Scalar(0.5) * (m + m.transpose())).eval();
}

}  // namespace mre
