// SPDX-License-Identifier: Apache-2.0
//
// rissec: secrecy-rate optimization for RIS-assisted multi-user downlinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rissec {

using cdouble = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kLn2 = 0.69314718055994530942;

enum class ErrorCode {
  DimensionMismatch,
  NonPositive,
  NotPowerOfTwo,
  InvalidConfig,
  UnknownLink,
  SingularSystem,
  InvalidCoefficients,
  BracketingFailure,
  ConvergenceFailure,
  BadOrder,
  NotUnitModulus,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::NotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownLink: return "UnknownLink";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InvalidCoefficients: return "InvalidCoefficients";
    case ErrorCode::BracketingFailure: return "BracketingFailure";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::BadOrder: return "BadOrder";
    case ErrorCode::NotUnitModulus: return "NotUnitModulus";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure surfaced by the library carries one of the codes above so
/// callers (Monte Carlo harnesses in particular) can decide to resample.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace rissec
