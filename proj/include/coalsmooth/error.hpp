// Copyright 2026 The coalsmooth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COALSMOOTH_ERROR_HPP
#define COALSMOOTH_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace coalsmooth {

enum class ErrorCode {
  kInvalidProfile,
  kInvalidPlayer,
  kArityMismatch,
  kStateSpaceTooLarge,
  kInvalidArgument,
  kSpecError,
  kInvalidDistribution,
  kDegenerateGame,
  kMissingOutStrategy,
  kMissingPotential,
  kIncomparable,
  kNotMultisetExtendable,
  kRejectedCertificate,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidProfile: return "InvalidProfile";
    case ErrorCode::kInvalidPlayer: return "InvalidPlayer";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kStateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSpecError: return "SpecError";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
    case ErrorCode::kDegenerateGame: return "DegenerateGame";
    case ErrorCode::kMissingOutStrategy: return "MissingOutStrategy";
    case ErrorCode::kMissingPotential: return "MissingPotential";
    case ErrorCode::kIncomparable: return "Incomparable";
    case ErrorCode::kNotMultisetExtendable: return "NotMultisetExtendable";
    case ErrorCode::kRejectedCertificate: return "RejectedCertificate";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this exception; the code
/// lets callers (the CLI in particular) map failures onto stable exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace coalsmooth

#endif  // COALSMOOTH_ERROR_HPP
