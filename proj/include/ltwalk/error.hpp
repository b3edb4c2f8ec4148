// Copyright 2026 The ltwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LTWALK_ERROR_HPP
#define LTWALK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ltw {

// Error codes shared by the C++ core and the C API (see ltwalk.h, which
// mirrors these values).
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kNegativeProbability = 2,
  kEmptySupport = 3,
  kDimensionMismatch = 4,
  kMassNotOne = 5,
  kUnknownPreset = 6,
  kParameterOutOfRange = 7,
  kUnregisteredObservable = 8,
  kNegativeAlpha = 9,
  kMemoryCapExceeded = 10,
  kDimensionUnsupported = 11,
  kNumericalNegativity = 12,
  kGammaOutOfRange = 13,
  kHorizonExceeded = 14,
  kSeriesDivergent = 15,
  kNotMonotone = 16,
  kIteratedLogUndefined = 17,
  kRecurrentWalkRefused = 18,
  kDeltaOutOfRange = 19,
  kConfigParse = 20,
  kIo = 21,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ltw

#endif  // LTWALK_ERROR_HPP
