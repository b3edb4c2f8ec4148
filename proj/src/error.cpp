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

#include "ltwalk/error.hpp"

namespace ltw {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNegativeProbability: return "NegativeProbability";
    case ErrorCode::kEmptySupport: return "EmptySupport";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMassNotOne: return "MassNotOne";
    case ErrorCode::kUnknownPreset: return "UnknownPreset";
    case ErrorCode::kParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::kUnregisteredObservable: return "UnregisteredObservable";
    case ErrorCode::kNegativeAlpha: return "NegativeAlpha";
    case ErrorCode::kMemoryCapExceeded: return "MemoryCapExceeded";
    case ErrorCode::kDimensionUnsupported: return "DimensionUnsupported";
    case ErrorCode::kNumericalNegativity: return "NumericalNegativity";
    case ErrorCode::kGammaOutOfRange: return "GammaOutOfRange";
    case ErrorCode::kHorizonExceeded: return "HorizonExceeded";
    case ErrorCode::kSeriesDivergent: return "SeriesDivergent";
    case ErrorCode::kNotMonotone: return "NotMonotone";
    case ErrorCode::kIteratedLogUndefined: return "IteratedLogUndefined";
    case ErrorCode::kRecurrentWalkRefused: return "RecurrentWalkRefused";
    case ErrorCode::kDeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorCode::kConfigParse: return "ConfigParse";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace ltw
