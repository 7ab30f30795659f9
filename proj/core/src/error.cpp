// Copyright 2026 The ensemble-forge Authors.
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

#include "forge/error.hpp"

namespace forge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidSpec: return "invalid-spec";
    case ErrorCode::kMalformedDescriptor: return "malformed-descriptor";
    case ErrorCode::kConfig: return "configuration";
    case ErrorCode::kIndexOutOfRange: return "index-out-of-range";
    case ErrorCode::kSizeLimit: return "size-limit";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kEmptySplit: return "empty-split";
    case ErrorCode::kConstantFeature: return "constant-feature";
    case ErrorCode::kInsufficientSamples: return "insufficient-samples";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kNonBinaryLabel: return "non-binary-label";
    case ErrorCode::kMissingColumn: return "missing-column";
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kExhaustion: return "exhaustion";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kVersion: return "version";
    case ErrorCode::kChecksum: return "checksum";
    case ErrorCode::kEvenEnsemble: return "even-ensemble";
    case ErrorCode::kInvalidSelection: return "invalid-selection";
  }
  return "unknown";
}

}  // namespace forge
