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

#pragma once

#include <cstdint>
#include <random>

namespace forge {

/// Purposes for independent random streams derived from one master seed.
enum class StreamPurpose : std::uint32_t {
  kData = 1,
  kSplit = 2,
  kPoolCandidate = 3,
  kPoolAttempt = 4,
  kGa = 5,
  kPool = 6,
};

/// Mixes (master, purpose, index) through std::seed_seq, whose output is
/// fully specified by the standard, into a 64-bit seed.
std::uint64_t derive_seed(std::uint64_t master, StreamPurpose purpose, std::uint64_t index = 0);

inline std::mt19937_64 make_stream(std::uint64_t master, StreamPurpose purpose,
                                   std::uint64_t index = 0) {
  return std::mt19937_64(derive_seed(master, purpose, index));
}

}  // namespace forge
