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

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <vector>

#include "forge/ids.hpp"

namespace forge {

/// L x 12 matrix of bits, one row per classifier. Rows need not be valid
/// descriptors, so hand-made fixtures can be loaded as-is.
class BitMatrix {
 public:
  using Row = std::array<std::uint8_t, kDescriptorBits>;

  BitMatrix() = default;
  /// Throws kInvalidParameter if any entry is not 0 or 1.
  explicit BitMatrix(std::vector<Row> rows);
  explicit BitMatrix(std::span<const IdentityDescriptor> descriptors);

  /// Reads a fixture laid out position-major: 12 lines, each holding one
  /// space-separated bit per classifier (the transpose of the row layout).
  static BitMatrix read_position_major(std::istream& in);

  std::size_t classifiers() const noexcept { return rows_.size(); }
  static constexpr std::size_t positions() noexcept { return kDescriptorBits; }
  const std::vector<Row>& rows() const noexcept { return rows_; }

 private:
  std::vector<Row> rows_;
};

/// Number of classifiers carrying a 1 at bit position `position`.
int column_count(const BitMatrix& matrix, int position);

/// Kohavi-Wolpert variance over bit positions:
///   kw = (1 / (N L^2)) * sum_j l_j (L - l_j),   l_j = column_count(j).
/// The integer sum is accumulated exactly before the single division.
/// Empty matrices yield 0.
double kw_variance(const BitMatrix& matrix);
double kw_variance(std::span<const IdentityDescriptor> descriptors);

/// kw of the descriptors picked out by `indices` (no copy of the rows).
double kw_variance(std::span<const IdentityDescriptor> descriptors,
                   std::span<const int> indices);

struct SubsetDiversity {
  std::vector<int> indices;  // ascending
  double kw = 0.0;
};

inline constexpr std::size_t kDefaultSubsetCap = 10'000;
inline constexpr std::size_t kMaxEnumerableDescriptors = 16;

/// Enumerates every k-combination of `descriptors` with its kw, sorted by kw
/// ascending, ties broken by lexicographic index order. Throws kSizeLimit
/// when more than 16 descriptors are given or C(n, k) exceeds `cap`, and
/// kInvalidParameter when k is outside [1, n].
std::vector<SubsetDiversity> exhaustive_subset_kw(std::span<const IdentityDescriptor> descriptors,
                                                  int k, std::size_t cap = kDefaultSubsetCap);

}  // namespace forge
