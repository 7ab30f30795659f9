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

#include "forge/diversity.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>

#include "forge/error.hpp"

namespace forge {
namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

double finish(std::int64_t spread_sum, std::int64_t classifiers) {
  if (classifiers == 0) return 0.0;
  const auto denominator = static_cast<double>(kDescriptorBits * classifiers * classifiers);
  return static_cast<double>(spread_sum) / denominator;
}

}  // namespace

BitMatrix::BitMatrix(std::vector<Row> rows) : rows_(std::move(rows)) {
  for (const auto& row : rows_) {
    for (auto bit : row) {
      if (bit > 1) throw Error(ErrorCode::kInvalidParameter, "bit matrix entry is not 0 or 1");
    }
  }
}

BitMatrix::BitMatrix(std::span<const IdentityDescriptor> descriptors) {
  rows_.reserve(descriptors.size());
  for (const auto& d : descriptors) rows_.push_back(d.bits());
}

BitMatrix BitMatrix::read_position_major(std::istream& in) {
  std::vector<std::vector<std::uint8_t>> positions;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::vector<std::uint8_t> bits;
    int value = 0;
    while (fields >> value) {
      if (value != 0 && value != 1) {
        throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": entry is not 0 or 1");
      }
      bits.push_back(static_cast<std::uint8_t>(value));
    }
    if (!fields.eof()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": non-numeric entry");
    }
    if (!positions.empty() && bits.size() != positions.front().size()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": ragged row");
    }
    positions.push_back(std::move(bits));
  }
  if (positions.size() != kDescriptorBits) {
    throw Error(ErrorCode::kParse, "expected 12 bit positions, got " +
                                       std::to_string(positions.size()));
  }
  std::vector<Row> rows(positions.front().size());
  for (std::size_t j = 0; j < positions.size(); ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i][j] = positions[j][i];
  }
  return BitMatrix(std::move(rows));
}

int column_count(const BitMatrix& matrix, int position) {
  if (position < 0 || position >= kDescriptorBits) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "bit position " + std::to_string(position) + " outside [0, 12)");
  }
  int count = 0;
  for (const auto& row : matrix.rows()) count += row[position];
  return count;
}

double kw_variance(const BitMatrix& matrix) {
  const auto classifiers = static_cast<std::int64_t>(matrix.classifiers());
  std::int64_t sum = 0;
  for (int j = 0; j < kDescriptorBits; ++j) {
    const std::int64_t ones = column_count(matrix, j);
    sum += ones * (classifiers - ones);
  }
  return finish(sum, classifiers);
}

double kw_variance(std::span<const IdentityDescriptor> descriptors) {
  return kw_variance(BitMatrix(descriptors));
}

double kw_variance(std::span<const IdentityDescriptor> descriptors, std::span<const int> indices) {
  std::array<std::int64_t, kDescriptorBits> ones{};
  for (int index : indices) {
    if (index < 0 || static_cast<std::size_t>(index) >= descriptors.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "descriptor index " + std::to_string(index) + " out of range");
    }
    const auto& bits = descriptors[index].bits();
    for (int j = 0; j < kDescriptorBits; ++j) ones[j] += bits[j];
  }
  const auto classifiers = static_cast<std::int64_t>(indices.size());
  std::int64_t sum = 0;
  for (auto l : ones) sum += l * (classifiers - l);
  return finish(sum, classifiers);
}

std::vector<SubsetDiversity> exhaustive_subset_kw(std::span<const IdentityDescriptor> descriptors,
                                                  int k, std::size_t cap) {
  const auto n = descriptors.size();
  if (n > kMaxEnumerableDescriptors) {
    throw Error(ErrorCode::kSizeLimit, "exhaustive enumeration accepts at most 16 descriptors, got " +
                                           std::to_string(n));
  }
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorCode::kInvalidParameter,
                "subset size " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  const auto total = binomial(n, static_cast<std::uint64_t>(k));
  if (total > cap) {
    throw Error(ErrorCode::kSizeLimit, "C(" + std::to_string(n) + ", " + std::to_string(k) +
                                           ") = " + std::to_string(total) + " exceeds cap " +
                                           std::to_string(cap));
  }

  std::vector<SubsetDiversity> out;
  out.reserve(total);
  std::vector<int> combo(k);
  for (int i = 0; i < k; ++i) combo[i] = i;
  const int top = static_cast<int>(n);
  while (true) {
    out.push_back({combo, kw_variance(descriptors, combo)});
    int i = k - 1;
    while (i >= 0 && combo[i] == top - k + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }
  // Generation order is already lexicographic, so a stable sort on kw keeps
  // ties in lexicographic order.
  std::stable_sort(out.begin(), out.end(),
                   [](const SubsetDiversity& a, const SubsetDiversity& b) { return a.kw < b.kw; });
  return out;
}

}  // namespace forge
