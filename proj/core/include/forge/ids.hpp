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

/// @file ids.hpp
/// Identity descriptors: a 12-bit architectural fingerprint of one classifier.
///
/// Bit layout, most significant layout bit first:
///
///   bit 0      machine type (1 = MLP, the only supported machine)
///   bits 1-5   hidden node count, unsigned big-endian binary
///   bits 6-8   one-hot outer activation (Linear=100, Logistic=010, Softmax=001)
///   bits 9-11  one-hot learning rate   (0.03=100, 0.02=010, 0.01=001)

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace forge {

inline constexpr int kDescriptorBits = 12;
inline constexpr int kMaxHiddenNodes = 30;

enum class MachineType : std::uint8_t { kMlp = 0 };

enum class Activation : std::uint8_t { kLinear = 0, kLogistic = 1, kSoftmax = 2 };

inline constexpr std::array<Activation, 3> kAllActivations = {
    Activation::kLinear, Activation::kLogistic, Activation::kSoftmax};

std::string_view to_string(Activation activation) noexcept;

/// Canonical learning-rate table. A spec stores an index into it.
inline constexpr std::array<double, 3> kLearningRates = {0.01, 0.02, 0.03};

struct ClassifierSpec {
  MachineType machine_type = MachineType::kMlp;
  int hidden_nodes = kMaxHiddenNodes;
  Activation activation = Activation::kLinear;
  int learning_rate_index = 0;

  double learning_rate() const { return kLearningRates.at(learning_rate_index); }

  friend bool operator==(const ClassifierSpec&, const ClassifierSpec&) = default;
};

/// Throws ErrorCode::kInvalidSpec unless hidden_nodes is in
/// [input_dim + 1, 30] and the rate index is in {0, 1, 2}.
void validate_spec(const ClassifierSpec& spec, int input_dim);

class IdentityDescriptor {
 public:
  using Bits = std::array<std::uint8_t, kDescriptorBits>;

  IdentityDescriptor() = default;

  /// Unchecked: wraps raw bits. Use decode() to validate.
  explicit IdentityDescriptor(const Bits& bits) : bits_(bits) {}

  /// Parses the 12-character '0'/'1' text form. Throws kMalformedDescriptor
  /// on wrong length or foreign characters; layout is not validated here.
  static IdentityDescriptor from_string(std::string_view text);

  const Bits& bits() const noexcept { return bits_; }
  std::uint8_t operator[](int position) const { return bits_.at(position); }

  std::string to_string() const;

  friend bool operator==(const IdentityDescriptor&, const IdentityDescriptor&) = default;
  friend auto operator<=>(const IdentityDescriptor&, const IdentityDescriptor&) = default;

 private:
  Bits bits_{};
};

/// Packs a spec into its descriptor. Rejects hidden node counts outside
/// [input_dim + 1, 30] with kInvalidSpec.
IdentityDescriptor encode(const ClassifierSpec& spec, int input_dim);

/// Inverse of encode(). Throws kMalformedDescriptor on any layout violation:
/// machine bit 0, a group that is not one-hot, or a node count outside
/// [input_dim + 1, 30].
ClassifierSpec decode(const IdentityDescriptor& descriptor, int input_dim);

/// Draws every field uniformly over its legal domain. Throws kConfig when
/// input_dim + 1 > 30.
ClassifierSpec random_spec(std::mt19937_64& rng, int input_dim);

}  // namespace forge
