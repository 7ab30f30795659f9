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

#include "forge/ids.hpp"

#include <string>

#include "forge/error.hpp"

namespace forge {
namespace {

constexpr int kMachineBit = 0;
constexpr int kHiddenFirst = 1;
constexpr int kHiddenWidth = 5;
constexpr int kActivationFirst = 6;
constexpr int kRateFirst = 9;

// Learning-rate one-hot slots run from the largest rate to the smallest:
// 100 = 0.03, 010 = 0.02, 001 = 0.01.
int rate_slot(int rate_index) { return 2 - rate_index; }

void check_input_dim(int input_dim) {
  if (input_dim < 1 || input_dim + 1 > kMaxHiddenNodes) {
    throw Error(ErrorCode::kConfig,
                "input dimension " + std::to_string(input_dim) +
                    " leaves no legal hidden node count (need 1 <= d and d + 1 <= 30)");
  }
}

// Position of the single set bit in a 3-bit group, or -1 when not one-hot.
int one_hot_slot(const IdentityDescriptor::Bits& bits, int first) {
  int slot = -1;
  for (int i = 0; i < 3; ++i) {
    if (bits[first + i] > 1) return -1;
    if (bits[first + i] == 1) {
      if (slot != -1) return -1;
      slot = i;
    }
  }
  return slot;
}

}  // namespace

std::string_view to_string(Activation activation) noexcept {
  switch (activation) {
    case Activation::kLinear: return "linear";
    case Activation::kLogistic: return "logistic";
    case Activation::kSoftmax: return "softmax";
  }
  return "unknown";
}

void validate_spec(const ClassifierSpec& spec, int input_dim) {
  check_input_dim(input_dim);
  if (spec.hidden_nodes < input_dim + 1 || spec.hidden_nodes > kMaxHiddenNodes) {
    throw Error(ErrorCode::kInvalidSpec,
                "hidden node count " + std::to_string(spec.hidden_nodes) + " outside [" +
                    std::to_string(input_dim + 1) + ", 30]");
  }
  if (spec.learning_rate_index < 0 ||
      spec.learning_rate_index >= static_cast<int>(kLearningRates.size())) {
    throw Error(ErrorCode::kInvalidSpec,
                "learning rate index " + std::to_string(spec.learning_rate_index) +
                    " outside {0, 1, 2}");
  }
  const auto activation = static_cast<int>(spec.activation);
  if (activation < 0 || activation > 2) {
    throw Error(ErrorCode::kInvalidSpec, "unknown activation tag");
  }
  if (spec.machine_type != MachineType::kMlp) {
    throw Error(ErrorCode::kInvalidSpec, "unknown machine type");
  }
}

IdentityDescriptor IdentityDescriptor::from_string(std::string_view text) {
  if (text.size() != kDescriptorBits) {
    throw Error(ErrorCode::kMalformedDescriptor,
                "descriptor text must have 12 characters, got " + std::to_string(text.size()));
  }
  Bits bits{};
  for (int i = 0; i < kDescriptorBits; ++i) {
    if (text[i] != '0' && text[i] != '1') {
      throw Error(ErrorCode::kMalformedDescriptor,
                  "descriptor text contains '" + std::string(1, text[i]) + "'");
    }
    bits[i] = static_cast<std::uint8_t>(text[i] - '0');
  }
  return IdentityDescriptor(bits);
}

std::string IdentityDescriptor::to_string() const {
  std::string out(kDescriptorBits, '0');
  for (int i = 0; i < kDescriptorBits; ++i) {
    if (bits_[i] != 0) out[i] = '1';
  }
  return out;
}

IdentityDescriptor encode(const ClassifierSpec& spec, int input_dim) {
  validate_spec(spec, input_dim);
  IdentityDescriptor::Bits bits{};
  bits[kMachineBit] = 1;
  for (int i = 0; i < kHiddenWidth; ++i) {
    const int shift = kHiddenWidth - 1 - i;
    bits[kHiddenFirst + i] = static_cast<std::uint8_t>((spec.hidden_nodes >> shift) & 1);
  }
  bits[kActivationFirst + static_cast<int>(spec.activation)] = 1;
  bits[kRateFirst + rate_slot(spec.learning_rate_index)] = 1;
  return IdentityDescriptor(bits);
}

ClassifierSpec decode(const IdentityDescriptor& descriptor, int input_dim) {
  check_input_dim(input_dim);
  const auto& bits = descriptor.bits();
  const auto malformed = [&](const std::string& why) {
    return Error(ErrorCode::kMalformedDescriptor,
                 "descriptor " + descriptor.to_string() + ": " + why);
  };
  if (bits[kMachineBit] != 1) throw malformed("machine-type bit must be 1");

  int hidden = 0;
  for (int i = 0; i < kHiddenWidth; ++i) {
    if (bits[kHiddenFirst + i] > 1) throw malformed("non-binary hidden node bit");
    hidden = (hidden << 1) | bits[kHiddenFirst + i];
  }
  if (hidden < input_dim + 1 || hidden > kMaxHiddenNodes) {
    throw malformed("hidden node count " + std::to_string(hidden) + " outside [" +
                    std::to_string(input_dim + 1) + ", 30]");
  }
  const int activation_slot = one_hot_slot(bits, kActivationFirst);
  if (activation_slot < 0) throw malformed("activation group is not one-hot");
  const int rate = one_hot_slot(bits, kRateFirst);
  if (rate < 0) throw malformed("learning-rate group is not one-hot");

  ClassifierSpec spec;
  spec.machine_type = MachineType::kMlp;
  spec.hidden_nodes = hidden;
  spec.activation = static_cast<Activation>(activation_slot);
  spec.learning_rate_index = rate_slot(rate);
  return spec;
}

ClassifierSpec random_spec(std::mt19937_64& rng, int input_dim) {
  check_input_dim(input_dim);
  std::uniform_int_distribution<int> hidden(input_dim + 1, kMaxHiddenNodes);
  std::uniform_int_distribution<int> three(0, 2);
  ClassifierSpec spec;
  spec.hidden_nodes = hidden(rng);
  spec.activation = static_cast<Activation>(three(rng));
  spec.learning_rate_index = three(rng);
  return spec;
}

}  // namespace forge
