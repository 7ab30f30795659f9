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

/// @file mlp.hpp
/// Single-hidden-layer perceptron with a tanh hidden layer, two output
/// units and a selectable outer activation, trained by full-batch gradient
/// descent on the mean sum-of-squares loss.

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "forge/data.hpp"
#include "forge/ids.hpp"

namespace forge {

inline constexpr int kOutputs = 2;
inline constexpr int kDefaultEpochs = 200;

/// Trainable parameters. Matrices are row-major: first_weights is
/// hidden x input, second_weights is kOutputs x hidden. A gradient uses the
/// same shape.
struct MlpWeights {
  std::vector<double> first_weights;
  std::vector<double> first_biases;
  std::vector<double> second_weights;
  std::vector<double> second_biases;

  static MlpWeights zeros(int input_dim, int hidden_dim);

  /// Flat views over all four blocks, in declaration order.
  std::array<std::span<double>, 4> blocks();
  std::array<std::span<const double>, 4> blocks() const;

  friend bool operator==(const MlpWeights&, const MlpWeights&) = default;
};

struct MlpNetwork {
  int input_dim = 0;
  int hidden_dim = 0;
  Activation outer_activation = Activation::kLinear;
  double learning_rate = 0.01;
  MlpWeights weights;

  /// All-zero network of the given shape.
  static MlpNetwork zeros(int input_dim, int hidden_dim, Activation outer, double learning_rate);

  friend bool operator==(const MlpNetwork&, const MlpNetwork&) = default;
};

using Output = std::array<double, kOutputs>;

/// Throws kDimensionMismatch when input.size() != input_dim.
Output forward(const MlpNetwork& network, std::span<const double> input);

/// Mean over samples of sum_k (y_k - t_k)^2, t the one-hot label.
double mean_squared_loss(const MlpNetwork& network, const Dataset& batch);

/// Exact gradient of mean_squared_loss with respect to every parameter.
/// Throws kEmptySplit on an empty batch, kDimensionMismatch on shape errors.
MlpWeights loss_gradient(const MlpNetwork& network, const Dataset& batch);

struct TrainResult {
  MlpNetwork network;
  /// Set when the training split carries a single class. Training still runs.
  bool single_class = false;
};

/// Initializes each layer uniformly in +-1/sqrt(fan_in) (draw order: first
/// weights, first biases, second weights, second biases, all row-major),
/// then runs `epochs` steps of full-batch gradient descent with the spec's
/// learning rate. Throws kInvalidParameter when epochs < 1.
TrainResult train(const ClassifierSpec& spec, const Dataset& train_split, std::mt19937_64& rng,
                  int epochs = kDefaultEpochs);

/// Argmax over the two outputs; exact ties go to 0.
int predict_label(const Output& output) noexcept;
int predict_label(const MlpNetwork& network, std::span<const double> input);

/// Fraction of samples whose predicted label differs from the true label.
/// For hard 0/1 predictions this equals the mean squared error.
double classification_error(const MlpNetwork& network, const Dataset& split);

struct TrainedClassifier {
  ClassifierSpec spec;
  IdentityDescriptor descriptor;
  MlpNetwork network;
  double validation_error = 0.0;

  friend bool operator==(const TrainedClassifier&, const TrainedClassifier&) = default;
};

}  // namespace forge
