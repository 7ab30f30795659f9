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

#include "forge/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "forge/error.hpp"

namespace forge {
namespace {

void check_input(const MlpNetwork& network, std::size_t size) {
  if (size != static_cast<std::size_t>(network.input_dim)) {
    throw Error(ErrorCode::kDimensionMismatch, "network expects " +
                                                   std::to_string(network.input_dim) +
                                                   " inputs, got " + std::to_string(size));
  }
}

void check_batch(const MlpNetwork& network, const Dataset& batch) {
  if (batch.empty()) throw Error(ErrorCode::kEmptySplit, "batch has no samples");
  check_input(network, batch.dim());
}

void apply_outer(Activation activation, Output& z) {
  switch (activation) {
    case Activation::kLinear:
      break;
    case Activation::kLogistic:
      for (auto& v : z) v = 1.0 / (1.0 + std::exp(-v));
      break;
    case Activation::kSoftmax: {
      const double top = std::max(z[0], z[1]);
      double total = 0.0;
      for (auto& v : z) {
        v = std::exp(v - top);
        total += v;
      }
      for (auto& v : z) v /= total;
      break;
    }
  }
}

// Forward pass that keeps the hidden activations for backpropagation.
Output forward_into(const MlpNetwork& net, std::span<const double> x, std::vector<double>& hidden) {
  const auto& w = net.weights;
  const auto d = static_cast<std::size_t>(net.input_dim);
  hidden.resize(net.hidden_dim);
  for (int j = 0; j < net.hidden_dim; ++j) {
    double sum = w.first_biases[j];
    const double* row = w.first_weights.data() + j * d;
    for (std::size_t i = 0; i < d; ++i) sum += row[i] * x[i];
    hidden[j] = std::tanh(sum);
  }
  Output z{};
  for (int k = 0; k < kOutputs; ++k) {
    double sum = w.second_biases[k];
    const double* row = w.second_weights.data() + k * net.hidden_dim;
    for (int j = 0; j < net.hidden_dim; ++j) sum += row[j] * hidden[j];
    z[k] = sum;
  }
  apply_outer(net.outer_activation, z);
  return z;
}

}  // namespace

MlpWeights MlpWeights::zeros(int input_dim, int hidden_dim) {
  MlpWeights w;
  w.first_weights.assign(static_cast<std::size_t>(hidden_dim) * input_dim, 0.0);
  w.first_biases.assign(hidden_dim, 0.0);
  w.second_weights.assign(static_cast<std::size_t>(kOutputs) * hidden_dim, 0.0);
  w.second_biases.assign(kOutputs, 0.0);
  return w;
}

std::array<std::span<double>, 4> MlpWeights::blocks() {
  return {first_weights, first_biases, second_weights, second_biases};
}

std::array<std::span<const double>, 4> MlpWeights::blocks() const {
  return {first_weights, first_biases, second_weights, second_biases};
}

MlpNetwork MlpNetwork::zeros(int input_dim, int hidden_dim, Activation outer,
                             double learning_rate) {
  MlpNetwork net;
  net.input_dim = input_dim;
  net.hidden_dim = hidden_dim;
  net.outer_activation = outer;
  net.learning_rate = learning_rate;
  net.weights = MlpWeights::zeros(input_dim, hidden_dim);
  return net;
}

Output forward(const MlpNetwork& network, std::span<const double> input) {
  check_input(network, input.size());
  std::vector<double> hidden;
  return forward_into(network, input, hidden);
}

double mean_squared_loss(const MlpNetwork& network, const Dataset& batch) {
  check_batch(network, batch);
  std::vector<double> hidden;
  double total = 0.0;
  for (std::size_t n = 0; n < batch.size(); ++n) {
    const auto y = forward_into(network, batch.row(n), hidden);
    for (int k = 0; k < kOutputs; ++k) {
      const double t = batch.label(n) == k ? 1.0 : 0.0;
      total += (y[k] - t) * (y[k] - t);
    }
  }
  return total / static_cast<double>(batch.size());
}

MlpWeights loss_gradient(const MlpNetwork& network, const Dataset& batch) {
  check_batch(network, batch);
  const auto& w = network.weights;
  const auto d = static_cast<std::size_t>(network.input_dim);
  const int m = network.hidden_dim;
  const double scale = 2.0 / static_cast<double>(batch.size());

  MlpWeights grad = MlpWeights::zeros(network.input_dim, m);
  std::vector<double> hidden;
  std::vector<double> hidden_delta(m);
  for (std::size_t n = 0; n < batch.size(); ++n) {
    const auto x = batch.row(n);
    const auto y = forward_into(network, x, hidden);

    Output dy{};
    for (int k = 0; k < kOutputs; ++k) {
      const double t = batch.label(n) == k ? 1.0 : 0.0;
      dy[k] = scale * (y[k] - t);
    }
    Output dz{};
    switch (network.outer_activation) {
      case Activation::kLinear:
        dz = dy;
        break;
      case Activation::kLogistic:
        for (int k = 0; k < kOutputs; ++k) dz[k] = dy[k] * y[k] * (1.0 - y[k]);
        break;
      case Activation::kSoftmax: {
        const double dot = dy[0] * y[0] + dy[1] * y[1];
        for (int k = 0; k < kOutputs; ++k) dz[k] = y[k] * (dy[k] - dot);
        break;
      }
    }

    for (int j = 0; j < m; ++j) hidden_delta[j] = 0.0;
    for (int k = 0; k < kOutputs; ++k) {
      grad.second_biases[k] += dz[k];
      double* g_row = grad.second_weights.data() + k * m;
      const double* w_row = w.second_weights.data() + k * m;
      for (int j = 0; j < m; ++j) {
        g_row[j] += dz[k] * hidden[j];
        hidden_delta[j] += dz[k] * w_row[j];
      }
    }
    for (int j = 0; j < m; ++j) {
      const double delta = hidden_delta[j] * (1.0 - hidden[j] * hidden[j]);
      grad.first_biases[j] += delta;
      double* g_row = grad.first_weights.data() + j * d;
      for (std::size_t i = 0; i < d; ++i) g_row[i] += delta * x[i];
    }
  }
  return grad;
}

TrainResult train(const ClassifierSpec& spec, const Dataset& train_split, std::mt19937_64& rng,
                  int epochs) {
  if (epochs < 1) {
    throw Error(ErrorCode::kInvalidParameter,
                "epochs must be at least 1, got " + std::to_string(epochs));
  }
  if (train_split.empty()) throw Error(ErrorCode::kEmptySplit, "training split has no samples");
  const int d = static_cast<int>(train_split.dim());
  validate_spec(spec, d);

  TrainResult result;
  auto& net = result.network;
  net = MlpNetwork::zeros(d, spec.hidden_nodes, spec.activation, spec.learning_rate());

  const double first_bound = 1.0 / std::sqrt(static_cast<double>(d));
  const double second_bound = 1.0 / std::sqrt(static_cast<double>(spec.hidden_nodes));
  std::uniform_real_distribution<double> first(-first_bound, first_bound);
  std::uniform_real_distribution<double> second(-second_bound, second_bound);
  for (auto& v : net.weights.first_weights) v = first(rng);
  for (auto& v : net.weights.first_biases) v = first(rng);
  for (auto& v : net.weights.second_weights) v = second(rng);
  for (auto& v : net.weights.second_biases) v = second(rng);

  const auto positives = train_split.positives();
  result.single_class = positives == 0 || positives == train_split.size();

  for (int epoch = 0; epoch < epochs; ++epoch) {
    const auto grad = loss_gradient(net, train_split);
    auto params = net.weights.blocks();
    const auto steps = grad.blocks();
    for (std::size_t b = 0; b < params.size(); ++b) {
      for (std::size_t i = 0; i < params[b].size(); ++i) {
        params[b][i] -= net.learning_rate * steps[b][i];
      }
    }
  }
  return result;
}

int predict_label(const Output& output) noexcept { return output[1] > output[0] ? 1 : 0; }

int predict_label(const MlpNetwork& network, std::span<const double> input) {
  return predict_label(forward(network, input));
}

double classification_error(const MlpNetwork& network, const Dataset& split) {
  if (split.empty()) throw Error(ErrorCode::kEmptySplit, "cannot score an empty split");
  check_input(network, split.dim());
  std::vector<double> hidden;
  std::size_t wrong = 0;
  for (std::size_t n = 0; n < split.size(); ++n) {
    if (predict_label(forward_into(network, split.row(n), hidden)) != split.label(n)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(split.size());
}

}  // namespace forge
