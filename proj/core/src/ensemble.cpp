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

#include "forge/ensemble.hpp"

#include "forge/diversity.hpp"
#include "forge/error.hpp"
#include "forge/mlp.hpp"

namespace forge {
namespace {

void check_selection(const EnsembleSelection& selection, const Pool& pool) {
  if (selection.size() == 0) throw Error(ErrorCode::kInvalidSelection, "empty selection");
  for (int i : selection.indices()) {
    if (i < 0 || static_cast<std::size_t>(i) >= pool.size()) {
      throw Error(ErrorCode::kInvalidSelection,
                  "index " + std::to_string(i) + " outside pool of " + std::to_string(pool.size()));
    }
  }
}

}  // namespace

VoteRecord majority_vote(std::span<const int> labels) {
  if (labels.size() % 2 == 0) {
    throw Error(ErrorCode::kEvenEnsemble, "majority vote over " + std::to_string(labels.size()) +
                                              " labels; an odd count is required");
  }
  VoteRecord record;
  record.labels.assign(labels.begin(), labels.end());
  int ones = 0;
  for (int label : labels) {
    if (label != 0 && label != 1) {
      throw Error(ErrorCode::kNonBinaryLabel, "vote label " + std::to_string(label));
    }
    ones += label;
  }
  const int zeros = static_cast<int>(labels.size()) - ones;
  record.winner = ones > zeros ? 1 : 0;
  record.margin = ones > zeros ? ones - zeros : zeros - ones;
  return record;
}

double ensemble_error(const EnsembleSelection& selection, const Pool& pool, const Dataset& split) {
  check_selection(selection, pool);
  if (split.empty()) throw Error(ErrorCode::kEmptySplit, "cannot score an empty split");
  std::vector<int> votes(selection.size());
  std::size_t wrong = 0;
  for (std::size_t n = 0; n < split.size(); ++n) {
    const auto x = split.row(n);
    for (std::size_t m = 0; m < selection.size(); ++m) {
      votes[m] = predict_label(pool[selection.indices()[m]].network, x);
    }
    if (majority_vote(votes).winner != split.label(n)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(split.size());
}

EvaluationRow evaluate_selection(const EnsembleSelection& selection, const Pool& pool,
                                 const DatasetBundle& bundle) {
  check_selection(selection, pool);
  EvaluationRow row;
  row.achieved_kw = kw_variance(pool.descriptors(), selection.indices());
  row.validation_error = ensemble_error(selection, pool, bundle.validation);
  row.test_error = ensemble_error(selection, pool, bundle.test);
  for (int i : selection.indices()) {
    row.descriptors.push_back(pool[i].descriptor.to_string());
    row.member_validation_errors.push_back(pool[i].validation_error);
  }
  return row;
}

}  // namespace forge
