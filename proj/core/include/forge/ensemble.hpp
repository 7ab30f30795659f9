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

#include <span>
#include <string>
#include <vector>

#include "forge/data.hpp"
#include "forge/ga.hpp"
#include "forge/pool.hpp"

namespace forge {

struct VoteRecord {
  std::vector<int> labels;
  int winner = 0;
  /// Votes for the winner minus votes against it.
  int margin = 0;
};

/// Hard-label majority vote. Throws kEvenEnsemble for an even (or empty)
/// label list and kNonBinaryLabel for labels other than 0 and 1.
VoteRecord majority_vote(std::span<const int> labels);

/// Misclassification rate of the majority-voted labels over `split`.
double ensemble_error(const EnsembleSelection& selection, const Pool& pool, const Dataset& split);

struct EvaluationRow {
  double achieved_kw = 0.0;
  double validation_error = 0.0;
  double test_error = 0.0;
  std::vector<std::string> descriptors;
  std::vector<double> member_validation_errors;
};

EvaluationRow evaluate_selection(const EnsembleSelection& selection, const Pool& pool,
                                 const DatasetBundle& bundle);

}  // namespace forge
