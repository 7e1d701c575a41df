//
// Copyright 2026 The Fraganon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef FRAGANON_METRICS_HPP_
#define FRAGANON_METRICS_HPP_

#include <span>
#include <utility>
#include <vector>

#include "fraganon/dataset.hpp"
#include "fraganon/mondrian.hpp"

namespace fraganon {

// Normalized average generalization width per cell over every feature
// attribute of every fragment. `attribute_ranges` holds the original-data
// (min, max) per schema attribute index; attributes with a degenerate range
// contribute 0.
double information_loss(
    const std::vector<AnonymizedFragment>& fragments,
    const std::vector<std::pair<double, double>>& attribute_ranges);

struct Prediction {
  double label = 0.0;
  double score = 0.0;  // fraction of neighbors voting for label
};

// k-NN over the anonymized fragment. Equivalence classes expand to one
// training point per tuple at the box midpoint (per listed value under
// EC-level publishing); distances are Euclidean over min-max normalized
// dimensions. Fewer training tuples than `neighbors` uses all of them.
Prediction knn_predict(const AnonymizedFragment& train,
                       std::span<const double> test_row, int neighbors);

// Score-weighted vote across per-fragment k-NN classifiers. `full_row` is
// indexed by original schema attribute; each fragment reads its own columns.
double ensemble_predict(const std::vector<AnonymizedFragment>& fragments,
                        std::span<const double> full_row, int neighbors);

// One-vs-rest F1 per class from ensemble predictions over `test`, averaged
// with weights equal to the class frequencies in the test data.
double weighted_f_measure(const std::vector<AnonymizedFragment>& fragments,
                          const Dataset& test, int neighbors);

// Tuple-level class values changed plus EC-level class values removed
// between two runs of the same fragmentation.
long distortion_count(const std::vector<AnonymizedFragment>& before,
                      const std::vector<AnonymizedFragment>& after);

}  // namespace fraganon

#endif  // FRAGANON_METRICS_HPP_
