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

#ifndef FRAGANON_LDIVERSITY_HPP_
#define FRAGANON_LDIVERSITY_HPP_

#include <random>
#include <set>
#include <vector>

#include "fraganon/dataset.hpp"
#include "fraganon/mondrian.hpp"
#include "fraganon/reconstruct.hpp"

namespace fraganon {

// Horizontal cluster of rows produced by top-down segmentation.
struct Segment {
  std::vector<int> row_ids;
  int diversity_level = 0;  // distinct class values among member rows
  std::set<double> class_values;
};

// Top-down binary segmentation. Each split cuts one attribute at its median,
// chosen to maximize the weighted Gini impurity reduction of the class
// variable; a split is rejected if either side would drop below k rows or
// below l distinct class values.
std::vector<Segment> segment(const Dataset& dataset, int k, int l);

// Fragmentation-based l-diversity: computes the fragmentation, segments the
// rows, anonymizes every (segment x fragment) chunk with the segment's own
// diversity level and full class support, then merges the chunks of each
// fragment into one published fragment with the class order shuffled.
std::vector<AnonymizedFragment> ldiverse_pipeline(const Dataset& dataset,
                                                  int k, int l, int bins,
                                                  std::mt19937_64& rng);

// The equivalence classes one segment contributed to one published fragment.
struct ChunkView {
  int fragment = -1;
  int segment = -1;
  std::vector<int> eq_indices;  // positions inside the published fragment
};

// Groups every published equivalence class by (fragment, segment).
std::vector<ChunkView> collect_chunks(
    const std::vector<AnonymizedFragment>& fragments);

// Verdict for joining two anonymized chunks of the same segment: every cross
// pair of equivalence classes must join into >= k tuples carrying exactly
// the segment's diversity level of distinct class values. The diversity
// level is read off the chunks themselves and must agree across all their
// equivalence classes.
std::vector<Violation> verify_ldiv_join(
    const std::vector<AnonymizedFragment>& fragments, const ChunkView& a,
    const ChunkView& b, int k);

}  // namespace fraganon

#endif  // FRAGANON_LDIVERSITY_HPP_
