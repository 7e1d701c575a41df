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

#ifndef FRAGANON_FRAGMENT_HPP_
#define FRAGANON_FRAGMENT_HPP_

#include <vector>

namespace fraganon {

// Closed interval a generalized cell covers. Point values have lower == upper.
struct GeneralizedValue {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  double midpoint() const { return lower + (upper - lower) / 2.0; }
  bool is_point() const { return lower == upper; }
  bool contains(double v) const { return lower <= v && v <= upper; }
};

// One vertical fragment: a set of feature attribute indices. The class
// attribute is implicitly attached to every fragment and never listed here.
struct Fragment {
  std::vector<int> feature_indices;
  bool includes_class = true;
};

// Disjoint cover of the feature attributes.
struct Fragmentation {
  std::vector<Fragment> fragments;
};

// Throws PreconditionError unless the fragments are non-empty, pairwise
// disjoint, and together cover exactly `feature_attrs`.
void validate_fragmentation(const Fragmentation& fragmentation,
                            const std::vector<int>& feature_attrs);

}  // namespace fraganon

#endif  // FRAGANON_FRAGMENT_HPP_
