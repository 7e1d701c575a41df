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

#ifndef FRAGANON_MONDRIAN_HPP_
#define FRAGANON_MONDRIAN_HPP_

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fraganon/dataset.hpp"
#include "fraganon/fragment.hpp"

namespace fraganon {

enum class PublishMode { kTupleLevel, kEcLevel };

// Maximal group of anonymized records sharing one generalized QI box.
//
// class_counts always carries per-value frequencies. Under tuple-level
// publishing they are the published multiset; under EC-level publishing the
// key set is the published class-value set and the counts are the
// pre-conversion frequencies kept for enforcement ordering.
struct EquivalenceClass {
  std::vector<GeneralizedValue> qi_box;  // one entry per fragment feature
  std::map<double, int> class_counts;
  PublishMode publish_mode = PublishMode::kTupleLevel;
  std::vector<int> row_ids;  // sorted source row indices
  int segment_id = -1;       // provenance for the l-diversity pipeline

  int size() const { return static_cast<int>(row_ids.size()); }
  int distinct_classes() const { return static_cast<int>(class_counts.size()); }
  int ambiguous_slots() const { return size() - distinct_classes(); }
  std::set<double> class_values() const;
};

// One anonymized vertical fragment: a partition of all rows into
// equivalence classes of size >= k.
struct AnonymizedFragment {
  Fragment fragment;  // original-schema feature indices
  int k = 0;
  std::vector<EquivalenceClass> classes;

  std::vector<std::string> feature_names;
  std::vector<std::pair<double, double>> feature_ranges;  // pre-anonymization
  ClassDomain class_domain;

  std::size_t row_total() const;
};

// Recursive median Mondrian. Splits always cut the widest normalized
// dimension; rows equal to the median go left; a cut leaving either side
// below k rows is rejected and the partition becomes an equivalence class
// whose box is the tight envelope of its member values.
//
// `row_ids`, when given, supplies the source row index of each data row
// (defaults to 0..n-1).
AnonymizedFragment mondrian_k_anonymize(
    const Dataset& data, int k,
    const std::vector<int>* row_ids = nullptr);

// Mondrian with the distinct l-diversity split guard: both sides must keep
// >= k rows and >= l distinct class values. When `required_support` is set,
// the guard instead demands that both sides retain every listed class value.
AnonymizedFragment mondrian_l_diverse(
    const Dataset& data, int k, int l,
    const std::vector<int>* row_ids = nullptr,
    const std::set<double>* required_support = nullptr);

// Anonymized fragment export: one row per tuple, feature cells as
// `lower..upper` (bare value when degenerate). Tuple-level classes are
// expanded by frequency; EC-level rows list each class value once and leave
// ambiguous slots empty. The segment column is for debugging only and never
// belongs in a published table.
void write_fragment_csv(const AnonymizedFragment& fragment, std::ostream& out,
                        bool debug_segment_column = false);

}  // namespace fraganon

#endif  // FRAGANON_MONDRIAN_HPP_
