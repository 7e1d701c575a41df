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

#ifndef FRAGANON_INFOTHEORY_HPP_
#define FRAGANON_INFOTHEORY_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "fraganon/dataset.hpp"
#include "fraganon/fragment.hpp"

namespace fraganon {

// Equal-width discretization into at most `bins` bins. Categorical columns
// keep their ordinal codes as bin ids regardless of `bins`.
std::vector<int> discretize(const std::vector<double>& column, int bins,
                            AttrKind kind = AttrKind::kNumeric);

// Shannon entropy (base 2) of the binned empirical distribution.
double entropy(const std::vector<double>& column, int bins);

// I(X;Y) = H(X) + H(Y) - H(X,Y) over the binned joint empirical
// distribution. Symmetric in its arguments bit-for-bit.
double mutual_information(const std::vector<double>& x,
                          const std::vector<double>& y, int bins);

// Pairwise mutual information over the feature attributes plus the class
// attribute. Rows are features in dataset order, class last; the diagonal
// holds attribute entropies.
struct MIMatrix {
  std::vector<int> attr_indices;       // dataset attribute index per row
  std::vector<std::string> attr_names;
  std::vector<double> values;          // dim x dim, row major
  int class_row = -1;

  int dim() const { return static_cast<int>(attr_indices.size()); }
  int feature_count() const { return dim() - 1; }
  double at(int row, int col) const { return values[row * dim() + col]; }

  int row_of_attr(int attr) const;
  // MI between two dataset attributes (either may be the class attribute).
  double between_attrs(int attr_a, int attr_b) const;
  // I(cls, attr).
  double class_relevance(int attr) const;
  // H(attr).
  double attr_entropy(int attr) const;

  void write_csv(std::ostream& out) const;
};

MIMatrix build_mi_matrix(const Dataset& dataset, int bins);

// FMRMR(F) = sum over fragments of (V_t - W_t) where V_t averages the class
// relevance of the fragment's features and W_t averages pairwise MI over all
// ordered feature pairs, diagonal included.
double fmrmr(const Fragmentation& fragmentation, const MIMatrix& mi);

// fmrmr(after adding attr to fragmentation.fragments[target]) - fmrmr(before),
// computed incrementally without touching the inputs. `attr` must not be
// assigned anywhere in `fragmentation`.
double fmrmr_contribution(int attr, int target,
                          const Fragmentation& fragmentation,
                          const MIMatrix& mi);

// Greedy binary fragment construction: the max-MI feature pair seeds the two
// fragments, remaining features join the fragment where their FMRMR
// contribution is largest. Tie-breaks: lowest attribute index, then the
// first fragment.
Fragmentation construct_fragments(const MIMatrix& mi);

// Repeatedly splits the largest fragment in two until `parts` fragments
// exist. parts == 2 is exactly construct_fragments.
Fragmentation construct_fragments_recursive(const MIMatrix& mi, int parts);

}  // namespace fraganon

#endif  // FRAGANON_INFOTHEORY_HPP_
