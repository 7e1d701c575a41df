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

#include "fraganon/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace fraganon {

namespace {

// H(counts) = log2(n) - (1/n) * sum c*log2(c). Counts are sorted first so
// the result is bit-identical for any permutation of the same multiset,
// which makes mutual_information exactly symmetric.
double entropy_of_counts(std::vector<long> counts) {
  long total = 0;
  for (long c : counts) total += c;
  if (total <= 0) throw PreconditionError("entropy of an empty distribution");
  std::sort(counts.begin(), counts.end());
  double acc = 0.0;
  for (long c : counts) {
    if (c > 0) acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
  }
  double n = static_cast<double>(total);
  double h = std::log2(n) - acc / n;
  return h < 0.0 ? 0.0 : h;
}

std::vector<long> marginal_counts(const std::vector<int>& ids, int n_bins) {
  std::vector<long> counts(static_cast<std::size_t>(n_bins), 0);
  for (int id : ids) ++counts[static_cast<std::size_t>(id)];
  return counts;
}

int bin_count(const std::vector<int>& ids) {
  int max_id = 0;
  for (int id : ids) max_id = std::max(max_id, id);
  return max_id + 1;
}

double mi_from_ids(const std::vector<int>& x, int nx, const std::vector<int>& y,
                   int ny) {
  if (x.size() != y.size()) {
    throw PreconditionError("mutual information inputs differ in length");
  }
  std::vector<long> joint(static_cast<std::size_t>(nx) * ny, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++joint[static_cast<std::size_t>(x[i]) * ny + y[i]];
  }
  std::vector<long> joint_nonzero;
  joint_nonzero.reserve(joint.size());
  for (long c : joint) {
    if (c > 0) joint_nonzero.push_back(c);
  }
  double hx = entropy_of_counts(marginal_counts(x, nx));
  double hy = entropy_of_counts(marginal_counts(y, ny));
  double hxy = entropy_of_counts(std::move(joint_nonzero));
  double mi = hx + hy - hxy;
  return mi < 0.0 ? 0.0 : mi;
}

}  // namespace

std::vector<int> discretize(const std::vector<double>& column, int bins,
                            AttrKind kind) {
  if (column.empty()) throw PreconditionError("discretize of an empty column");
  if (bins < 1) throw PreconditionError("bins must be positive");
  std::vector<int> ids(column.size());
  if (kind == AttrKind::kCategorical) {
    for (std::size_t i = 0; i < column.size(); ++i) {
      ids[i] = static_cast<int>(column[i]);
      if (ids[i] < 0 || static_cast<double>(ids[i]) != column[i]) {
        throw PreconditionError("categorical column holds a non-code value: " +
                                format_number(column[i]));
      }
    }
    return ids;
  }
  auto [lo_it, hi_it] = std::minmax_element(column.begin(), column.end());
  double lo = *lo_it;
  double width = (*hi_it - lo) / static_cast<double>(bins);
  if (width <= 0.0) return ids;  // constant column: a single bin
  for (std::size_t i = 0; i < column.size(); ++i) {
    int id = static_cast<int>((column[i] - lo) / width);
    ids[i] = std::clamp(id, 0, bins - 1);
  }
  return ids;
}

double entropy(const std::vector<double>& column, int bins) {
  auto ids = discretize(column, bins, AttrKind::kNumeric);
  return entropy_of_counts(marginal_counts(ids, bin_count(ids)));
}

double mutual_information(const std::vector<double>& x,
                          const std::vector<double>& y, int bins) {
  auto xi = discretize(x, bins, AttrKind::kNumeric);
  auto yi = discretize(y, bins, AttrKind::kNumeric);
  return mi_from_ids(xi, bin_count(xi), yi, bin_count(yi));
}

int MIMatrix::row_of_attr(int attr) const {
  for (int r = 0; r < dim(); ++r) {
    if (attr_indices[static_cast<std::size_t>(r)] == attr) return r;
  }
  throw PreconditionError("attribute " + std::to_string(attr) +
                          " is not part of the MI matrix");
}

double MIMatrix::between_attrs(int attr_a, int attr_b) const {
  return at(row_of_attr(attr_a), row_of_attr(attr_b));
}

double MIMatrix::class_relevance(int attr) const {
  return at(class_row, row_of_attr(attr));
}

double MIMatrix::attr_entropy(int attr) const {
  int r = row_of_attr(attr);
  return at(r, r);
}

void MIMatrix::write_csv(std::ostream& out) const {
  out << "attribute";
  for (const auto& name : attr_names) out << ',' << name;
  out << '\n';
  for (int r = 0; r < dim(); ++r) {
    out << attr_names[static_cast<std::size_t>(r)];
    for (int c = 0; c < dim(); ++c) out << ',' << format_number(at(r, c));
    out << '\n';
  }
}

MIMatrix build_mi_matrix(const Dataset& dataset, int bins) {
  auto features = dataset.feature_indices();
  if (features.empty()) {
    throw PreconditionError("dataset has no feature attributes");
  }
  MIMatrix mi;
  mi.attr_indices = features;
  mi.attr_indices.push_back(dataset.class_index());
  for (int attr : mi.attr_indices) {
    mi.attr_names.push_back(dataset.schema()[static_cast<std::size_t>(attr)].name);
  }
  int dim = static_cast<int>(mi.attr_indices.size());
  mi.class_row = dim - 1;
  mi.values.assign(static_cast<std::size_t>(dim) * dim, 0.0);

  std::vector<std::vector<int>> ids;
  std::vector<int> nbins;
  ids.reserve(mi.attr_indices.size());
  for (int attr : mi.attr_indices) {
    const auto& s = dataset.schema()[static_cast<std::size_t>(attr)];
    ids.push_back(discretize(dataset.column(attr), bins, s.kind));
    nbins.push_back(bin_count(ids.back()));
  }
  for (int r = 0; r < dim; ++r) {
    for (int c = r; c < dim; ++c) {
      double v = mi_from_ids(ids[static_cast<std::size_t>(r)],
                             nbins[static_cast<std::size_t>(r)],
                             ids[static_cast<std::size_t>(c)],
                             nbins[static_cast<std::size_t>(c)]);
      mi.values[static_cast<std::size_t>(r) * dim + c] = v;
      mi.values[static_cast<std::size_t>(c) * dim + r] = v;
    }
  }
  return mi;
}

namespace {

// V_t - W_t for one fragment, or 0 for an empty member list.
double mrmr_term(const std::vector<int>& members, const MIMatrix& mi) {
  if (members.empty()) return 0.0;
  double size = static_cast<double>(members.size());
  double relevance = 0.0;
  for (int attr : members) relevance += mi.class_relevance(attr);
  double redundancy = 0.0;
  for (int a : members) {
    for (int b : members) redundancy += mi.between_attrs(a, b);
  }
  return relevance / size - redundancy / (size * size);
}

}  // namespace

double fmrmr(const Fragmentation& fragmentation, const MIMatrix& mi) {
  double total = 0.0;
  for (const auto& fragment : fragmentation.fragments) {
    if (fragment.feature_indices.empty()) {
      throw PreconditionError("fmrmr over an empty fragment");
    }
    total += mrmr_term(fragment.feature_indices, mi);
  }
  return total;
}

double fmrmr_contribution(int attr, int target,
                          const Fragmentation& fragmentation,
                          const MIMatrix& mi) {
  if (target < 0 ||
      target >= static_cast<int>(fragmentation.fragments.size())) {
    throw PreconditionError("target fragment index out of range");
  }
  for (const auto& fragment : fragmentation.fragments) {
    if (std::find(fragment.feature_indices.begin(),
                  fragment.feature_indices.end(),
                  attr) != fragment.feature_indices.end()) {
      throw PreconditionError("attribute " + std::to_string(attr) +
                              " is already assigned");
    }
  }
  const auto& members =
      fragmentation.fragments[static_cast<std::size_t>(target)].feature_indices;
  std::vector<int> extended = members;
  extended.push_back(attr);
  return mrmr_term(extended, mi) - mrmr_term(members, mi);
}

namespace {

// Greedy split of `attrs` (matrix attribute ids) into two fragments.
std::pair<std::vector<int>, std::vector<int>> greedy_binary_split(
    const MIMatrix& mi, const std::vector<int>& attrs) {
  if (attrs.size() < 2) {
    throw PreconditionError("fragment construction needs at least 2 features");
  }
  // Seeds: the lexicographically smallest argmax-MI feature pair.
  int seed1 = -1, seed2 = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    for (std::size_t j = i + 1; j < attrs.size(); ++j) {
      double v = mi.between_attrs(attrs[i], attrs[j]);
      if (v > best) {
        best = v;
        seed1 = attrs[i];
        seed2 = attrs[j];
      }
    }
  }

  Fragmentation partial;
  partial.fragments.resize(2);
  partial.fragments[0].feature_indices.push_back(seed1);
  partial.fragments[1].feature_indices.push_back(seed2);
  std::vector<int> unassigned;
  for (int attr : attrs) {
    if (attr != seed1 && attr != seed2) unassigned.push_back(attr);
  }
  std::sort(unassigned.begin(), unassigned.end());

  while (!unassigned.empty()) {
    int best_attr = -1, best_fragment = -1;
    double max_contribution = -std::numeric_limits<double>::infinity();
    for (int attr : unassigned) {
      for (int f = 0; f < 2; ++f) {
        double c = fmrmr_contribution(attr, f, partial, mi);
        if (c > max_contribution) {
          max_contribution = c;
          best_attr = attr;
          best_fragment = f;
        }
      }
    }
    partial.fragments[static_cast<std::size_t>(best_fragment)]
        .feature_indices.push_back(best_attr);
    unassigned.erase(
        std::find(unassigned.begin(), unassigned.end(), best_attr));
  }
  return {partial.fragments[0].feature_indices,
          partial.fragments[1].feature_indices};
}

}  // namespace

Fragmentation construct_fragments(const MIMatrix& mi) {
  std::vector<int> attrs(mi.attr_indices.begin(), mi.attr_indices.end() - 1);
  auto [left, right] = greedy_binary_split(mi, attrs);
  Fragmentation result;
  result.fragments.push_back(Fragment{std::move(left), true});
  result.fragments.push_back(Fragment{std::move(right), true});
  validate_fragmentation(result, attrs);
  return result;
}

Fragmentation construct_fragments_recursive(const MIMatrix& mi, int parts) {
  std::vector<int> attrs(mi.attr_indices.begin(), mi.attr_indices.end() - 1);
  if (parts < 2) throw PreconditionError("parts must be at least 2");
  if (parts > static_cast<int>(attrs.size())) {
    throw PreconditionError("parts exceeds the feature count");
  }
  Fragmentation result;
  result.fragments.push_back(Fragment{attrs, true});
  while (static_cast<int>(result.fragments.size()) < parts) {
    // Split the largest fragment; ties go to the lowest fragment index.
    std::size_t target = 0;
    for (std::size_t i = 1; i < result.fragments.size(); ++i) {
      if (result.fragments[i].feature_indices.size() >
          result.fragments[target].feature_indices.size()) {
        target = i;
      }
    }
    auto [left, right] =
        greedy_binary_split(mi, result.fragments[target].feature_indices);
    result.fragments[target].feature_indices = std::move(left);
    result.fragments.push_back(Fragment{std::move(right), true});
  }
  validate_fragmentation(result, attrs);
  return result;
}

}  // namespace fraganon
