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

#include "fraganon/ldiversity.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "fraganon/infotheory.hpp"

namespace fraganon {

namespace {

double gini(const std::map<double, int>& counts, int total) {
  double impurity = 1.0;
  for (const auto& [value, count] : counts) {
    double p = static_cast<double>(count) / total;
    impurity -= p * p;
  }
  return impurity;
}

struct Segmenter {
  const Dataset& data;
  int k = 2;
  int l = 2;
  std::vector<int> feature_cols;
  std::vector<Segment> segments;

  bool admits(const std::vector<int>& rows) const {
    if (static_cast<int>(rows.size()) < k) return false;
    const auto& cls = data.column(data.class_index());
    std::set<double> seen;
    for (int r : rows) seen.insert(cls[static_cast<std::size_t>(r)]);
    return static_cast<int>(seen.size()) >= l;
  }

  void split(const std::vector<int>& rows) {
    const auto& cls = data.column(data.class_index());
    std::map<double, int> node_counts;
    for (int r : rows) ++node_counts[cls[static_cast<std::size_t>(r)]];
    double node_gini = gini(node_counts, static_cast<int>(rows.size()));

    int best_attr = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    std::vector<int> best_left, best_right;
    for (int attr : feature_cols) {
      const auto& col = data.column(attr);
      std::vector<double> values;
      values.reserve(rows.size());
      for (int r : rows) values.push_back(col[static_cast<std::size_t>(r)]);
      auto mid = values.begin() + (values.size() - 1) / 2;
      std::nth_element(values.begin(), mid, values.end());
      double cut = *mid;

      std::vector<int> left, right;
      std::map<double, int> left_counts, right_counts;
      for (int r : rows) {
        if (col[static_cast<std::size_t>(r)] <= cut) {
          left.push_back(r);
          ++left_counts[cls[static_cast<std::size_t>(r)]];
        } else {
          right.push_back(r);
          ++right_counts[cls[static_cast<std::size_t>(r)]];
        }
      }
      if (!admits(left) || !admits(right)) continue;
      double weighted =
          (left.size() * gini(left_counts, static_cast<int>(left.size())) +
           right.size() * gini(right_counts, static_cast<int>(right.size()))) /
          rows.size();
      double gain = node_gini - weighted;
      if (gain > best_gain) {
        best_gain = gain;
        best_attr = attr;
        best_left = std::move(left);
        best_right = std::move(right);
      }
    }
    if (best_attr < 0) {
      Segment s;
      s.row_ids = rows;
      std::sort(s.row_ids.begin(), s.row_ids.end());
      for (int r : s.row_ids) {
        s.class_values.insert(cls[static_cast<std::size_t>(r)]);
      }
      s.diversity_level = static_cast<int>(s.class_values.size());
      segments.push_back(std::move(s));
      return;
    }
    split(best_left);
    split(best_right);
  }
};

Dataset subset_rows(const Dataset& data, const std::vector<int>& rows) {
  std::vector<std::vector<double>> columns(data.attribute_count());
  std::vector<std::vector<std::string>> labels;
  for (std::size_t a = 0; a < data.attribute_count(); ++a) {
    const auto& col = data.column(static_cast<int>(a));
    columns[a].reserve(rows.size());
    for (int r : rows) columns[a].push_back(col[static_cast<std::size_t>(r)]);
    labels.push_back(data.label_map(static_cast<int>(a)));
  }
  return Dataset(data.schema(), std::move(columns), std::move(labels));
}

}  // namespace

std::vector<Segment> segment(const Dataset& dataset, int k, int l) {
  if (k < 2) throw PreconditionError("k must be at least 2");
  if (l < 2) throw PreconditionError("l must be at least 2");
  if (dataset.row_count() < static_cast<std::size_t>(k)) {
    throw PreconditionError("fewer rows than k");
  }
  const auto& cls = dataset.column(dataset.class_index());
  std::set<double> distinct(cls.begin(), cls.end());
  if (static_cast<int>(distinct.size()) < l) {
    throw PreconditionError("data has " + std::to_string(distinct.size()) +
                            " distinct class values, l is " +
                            std::to_string(l));
  }
  Segmenter segmenter{dataset, k, l, dataset.feature_indices(), {}};
  std::vector<int> all(dataset.row_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  segmenter.split(all);
  return std::move(segmenter.segments);
}

std::vector<AnonymizedFragment> ldiverse_pipeline(const Dataset& dataset,
                                                  int k, int l, int bins,
                                                  std::mt19937_64& rng) {
  auto features = dataset.feature_indices();
  if (features.size() < 2) {
    throw PreconditionError("l-diversity pipeline needs at least 2 features");
  }
  // Step 1: the fragmentation is computed but not yet executed.
  MIMatrix mi = build_mi_matrix(dataset, bins);
  Fragmentation fragmentation = construct_fragments(mi);

  // Step 2: horizontal segmentation.
  std::vector<Segment> segments = segment(dataset, k, l);

  // Steps 3 and 4: project each segment onto each fragment and anonymize
  // the chunk at the segment's own diversity level with full class support.
  std::vector<AnonymizedFragment> published;
  for (const auto& fragment : fragmentation.fragments) {
    AnonymizedFragment merged;
    merged.fragment = fragment;
    merged.k = k;
    merged.class_domain = dataset.class_domain();
    for (int attr : fragment.feature_indices) {
      merged.feature_names.push_back(
          dataset.schema()[static_cast<std::size_t>(attr)].name);
      merged.feature_ranges.push_back(dataset.range(attr));
    }
    for (std::size_t s = 0; s < segments.size(); ++s) {
      const Segment& seg = segments[s];
      Dataset chunk = subset_rows(project(dataset, fragment), seg.row_ids);
      internal_check(chunk.row_count() >= static_cast<std::size_t>(k),
                     "segment smaller than k");
      AnonymizedFragment anonymized = mondrian_l_diverse(
          chunk, k, seg.diversity_level, &seg.row_ids, &seg.class_values);
      for (auto& eq : anonymized.classes) {
        eq.segment_id = static_cast<int>(s);
        internal_check(eq.class_values() == seg.class_values,
                       "chunk class support diverged from its segment");
        merged.classes.push_back(std::move(eq));
      }
    }
    // Step 5: one published fragment; class order shuffled so published
    // equivalence classes do not reveal their segment by position.
    for (std::size_t i = merged.classes.size(); i > 1; --i) {
      std::swap(merged.classes[i - 1],
                merged.classes[static_cast<std::size_t>(rng() % i)]);
    }
    published.push_back(std::move(merged));
  }
  return published;
}

std::vector<ChunkView> collect_chunks(
    const std::vector<AnonymizedFragment>& fragments) {
  std::map<std::pair<int, int>, ChunkView> chunks;
  for (std::size_t f = 0; f < fragments.size(); ++f) {
    for (std::size_t e = 0; e < fragments[f].classes.size(); ++e) {
      auto key = std::make_pair(static_cast<int>(f),
                                fragments[f].classes[e].segment_id);
      auto& chunk = chunks[key];
      chunk.fragment = key.first;
      chunk.segment = key.second;
      chunk.eq_indices.push_back(static_cast<int>(e));
    }
  }
  std::vector<ChunkView> out;
  out.reserve(chunks.size());
  for (auto& [key, chunk] : chunks) out.push_back(std::move(chunk));
  return out;
}

std::vector<Violation> verify_ldiv_join(
    const std::vector<AnonymizedFragment>& fragments, const ChunkView& a,
    const ChunkView& b, int k) {
  if (a.segment != b.segment) {
    throw PreconditionError("chunks belong to different segments");
  }
  const auto& fa = fragments[static_cast<std::size_t>(a.fragment)];
  const auto& fb = fragments[static_cast<std::size_t>(b.fragment)];
  std::string name_a = "F" + std::to_string(a.fragment + 1);
  std::string name_b = "F" + std::to_string(b.fragment + 1);

  // The chunk's diversity level: every class in both chunks must carry the
  // same number of distinct class values.
  int l_s = fa.classes[static_cast<std::size_t>(a.eq_indices.front())]
                .distinct_classes();
  std::vector<Violation> violations;
  for (int ea : a.eq_indices) {
    for (int eb : b.eq_indices) {
      const auto& eq_a = fa.classes[static_cast<std::size_t>(ea)];
      const auto& eq_b = fb.classes[static_cast<std::size_t>(eb)];
      std::uint64_t join = eq_join_size(eq_a, eq_b);
      int joined_values = 0;
      for (const auto& [value, count] : eq_a.class_counts) {
        if (eq_b.class_counts.count(value)) ++joined_values;
      }
      if (join < static_cast<std::uint64_t>(k)) {
        violations.push_back(Violation{name_a, ea, name_b, eb,
                                       static_cast<double>(join),
                                       static_cast<double>(k)});
      }
      if (joined_values != l_s || eq_a.distinct_classes() != l_s ||
          eq_b.distinct_classes() != l_s) {
        violations.push_back(Violation{name_a, ea, name_b, eb,
                                       static_cast<double>(joined_values),
                                       static_cast<double>(l_s)});
      }
    }
  }
  return violations;
}

}  // namespace fraganon
