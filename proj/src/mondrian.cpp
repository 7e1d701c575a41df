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

#include "fraganon/mondrian.hpp"

#include <algorithm>
#include <ostream>

namespace fraganon {

std::set<double> EquivalenceClass::class_values() const {
  std::set<double> values;
  for (const auto& [value, count] : class_counts) values.insert(value);
  return values;
}

std::size_t AnonymizedFragment::row_total() const {
  std::size_t total = 0;
  for (const auto& eq : classes) total += eq.row_ids.size();
  return total;
}

namespace {

struct SplitGuard {
  int k = 2;
  int l = 0;                                  // 0 = no diversity guard
  const std::set<double>* required = nullptr;  // full class support per side

  bool admits(const std::vector<int>& rows,
              const std::vector<double>& cls) const {
    if (static_cast<int>(rows.size()) < k) return false;
    if (l == 0 && required == nullptr) return true;
    std::set<double> seen;
    for (int r : rows) seen.insert(cls[static_cast<std::size_t>(r)]);
    if (l > 0 && static_cast<int>(seen.size()) < l) return false;
    if (required != nullptr) {
      for (double v : *required) {
        if (!seen.count(v)) return false;
      }
    }
    return true;
  }
};

class MondrianRun {
 public:
  MondrianRun(const Dataset& data, SplitGuard guard,
              const std::vector<int>* row_ids)
      : data_(data), guard_(guard) {
    for (std::size_t i = 0; i < data.attribute_count(); ++i) {
      if (static_cast<int>(i) != data.class_index()) {
        feature_cols_.push_back(static_cast<int>(i));
      }
    }
    for (int attr : feature_cols_) ranges_.push_back(data.range(attr));
    if (row_ids != nullptr) {
      if (row_ids->size() != data.row_count()) {
        throw PreconditionError("row id list does not match the row count");
      }
      source_rows_ = *row_ids;
    } else {
      source_rows_.resize(data.row_count());
      for (std::size_t i = 0; i < source_rows_.size(); ++i) {
        source_rows_[i] = static_cast<int>(i);
      }
    }
  }

  AnonymizedFragment run() {
    std::vector<int> all(data_.row_count());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    partition(all);

    AnonymizedFragment out;
    out.k = guard_.k;
    for (std::size_t d = 0; d < feature_cols_.size(); ++d) {
      out.fragment.feature_indices.push_back(static_cast<int>(d));
      out.feature_names.push_back(
          data_.schema()[static_cast<std::size_t>(feature_cols_[d])].name);
      out.feature_ranges.push_back(ranges_[d]);
    }
    out.class_domain = data_.class_domain();
    out.classes = std::move(leaves_);
    std::sort(out.classes.begin(), out.classes.end(),
              [](const EquivalenceClass& a, const EquivalenceClass& b) {
                for (std::size_t d = 0; d < a.qi_box.size(); ++d) {
                  if (a.qi_box[d].lower != b.qi_box[d].lower) {
                    return a.qi_box[d].lower < b.qi_box[d].lower;
                  }
                  if (a.qi_box[d].upper != b.qi_box[d].upper) {
                    return a.qi_box[d].upper < b.qi_box[d].upper;
                  }
                }
                return a.row_ids < b.row_ids;
              });
    return out;
  }

 private:
  void partition(const std::vector<int>& rows) {
    int dim = widest_dimension(rows);
    if (dim >= 0) {
      double cut = lower_median(rows, dim);
      std::vector<int> left, right;
      const auto& col = data_.column(feature_cols_[static_cast<std::size_t>(dim)]);
      for (int r : rows) {
        if (col[static_cast<std::size_t>(r)] <= cut) {
          left.push_back(r);
        } else {
          right.push_back(r);
        }
      }
      const auto& cls = data_.column(data_.class_index());
      if (guard_.admits(left, cls) && guard_.admits(right, cls)) {
        partition(left);
        partition(right);
        return;
      }
    }
    leaves_.push_back(make_leaf(rows));
  }

  // Index of the dimension with the widest min-max normalized span within
  // `rows`, or -1 when every dimension is degenerate.
  int widest_dimension(const std::vector<int>& rows) const {
    int best = -1;
    double best_width = 0.0;
    for (std::size_t d = 0; d < feature_cols_.size(); ++d) {
      double range = ranges_[d].second - ranges_[d].first;
      if (range <= 0.0) continue;
      const auto& col = data_.column(feature_cols_[d]);
      double lo = col[static_cast<std::size_t>(rows.front())];
      double hi = lo;
      for (int r : rows) {
        double v = col[static_cast<std::size_t>(r)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      double width = (hi - lo) / range;
      if (width > best_width) {
        best_width = width;
        best = static_cast<int>(d);
      }
    }
    return best;
  }

  double lower_median(const std::vector<int>& rows, int dim) const {
    const auto& col = data_.column(feature_cols_[static_cast<std::size_t>(dim)]);
    std::vector<double> values;
    values.reserve(rows.size());
    for (int r : rows) values.push_back(col[static_cast<std::size_t>(r)]);
    auto mid = values.begin() + (values.size() - 1) / 2;
    std::nth_element(values.begin(), mid, values.end());
    return *mid;
  }

  EquivalenceClass make_leaf(const std::vector<int>& rows) const {
    EquivalenceClass eq;
    eq.qi_box.resize(feature_cols_.size());
    for (std::size_t d = 0; d < feature_cols_.size(); ++d) {
      const auto& col = data_.column(feature_cols_[d]);
      double lo = col[static_cast<std::size_t>(rows.front())];
      double hi = lo;
      for (int r : rows) {
        double v = col[static_cast<std::size_t>(r)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      eq.qi_box[d] = GeneralizedValue{lo, hi};
    }
    const auto& cls = data_.column(data_.class_index());
    for (int r : rows) {
      ++eq.class_counts[cls[static_cast<std::size_t>(r)]];
      eq.row_ids.push_back(source_rows_[static_cast<std::size_t>(r)]);
    }
    std::sort(eq.row_ids.begin(), eq.row_ids.end());
    return eq;
  }

  const Dataset& data_;
  SplitGuard guard_;
  std::vector<int> feature_cols_;
  std::vector<std::pair<double, double>> ranges_;
  std::vector<int> source_rows_;
  std::vector<EquivalenceClass> leaves_;
};

}  // namespace

AnonymizedFragment mondrian_k_anonymize(const Dataset& data, int k,
                                        const std::vector<int>* row_ids) {
  if (k < 2) throw PreconditionError("k must be at least 2");
  if (data.row_count() < static_cast<std::size_t>(k)) {
    throw PreconditionError("fewer rows (" + std::to_string(data.row_count()) +
                            ") than k (" + std::to_string(k) + ")");
  }
  return MondrianRun(data, SplitGuard{k, 0, nullptr}, row_ids).run();
}

AnonymizedFragment mondrian_l_diverse(const Dataset& data, int k, int l,
                                      const std::vector<int>* row_ids,
                                      const std::set<double>* required_support) {
  if (k < 2) throw PreconditionError("k must be at least 2");
  if (l < 2) throw PreconditionError("l must be at least 2");
  if (data.row_count() < static_cast<std::size_t>(k)) {
    throw PreconditionError("fewer rows (" + std::to_string(data.row_count()) +
                            ") than k (" + std::to_string(k) + ")");
  }
  const auto& cls = data.column(data.class_index());
  std::set<double> distinct(cls.begin(), cls.end());
  if (static_cast<int>(distinct.size()) < l) {
    throw PreconditionError("data has " + std::to_string(distinct.size()) +
                            " distinct class values, l is " +
                            std::to_string(l));
  }
  if (required_support != nullptr) {
    for (double v : *required_support) {
      if (!distinct.count(v)) {
        throw PreconditionError("required class support value missing: " +
                                format_number(v));
      }
    }
  }
  auto result =
      MondrianRun(data, SplitGuard{k, l, required_support}, row_ids).run();
  for (const auto& eq : result.classes) {
    internal_check(eq.distinct_classes() >= l,
                   "l-diverse Mondrian produced a class below l");
  }
  return result;
}

void write_fragment_csv(const AnonymizedFragment& fragment, std::ostream& out,
                        bool debug_segment_column) {
  for (const auto& name : fragment.feature_names) out << name << ',';
  out << fragment.class_domain.name;
  if (debug_segment_column) out << ",segment";
  out << '\n';
  for (const auto& eq : fragment.classes) {
    std::string box_cells;
    for (const auto& cell : eq.qi_box) {
      box_cells += cell.is_point()
                       ? format_number(cell.lower)
                       : format_number(cell.lower) + ".." +
                             format_number(cell.upper);
      box_cells += ',';
    }
    std::string suffix =
        debug_segment_column ? "," + std::to_string(eq.segment_id) : "";
    if (eq.publish_mode == PublishMode::kTupleLevel) {
      for (const auto& [value, count] : eq.class_counts) {
        for (int i = 0; i < count; ++i) {
          out << box_cells << fragment.class_domain.label(value) << suffix
              << '\n';
        }
      }
    } else {
      for (const auto& [value, count] : eq.class_counts) {
        out << box_cells << fragment.class_domain.label(value) << suffix
            << '\n';
      }
      for (int i = 0; i < eq.ambiguous_slots(); ++i) {
        out << box_cells << suffix << '\n';
      }
    }
  }
}

}  // namespace fraganon
