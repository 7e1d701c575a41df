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

#include "fraganon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace fraganon {

double information_loss(
    const std::vector<AnonymizedFragment>& fragments,
    const std::vector<std::pair<double, double>>& attribute_ranges) {
  if (fragments.empty()) throw PreconditionError("no fragments");
  std::size_t rows = fragments.front().row_total();
  std::size_t total_features = 0;
  double width_sum = 0.0;
  for (const auto& fragment : fragments) {
    if (fragment.row_total() != rows) {
      throw PreconditionError("fragments disagree on the row count");
    }
    total_features += fragment.fragment.feature_indices.size();
    for (const auto& eq : fragment.classes) {
      for (std::size_t d = 0; d < eq.qi_box.size(); ++d) {
        int attr = fragment.fragment.feature_indices[d];
        if (attr < 0 || attr >= static_cast<int>(attribute_ranges.size())) {
          throw PreconditionError("attribute range missing for attribute " +
                                  std::to_string(attr));
        }
        double range = attribute_ranges[static_cast<std::size_t>(attr)].second -
                       attribute_ranges[static_cast<std::size_t>(attr)].first;
        if (range <= 0.0) continue;  // constant attribute: nothing to lose
        width_sum += eq.size() * (eq.qi_box[d].width() / range);
      }
    }
  }
  if (rows == 0 || total_features == 0) return 0.0;
  return width_sum /
         (static_cast<double>(rows) * static_cast<double>(total_features));
}

namespace {

struct TrainingPoint {
  double distance = 0.0;
  int eq_index = 0;
  double class_value = 0.0;
};

double normalized(double v, const std::pair<double, double>& range) {
  double width = range.second - range.first;
  if (width <= 0.0) return 0.0;
  return (v - range.first) / width;
}

}  // namespace

Prediction knn_predict(const AnonymizedFragment& train,
                       std::span<const double> test_row, int neighbors) {
  if (train.classes.empty()) throw PreconditionError("empty training fragment");
  if (neighbors < 1) throw PreconditionError("neighbors must be positive");
  std::size_t dims = train.feature_ranges.size();
  if (test_row.size() != dims) {
    throw PreconditionError("test row does not match the fragment schema");
  }

  std::vector<TrainingPoint> points;
  for (std::size_t e = 0; e < train.classes.size(); ++e) {
    const auto& eq = train.classes[e];
    double dist2 = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
      double diff = normalized(test_row[d], train.feature_ranges[d]) -
                    normalized(eq.qi_box[d].midpoint(), train.feature_ranges[d]);
      dist2 += diff * diff;
    }
    double dist = std::sqrt(dist2);
    for (const auto& [value, count] : eq.class_counts) {
      int copies =
          eq.publish_mode == PublishMode::kTupleLevel ? count : 1;
      for (int c = 0; c < copies; ++c) {
        points.push_back(TrainingPoint{dist, static_cast<int>(e), value});
      }
    }
  }
  std::sort(points.begin(), points.end(),
            [&](const TrainingPoint& a, const TrainingPoint& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              if (a.eq_index != b.eq_index) return a.eq_index < b.eq_index;
              return a.class_value < b.class_value;
            });
  std::size_t take = std::min<std::size_t>(points.size(),
                                           static_cast<std::size_t>(neighbors));
  std::map<double, int> votes;
  for (std::size_t i = 0; i < take; ++i) ++votes[points[i].class_value];

  double label = 0.0;
  int best = -1;
  for (const auto& [value, count] : votes) {
    if (count > best ||
        (count == best && train.class_domain.label(value) <
                              train.class_domain.label(label))) {
      label = value;
      best = count;
    }
  }
  return Prediction{label, static_cast<double>(best) / take};
}

double ensemble_predict(const std::vector<AnonymizedFragment>& fragments,
                        std::span<const double> full_row, int neighbors) {
  if (fragments.empty()) throw PreconditionError("no fragments");
  // Scores keyed by label text so fragments with separately built label
  // maps still vote together.
  std::map<std::string, std::pair<double, double>> scores;  // label -> (sum, value)
  for (const auto& fragment : fragments) {
    std::vector<double> projected;
    for (int attr : fragment.fragment.feature_indices) {
      if (attr < 0 || attr >= static_cast<int>(full_row.size())) {
        throw PreconditionError("fragment does not cover the test row");
      }
      projected.push_back(full_row[static_cast<std::size_t>(attr)]);
    }
    Prediction p = knn_predict(fragment, projected, neighbors);
    auto& entry = scores[fragment.class_domain.label(p.label)];
    entry.first += p.score;
    entry.second = p.label;
  }
  double label = 0.0;
  double best = -1.0;
  for (const auto& [text, entry] : scores) {  // map order breaks ties by label
    if (entry.first > best) {
      best = entry.first;
      label = entry.second;
    }
  }
  return label;
}

double weighted_f_measure(const std::vector<AnonymizedFragment>& fragments,
                          const Dataset& test, int neighbors) {
  if (fragments.empty()) throw PreconditionError("no fragments");
  ClassDomain train_domain = fragments.front().class_domain;
  ClassDomain test_domain = test.class_domain();
  const auto& cls = test.column(test.class_index());

  std::map<std::string, long> tp, fp, fn, support;
  for (std::size_t row = 0; row < test.row_count(); ++row) {
    std::vector<double> full_row(test.attribute_count(), 0.0);
    for (std::size_t a = 0; a < test.attribute_count(); ++a) {
      full_row[a] = test.column(static_cast<int>(a))[row];
    }
    double predicted = ensemble_predict(fragments, full_row, neighbors);
    std::string predicted_label = train_domain.label(predicted);
    std::string actual_label = test_domain.label(cls[row]);
    ++support[actual_label];
    if (predicted_label == actual_label) {
      ++tp[actual_label];
    } else {
      ++fp[predicted_label];
      ++fn[actual_label];
    }
  }

  double weighted = 0.0;
  for (const auto& [label, count] : support) {
    long tpos = tp.count(label) ? tp[label] : 0;
    long fpos = fp.count(label) ? fp[label] : 0;
    long fneg = fn.count(label) ? fn[label] : 0;
    double f1 = 0.0;
    if (2 * tpos + fpos + fneg > 0) {
      f1 = 2.0 * tpos / static_cast<double>(2 * tpos + fpos + fneg);
    }
    weighted += (static_cast<double>(count) / test.row_count()) * f1;
  }
  return weighted;
}

long distortion_count(const std::vector<AnonymizedFragment>& before,
                      const std::vector<AnonymizedFragment>& after) {
  if (before.size() != after.size()) {
    throw PreconditionError("fragment count mismatch");
  }
  long total = 0;
  for (std::size_t f = 0; f < before.size(); ++f) {
    if (before[f].classes.size() != after[f].classes.size()) {
      throw PreconditionError("equivalence class count mismatch in fragment " +
                              std::to_string(f));
    }
    for (std::size_t e = 0; e < before[f].classes.size(); ++e) {
      const auto& eb = before[f].classes[e];
      const auto& ea = after[f].classes[e];
      if (eb.size() != ea.size()) {
        throw PreconditionError("equivalence class size mismatch");
      }
      if (ea.publish_mode == PublishMode::kEcLevel) {
        for (const auto& [value, count] : eb.class_counts) {
          if (!ea.class_counts.count(value)) ++total;
        }
      } else {
        for (const auto& [value, count] : eb.class_counts) {
          auto it = ea.class_counts.find(value);
          int after_count = it == ea.class_counts.end() ? 0 : it->second;
          if (count > after_count) total += count - after_count;
        }
      }
    }
  }
  return total;
}

}  // namespace fraganon
