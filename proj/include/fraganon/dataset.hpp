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

#ifndef FRAGANON_DATASET_HPP_
#define FRAGANON_DATASET_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fraganon/common.hpp"
#include "fraganon/fragment.hpp"

namespace fraganon {

enum class AttrKind { kNumeric, kCategorical };
enum class AttrRole { kFeature, kClass, kSensitive };

struct AttributeSchema {
  std::string name;
  AttrKind kind = AttrKind::kNumeric;
  AttrRole role = AttrRole::kFeature;
};

// Label bookkeeping for one attribute, detached from the owning table so
// anonymized artifacts can render class values after the table is gone.
struct ClassDomain {
  std::string name;
  AttrKind kind = AttrKind::kCategorical;
  std::vector<std::string> labels;  // code -> label; empty for numeric

  std::string label(double value) const;
  // Inverse of label(); throws ParseError on unknown labels.
  double value_of(const std::string& label) const;
};

// Immutable columnar table. Categorical columns store ordinal codes assigned
// in first-appearance order; the code -> label map lives in `labels`.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<AttributeSchema> schema,
          std::vector<std::vector<double>> columns,
          std::vector<std::vector<std::string>> labels);

  const std::vector<AttributeSchema>& schema() const { return schema_; }
  std::size_t row_count() const { return row_count_; }
  std::size_t attribute_count() const { return schema_.size(); }

  const std::vector<double>& column(int attr) const;
  const std::vector<std::string>& label_map(int attr) const;

  int class_index() const { return class_index_; }
  std::vector<int> feature_indices() const;

  // (min, max) of a column over all rows.
  std::pair<double, double> range(int attr) const;

  std::string value_label(int attr, double value) const;
  ClassDomain class_domain() const;

 private:
  std::vector<AttributeSchema> schema_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::vector<std::string>> labels_;
  std::size_t row_count_ = 0;
  int class_index_ = -1;
};

// Parses `<name>=<numeric|categorical>,<feature|class|sensitive>` lines.
// Blank lines and lines starting with '#' are skipped.
std::vector<AttributeSchema> load_schema_file(const std::string& path);

// Reads a comma-separated UTF-8 file whose header row must match the schema
// names in order. Missing or malformed cells raise ParseError naming the
// offending row and column.
Dataset load_csv(const std::string& path,
                 const std::vector<AttributeSchema>& schema);

// Columns of `fragment` plus the class column, row order preserved.
Dataset project(const Dataset& dataset, const Fragment& fragment);

}  // namespace fraganon

#endif  // FRAGANON_DATASET_HPP_
