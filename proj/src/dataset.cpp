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

#include "fraganon/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace fraganon {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

void validate_schema(const std::vector<AttributeSchema>& schema) {
  if (schema.empty()) throw PreconditionError("schema has no attributes");
  std::set<std::string> names;
  int class_count = 0;
  for (const auto& attr : schema) {
    if (!names.insert(attr.name).second) {
      throw PreconditionError("duplicate attribute name: " + attr.name);
    }
    if (attr.role == AttrRole::kClass) ++class_count;
  }
  if (class_count != 1) {
    throw PreconditionError("schema must contain exactly one class attribute, got " +
                            std::to_string(class_count));
  }
}

}  // namespace

std::string ClassDomain::label(double value) const {
  if (kind == AttrKind::kCategorical) {
    auto code = static_cast<long long>(value);
    if (value != static_cast<double>(code) || code < 0 ||
        code >= static_cast<long long>(labels.size())) {
      throw InternalError("categorical code out of range for attribute " +
                          name + ": " + format_number(value));
    }
    return labels[static_cast<std::size_t>(code)];
  }
  return format_number(value);
}

double ClassDomain::value_of(const std::string& text) const {
  if (kind == AttrKind::kCategorical) {
    auto it = std::find(labels.begin(), labels.end(), text);
    if (it == labels.end()) {
      throw ParseError("unknown class label '" + text + "' for attribute " +
                       name);
    }
    return static_cast<double>(it - labels.begin());
  }
  double v = 0.0;
  if (!parse_number(text, v)) {
    throw ParseError("cannot parse class value '" + text + "' for attribute " +
                     name);
  }
  return v;
}

Dataset::Dataset(std::vector<AttributeSchema> schema,
                 std::vector<std::vector<double>> columns,
                 std::vector<std::vector<std::string>> labels)
    : schema_(std::move(schema)),
      columns_(std::move(columns)),
      labels_(std::move(labels)) {
  validate_schema(schema_);
  if (columns_.size() != schema_.size() || labels_.size() != schema_.size()) {
    throw PreconditionError("column/label count does not match schema");
  }
  row_count_ = columns_.empty() ? 0 : columns_.front().size();
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].size() != row_count_) {
      throw PreconditionError("column " + schema_[i].name +
                              " has inconsistent length");
    }
  }
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].role == AttrRole::kClass) class_index_ = static_cast<int>(i);
  }
}

const std::vector<double>& Dataset::column(int attr) const {
  if (attr < 0 || attr >= static_cast<int>(columns_.size())) {
    throw PreconditionError("attribute index out of range: " +
                            std::to_string(attr));
  }
  return columns_[static_cast<std::size_t>(attr)];
}

const std::vector<std::string>& Dataset::label_map(int attr) const {
  if (attr < 0 || attr >= static_cast<int>(labels_.size())) {
    throw PreconditionError("attribute index out of range: " +
                            std::to_string(attr));
  }
  return labels_[static_cast<std::size_t>(attr)];
}

std::vector<int> Dataset::feature_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].role == AttrRole::kFeature) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::pair<double, double> Dataset::range(int attr) const {
  const auto& col = column(attr);
  if (col.empty()) throw PreconditionError("range of an empty column");
  auto [lo, hi] = std::minmax_element(col.begin(), col.end());
  return {*lo, *hi};
}

std::string Dataset::value_label(int attr, double value) const {
  const auto& s = schema_[static_cast<std::size_t>(attr)];
  ClassDomain domain{s.name, s.kind, labels_[static_cast<std::size_t>(attr)]};
  return domain.label(value);
}

ClassDomain Dataset::class_domain() const {
  const auto& s = schema_[static_cast<std::size_t>(class_index_)];
  return ClassDomain{s.name, s.kind, labels_[static_cast<std::size_t>(class_index_)]};
}

std::vector<AttributeSchema> load_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open schema file: " + path);
  std::vector<AttributeSchema> schema;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    auto eq = text.find('=');
    auto comma = text.find(',', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || comma == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected <name>=<kind>,<role>");
    }
    AttributeSchema attr;
    attr.name = trim(text.substr(0, eq));
    std::string kind = trim(text.substr(eq + 1, comma - eq - 1));
    std::string role = trim(text.substr(comma + 1));
    if (kind == "numeric") {
      attr.kind = AttrKind::kNumeric;
    } else if (kind == "categorical") {
      attr.kind = AttrKind::kCategorical;
    } else {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": unknown kind '" + kind + "'");
    }
    if (role == "feature") {
      attr.role = AttrRole::kFeature;
    } else if (role == "class") {
      attr.role = AttrRole::kClass;
    } else if (role == "sensitive") {
      attr.role = AttrRole::kSensitive;
    } else {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": unknown role '" + role + "'");
    }
    schema.push_back(std::move(attr));
  }
  validate_schema(schema);
  return schema;
}

Dataset load_csv(const std::string& path,
                 const std::vector<AttributeSchema>& schema) {
  validate_schema(schema);
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open CSV file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  auto header = split_csv_line(line);
  if (header.size() != schema.size()) {
    throw ParseError(path + ": header has " + std::to_string(header.size()) +
                     " columns, schema expects " +
                     std::to_string(schema.size()));
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (trim(header[i]) != schema[i].name) {
      throw ParseError(path + ": header column " + std::to_string(i + 1) +
                       " is '" + trim(header[i]) + "', schema expects '" +
                       schema[i].name + "'");
    }
  }

  std::vector<std::vector<double>> columns(schema.size());
  std::vector<std::vector<std::string>> labels(schema.size());
  std::vector<std::unordered_map<std::string, int>> codes(schema.size());

  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != schema.size()) {
      throw ParseError(path + ": row " + std::to_string(row) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(schema.size()));
    }
    for (std::size_t col = 0; col < cells.size(); ++col) {
      std::string cell = trim(cells[col]);
      if (cell.empty()) {
        throw ParseError(path + ": missing value at row " +
                         std::to_string(row) + ", column '" +
                         schema[col].name + "'");
      }
      if (schema[col].kind == AttrKind::kNumeric) {
        double v = 0.0;
        if (!parse_number(cell, v)) {
          throw ParseError(path + ": cannot parse '" + cell + "' at row " +
                           std::to_string(row) + ", column '" +
                           schema[col].name + "'");
        }
        columns[col].push_back(v);
      } else {
        auto [it, inserted] =
            codes[col].emplace(cell, static_cast<int>(labels[col].size()));
        if (inserted) labels[col].push_back(cell);
        columns[col].push_back(static_cast<double>(it->second));
      }
    }
  }
  if (columns.front().empty()) throw ParseError(path + ": no data rows");
  return Dataset(schema, std::move(columns), std::move(labels));
}

Dataset project(const Dataset& dataset, const Fragment& fragment) {
  if (fragment.feature_indices.empty()) {
    throw PreconditionError("cannot project an empty fragment");
  }
  std::vector<AttributeSchema> schema;
  std::vector<std::vector<double>> columns;
  std::vector<std::vector<std::string>> labels;
  for (int attr : fragment.feature_indices) {
    if (attr < 0 || attr >= static_cast<int>(dataset.attribute_count())) {
      throw PreconditionError("fragment attribute index out of range: " +
                              std::to_string(attr));
    }
    if (attr == dataset.class_index()) {
      throw PreconditionError("fragment lists the class attribute");
    }
    schema.push_back(dataset.schema()[static_cast<std::size_t>(attr)]);
    columns.push_back(dataset.column(attr));
    labels.push_back(dataset.label_map(attr));
  }
  int cls = dataset.class_index();
  schema.push_back(dataset.schema()[static_cast<std::size_t>(cls)]);
  columns.push_back(dataset.column(cls));
  labels.push_back(dataset.label_map(cls));
  return Dataset(std::move(schema), std::move(columns), std::move(labels));
}

void validate_fragmentation(const Fragmentation& fragmentation,
                            const std::vector<int>& feature_attrs) {
  std::set<int> seen;
  for (std::size_t i = 0; i < fragmentation.fragments.size(); ++i) {
    const auto& frag = fragmentation.fragments[i];
    if (frag.feature_indices.empty()) {
      throw PreconditionError("fragment " + std::to_string(i) + " is empty");
    }
    for (int attr : frag.feature_indices) {
      if (!seen.insert(attr).second) {
        throw PreconditionError("attribute " + std::to_string(attr) +
                                " appears in two fragments");
      }
    }
  }
  std::set<int> expected(feature_attrs.begin(), feature_attrs.end());
  if (seen != expected) {
    throw PreconditionError(
        "fragmentation does not cover the feature attributes exactly");
  }
}

}  // namespace fraganon
