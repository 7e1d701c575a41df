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

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "testutil.hpp"

namespace {

using namespace fraganon;

std::string write_temp(const std::string& name, const std::string& content) {
  auto dir = std::filesystem::temp_directory_path() / "fraganon_tests";
  std::filesystem::create_directories(dir);
  auto path = dir / name;
  std::ofstream out(path, std::ios::trunc);
  out << content;
  return path.string();
}

std::vector<AttributeSchema> abc_schema() {
  return {{"a", AttrKind::kNumeric, AttrRole::kFeature},
          {"b", AttrKind::kNumeric, AttrRole::kFeature},
          {"cls", AttrKind::kCategorical, AttrRole::kClass}};
}

TEST_CASE("load_csv parses a numeric table") {
  auto path = write_temp("basic.csv", "a,b,cls\n1,2,x\n3,4,y\n5,6,x\n");
  Dataset data = load_csv(path, abc_schema());
  CHECK(data.row_count() == 3);
  CHECK(data.column(0) == std::vector<double>{1, 3, 5});
  CHECK(data.column(1) == std::vector<double>{2, 4, 6});
  CHECK(data.class_index() == 2);
}

TEST_CASE("load_csv encodes categoricals in first-appearance order") {
  auto path = write_temp("cat.csv", "a,b,cls\n1,2,x\n3,4,y\n5,6,x\n");
  Dataset data = load_csv(path, abc_schema());
  CHECK(data.column(2) == std::vector<double>{0, 1, 0});
  CHECK(data.label_map(2) == std::vector<std::string>{"x", "y"});
  CHECK(data.value_label(2, 1) == "y");
}

TEST_CASE("load_csv rejects malformed input with row and column") {
  auto missing = write_temp("missing.csv", "a,b,cls\n1,,x\n");
  CHECK_THROWS_WITH_AS(load_csv(missing, abc_schema()),
                       doctest::Contains("row 1"), ParseError);
  CHECK_THROWS_WITH_AS(load_csv(missing, abc_schema()),
                       doctest::Contains("column 'b'"), ParseError);

  auto bad_number = write_temp("badnum.csv", "a,b,cls\n1,2,x\nq,4,y\n");
  CHECK_THROWS_WITH_AS(load_csv(bad_number, abc_schema()),
                       doctest::Contains("row 2"), ParseError);

  auto empty = write_temp("empty.csv", "");
  CHECK_THROWS_AS(load_csv(empty, abc_schema()), ParseError);

  auto wrong_header = write_temp("hdr.csv", "a,z,cls\n1,2,x\n");
  CHECK_THROWS_AS(load_csv(wrong_header, abc_schema()), ParseError);

  auto short_row = write_temp("short.csv", "a,b,cls\n1,2\n");
  CHECK_THROWS_AS(load_csv(short_row, abc_schema()), ParseError);
}

TEST_CASE("schema invariants") {
  auto path = write_temp("twocls.csv", "a,b\n1,2\n");
  std::vector<AttributeSchema> two_classes{
      {"a", AttrKind::kNumeric, AttrRole::kClass},
      {"b", AttrKind::kNumeric, AttrRole::kClass}};
  CHECK_THROWS_AS(load_csv(path, two_classes), PreconditionError);

  std::vector<AttributeSchema> duplicate{
      {"a", AttrKind::kNumeric, AttrRole::kFeature},
      {"a", AttrKind::kNumeric, AttrRole::kClass}};
  CHECK_THROWS_AS(load_csv(path, duplicate), PreconditionError);
}

TEST_CASE("load_schema_file round trip") {
  auto path = write_temp("schema.txt",
                         "# comment\n"
                         "a=numeric,feature\n"
                         "b=categorical,sensitive\n"
                         "cls=categorical,class\n");
  auto schema = load_schema_file(path);
  REQUIRE(schema.size() == 3);
  CHECK(schema[0].name == "a");
  CHECK(schema[0].kind == AttrKind::kNumeric);
  CHECK(schema[1].role == AttrRole::kSensitive);
  CHECK(schema[2].role == AttrRole::kClass);

  auto bad = write_temp("schema_bad.txt", "a=numeric\n");
  CHECK_THROWS_AS(load_schema_file(bad), ParseError);
}

TEST_CASE("project keeps fragment columns plus the class") {
  Dataset data = testutil::make_dataset({{1, 2}, {3, 4}, {5, 6}},
                                        {"x", "y"});

  SUBCASE("identity projection") {
    Dataset all = project(data, Fragment{{0, 1, 2}, true});
    CHECK(all.attribute_count() == 4);
    CHECK(all.column(0) == data.column(0));
    CHECK(all.column(3) == data.column(3));
  }
  SUBCASE("single feature") {
    Dataset one = project(data, Fragment{{0}, true});
    CHECK(one.attribute_count() == 2);
    CHECK(one.schema()[0].name == "f0");
    CHECK(one.schema()[1].name == "cls");
    CHECK(one.column(0) == std::vector<double>{1, 2});
  }
  SUBCASE("disjoint fragments share only the class column") {
    Dataset left = project(data, Fragment{{0}, true});
    Dataset right = project(data, Fragment{{1, 2}, true});
    CHECK(left.schema()[0].name == "f0");
    CHECK(right.schema()[0].name == "f1");
    CHECK(right.schema()[1].name == "f2");
    CHECK(left.column(left.class_index()) ==
          right.column(right.class_index()));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(project(data, Fragment{{7}, true}), PreconditionError);
    CHECK_THROWS_AS(project(data, Fragment{{3}, true}), PreconditionError);
  }
}

TEST_CASE("fragmentation invariants: disjoint exact cover") {
  std::vector<int> features{0, 1, 2, 3};
  Fragmentation good{{Fragment{{0, 2}, true}, Fragment{{1, 3}, true}}};
  CHECK_NOTHROW(validate_fragmentation(good, features));

  Fragmentation overlapping{{Fragment{{0, 1}, true}, Fragment{{1, 3}, true}}};
  CHECK_THROWS_AS(validate_fragmentation(overlapping, features),
                  PreconditionError);

  Fragmentation incomplete{{Fragment{{0}, true}, Fragment{{1}, true}}};
  CHECK_THROWS_AS(validate_fragmentation(incomplete, features),
                  PreconditionError);
}

TEST_CASE("projections rejoined on row index reproduce the table") {
  Dataset data = testutil::make_dataset({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}},
                                        {"x", "y", "x"});
  Dataset left = project(data, Fragment{{0, 2}, true});
  Dataset right = project(data, Fragment{{1}, true});
  for (std::size_t row = 0; row < data.row_count(); ++row) {
    CHECK(left.column(0)[row] == data.column(0)[row]);
    CHECK(left.column(1)[row] == data.column(2)[row]);
    CHECK(right.column(0)[row] == data.column(1)[row]);
    CHECK(left.column(2)[row] == right.column(1)[row]);
  }
}

}  // namespace
