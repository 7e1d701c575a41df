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

#ifndef FRAGANON_COMMON_HPP_
#define FRAGANON_COMMON_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fraganon {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input files (CSV, schema, manifest). Maps to CLI exit code 2.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Violated operation precondition. Maps to CLI exit code 2.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

// Equijoin selectivity is undefined for class-disjoint equivalence classes.
class EtaUndefinedError : public PreconditionError {
 public:
  explicit EtaUndefinedError(const std::string& what)
      : PreconditionError(what) {}
};

// Enforcement could not terminate within its iteration budget.
class EnforcementStuckError : public Error {
 public:
  explicit EnforcementStuckError(const std::string& what) : Error(what) {}
};

// Broken internal invariant. Maps to CLI exit code 3.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(what) {}
};

inline void internal_check(bool ok, const std::string& what) {
  if (!ok) throw InternalError(what);
}

// Shortest decimal string that parses back to exactly the same double.
// Integral values are printed without a fractional part.
inline std::string format_number(double v) {
  if (std::isfinite(v) && v == std::rint(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline bool parse_number(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                           text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.empty()) return false;
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size() &&
         std::isfinite(out);
}

}  // namespace fraganon

#endif  // FRAGANON_COMMON_HPP_
