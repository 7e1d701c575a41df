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

#ifndef FRAGANON_RECONSTRUCT_HPP_
#define FRAGANON_RECONSTRUCT_HPP_

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "fraganon/mondrian.hpp"

namespace fraganon {

using uint128 = unsigned __int128;

// Number of tuples produced by equijoining two equivalence classes on the
// class attribute: the sum of frequency products over shared class values.
std::uint64_t eq_join_size(const EquivalenceClass& a,
                           const EquivalenceClass& b);

// One violating pair found by a join check or threshold scan.
struct Violation {
  std::string table_a;  // "F<i>" for fragments, "I<s>" for join intermediates
  int eq_a = -1;
  std::string table_b;
  int eq_b = -1;
  double value = 0.0;      // join size or eta
  double threshold = 0.0;  // k or delta
};

void write_violations_csv(const std::vector<Violation>& violations,
                          std::ostream& out);

// Every cross pair with 0 < join size < k. An empty result means the two
// fragments cannot be joined back into a table that breaks k-anonymity.
std::vector<Violation> check_non_reconstructability(
    const AnonymizedFragment& f1, const AnonymizedFragment& f2, int k,
    int index_a = 1, int index_b = 2);

// Consecutive binary joins F1 x F2, (F1 x F2) x F3, ... with the same pair
// condition applied at every stage. Violations carry the stage tables.
std::vector<Violation> check_multiway(
    const std::vector<AnonymizedFragment>& fragments, int k);

// Undirected graph over all equivalence classes of a fragmentation. An edge
// joins classes from different fragments whose class-value sets intersect.
struct DependencyGraph {
  struct Node {
    int fragment = -1;
    int eq = -1;
  };

  std::vector<Node> nodes;
  std::vector<std::vector<int>> adjacency;  // sorted neighbor node ids
  std::vector<int> component_ids;           // 1-based, BFS discovery order
  int component_count = 0;

  std::vector<int> component_members(int component) const;
};

// BFS construction with the root of each component drawn from `rng`.
DependencyGraph build_dependency_graph(
    const std::vector<AnonymizedFragment>& fragments, std::mt19937_64& rng);

struct EnforcementReport {
  std::string strategy;
  long distorted_class_values = 0;
  long removed_class_values = 0;  // delta-selectivity only
  long pairs_checked = 0;
};

// Collapses every equivalence class to its majority class value. Any two
// joinable classes afterwards produce at least k*k tuples.
EnforcementReport naive_enforce(std::vector<AnonymizedFragment>& fragments);

// Dependency-graph-based enforcement: walks each component breadth first and
// merges lowest-frequency class values into the majority only inside classes
// that actually violate the pair condition, re-fixing previously satisfied
// pairs as needed.
EnforcementReport dgbe_enforce(std::vector<AnonymizedFragment>& fragments,
                               const DependencyGraph& graph, int k,
                               std::mt19937_64& rng);

// Switches a fragment to EC-level publishing: each class value appears once,
// the remaining size - |C| slots become ambiguous.
AnonymizedFragment to_ec_level(const AnonymizedFragment& fragment);

// Number of versions of an EC-level class: ways to fill the ambiguous slots
// so every listed class value occurs at least once. Stars and bars:
// C(size - 1, |C| - 1). Throws on uint64 overflow.
std::uint64_t count_versions(const EquivalenceClass& eq);

// Exact version-pair counts behind eta. numerator counts version pairs whose
// equijoin yields at least k tuples, denominator all version pairs.
struct EtaCounts {
  uint128 numerator = 0;
  uint128 denominator = 0;

  double ratio() const;
};

// Reference route: enumerates every version pair and joins it.
EtaCounts eta_counts_enumerated(const EquivalenceClass& a,
                                const EquivalenceClass& b, int k);

// Counting route: complement count over constrained frequency vectors on the
// shared class values, each weighted by its stars-and-bars extensions.
EtaCounts eta_counts_constrained(const EquivalenceClass& a,
                                 const EquivalenceClass& b, int k);

// Equijoin selectivity privacy level. Enumerates when the version-count
// product is at most `kEtaEnumerationLimit`, otherwise counts. Throws
// EtaUndefinedError when a and b share no class value.
inline constexpr std::uint64_t kEtaEnumerationLimit = 100000;
double eta(const EquivalenceClass& a, const EquivalenceClass& b, int k);

// delta-selectivity enforcement over EC-level fragments: while a connected
// pair has eta below delta, the class value with the lowest pre-conversion
// frequency is removed from the unvisited side.
EnforcementReport delta_enforce(std::vector<AnonymizedFragment>& fragments,
                                const DependencyGraph& graph, double delta,
                                int k, std::mt19937_64& rng);

// Post-enforcement repair for fragmentations with more than two fragments:
// applies majority merges until the consecutive-join stages of
// check_multiway are all clean. No-op when nothing violates.
long enforce_multiway_fixup(std::vector<AnonymizedFragment>& fragments, int k);

}  // namespace fraganon

#endif  // FRAGANON_RECONSTRUCT_HPP_
