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

#include "fraganon/reconstruct.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <ostream>
#include <set>

namespace fraganon {

namespace {

long double to_long_double(uint128 v) {
  return static_cast<long double>(static_cast<std::uint64_t>(v >> 64)) *
             18446744073709551616.0L +
         static_cast<long double>(static_cast<std::uint64_t>(v));
}

uint128 checked_mul(uint128 a, uint128 b, const char* what) {
  if (a != 0 && b > std::numeric_limits<uint128>::max() / a) {
    throw Error(std::string(what) + ": 128-bit overflow");
  }
  return a * b;
}

// C(n, r) in 128 bits, exact; 0 outside the triangle.
uint128 binom128(long n, long r) {
  if (n < 0 || r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  uint128 result = 1;
  for (long i = 1; i <= r; ++i) {
    result = checked_mul(result, static_cast<uint128>(n - r + i),
                         "binomial coefficient");
    result /= static_cast<uint128>(i);
  }
  return result;
}

void require_tuple_level(const EquivalenceClass& eq, const char* op) {
  if (eq.publish_mode != PublishMode::kTupleLevel) {
    throw PreconditionError(std::string(op) +
                            " needs tuple-level class counts");
  }
}

void require_ec_level(const EquivalenceClass& eq, const char* op) {
  if (eq.publish_mode != PublishMode::kEcLevel) {
    throw PreconditionError(std::string(op) +
                            " needs an EC-level equivalence class");
  }
}

std::vector<double> shared_values(const EquivalenceClass& a,
                                  const EquivalenceClass& b) {
  std::vector<double> shared;
  for (const auto& [value, count] : a.class_counts) {
    if (b.class_counts.count(value)) shared.push_back(value);
  }
  return shared;
}

}  // namespace

std::uint64_t eq_join_size(const EquivalenceClass& a,
                           const EquivalenceClass& b) {
  require_tuple_level(a, "eq_join_size");
  require_tuple_level(b, "eq_join_size");
  std::uint64_t total = 0;
  for (const auto& [value, count] : a.class_counts) {
    auto it = b.class_counts.find(value);
    if (it != b.class_counts.end()) {
      total += static_cast<std::uint64_t>(count) *
               static_cast<std::uint64_t>(it->second);
    }
  }
  return total;
}

void write_violations_csv(const std::vector<Violation>& violations,
                          std::ostream& out) {
  out << "fragment_a,eq_a,fragment_b,eq_b,join_size_or_eta,threshold\n";
  for (const auto& v : violations) {
    out << v.table_a << ',' << v.eq_a << ',' << v.table_b << ',' << v.eq_b
        << ',' << format_number(v.value) << ',' << format_number(v.threshold)
        << '\n';
  }
}

std::vector<Violation> check_non_reconstructability(
    const AnonymizedFragment& f1, const AnonymizedFragment& f2, int k,
    int index_a, int index_b) {
  if (f1.class_domain.name != f2.class_domain.name ||
      f1.class_domain.kind != f2.class_domain.kind) {
    throw PreconditionError("fragments disagree on the class attribute");
  }
  std::vector<Violation> violations;
  for (std::size_t i = 0; i < f1.classes.size(); ++i) {
    for (std::size_t j = 0; j < f2.classes.size(); ++j) {
      std::uint64_t size = eq_join_size(f1.classes[i], f2.classes[j]);
      if (size > 0 && size < static_cast<std::uint64_t>(k)) {
        violations.push_back(Violation{
            "F" + std::to_string(index_a), static_cast<int>(i),
            "F" + std::to_string(index_b), static_cast<int>(j),
            static_cast<double>(size), static_cast<double>(k)});
      }
    }
  }
  return violations;
}

std::vector<Violation> check_multiway(
    const std::vector<AnonymizedFragment>& fragments, int k) {
  if (fragments.size() < 2) {
    throw PreconditionError("multiway check needs at least 2 fragments");
  }
  using CountMap = std::map<double, std::uint64_t>;
  constexpr std::size_t kIntermediateCap = 200000;

  std::vector<CountMap> current;
  for (const auto& eq : fragments.front().classes) {
    require_tuple_level(eq, "check_multiway");
    CountMap counts;
    for (const auto& [value, count] : eq.class_counts) {
      counts[value] = static_cast<std::uint64_t>(count);
    }
    current.push_back(std::move(counts));
  }
  std::string current_name = "F1";

  std::vector<Violation> violations;
  for (std::size_t stage = 1; stage < fragments.size(); ++stage) {
    const auto& next_fragment = fragments[stage];
    std::string next_name = "F" + std::to_string(stage + 1);
    std::vector<CountMap> joined;
    for (std::size_t i = 0; i < current.size(); ++i) {
      for (std::size_t j = 0; j < next_fragment.classes.size(); ++j) {
        require_tuple_level(next_fragment.classes[j], "check_multiway");
        CountMap product;
        uint128 size = 0;
        for (const auto& [value, count] : current[i]) {
          auto it = next_fragment.classes[j].class_counts.find(value);
          if (it != next_fragment.classes[j].class_counts.end()) {
            uint128 cell = checked_mul(static_cast<uint128>(count),
                                       static_cast<uint128>(it->second),
                                       "multiway join");
            if (cell > std::numeric_limits<std::uint64_t>::max()) {
              throw Error("multiway join size overflow");
            }
            product[value] = static_cast<std::uint64_t>(cell);
            size += cell;
          }
        }
        if (size > 0 && size < static_cast<uint128>(k)) {
          violations.push_back(Violation{
              current_name, static_cast<int>(i), next_name,
              static_cast<int>(j), static_cast<double>(to_long_double(size)),
              static_cast<double>(k)});
        }
        if (size > 0) joined.push_back(std::move(product));
        if (joined.size() > kIntermediateCap) {
          throw Error("multiway join produced too many intermediate classes");
        }
      }
    }
    current = std::move(joined);
    current_name = "I" + std::to_string(stage);
  }
  return violations;
}

std::vector<int> DependencyGraph::component_members(int component) const {
  std::vector<int> members;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (component_ids[n] == component) members.push_back(static_cast<int>(n));
  }
  return members;
}

DependencyGraph build_dependency_graph(
    const std::vector<AnonymizedFragment>& fragments, std::mt19937_64& rng) {
  DependencyGraph graph;
  std::map<double, std::vector<int>> nodes_by_value;
  for (std::size_t f = 0; f < fragments.size(); ++f) {
    for (std::size_t e = 0; e < fragments[f].classes.size(); ++e) {
      int node = static_cast<int>(graph.nodes.size());
      graph.nodes.push_back(
          DependencyGraph::Node{static_cast<int>(f), static_cast<int>(e)});
      for (const auto& [value, count] :
           fragments[f].classes[e].class_counts) {
        nodes_by_value[value].push_back(node);
      }
    }
  }

  std::vector<std::vector<int>> adjacency(graph.nodes.size());
  for (const auto& [value, holders] : nodes_by_value) {
    for (std::size_t i = 0; i < holders.size(); ++i) {
      for (std::size_t j = i + 1; j < holders.size(); ++j) {
        int u = holders[i], v = holders[j];
        if (graph.nodes[u].fragment != graph.nodes[v].fragment) {
          adjacency[static_cast<std::size_t>(u)].push_back(v);
          adjacency[static_cast<std::size_t>(v)].push_back(u);
        }
      }
    }
  }
  for (auto& neighbors : adjacency) {
    std::sort(neighbors.begin(), neighbors.end());
    neighbors.erase(std::unique(neighbors.begin(), neighbors.end()),
                    neighbors.end());
  }
  graph.adjacency = std::move(adjacency);

  graph.component_ids.assign(graph.nodes.size(), 0);
  int cid = 0;
  std::vector<int> unvisited;
  for (std::size_t n = 0; n < graph.nodes.size(); ++n) {
    unvisited.push_back(static_cast<int>(n));
  }
  while (!unvisited.empty()) {
    int root = unvisited[static_cast<std::size_t>(rng() % unvisited.size())];
    ++cid;
    std::deque<int> queue{root};
    graph.component_ids[static_cast<std::size_t>(root)] = cid;
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop_front();
      for (int next : graph.adjacency[static_cast<std::size_t>(cur)]) {
        if (graph.component_ids[static_cast<std::size_t>(next)] == 0) {
          graph.component_ids[static_cast<std::size_t>(next)] = cid;
          queue.push_back(next);
        }
      }
    }
    std::erase_if(unvisited, [&](int n) {
      return graph.component_ids[static_cast<std::size_t>(n)] != 0;
    });
  }
  graph.component_count = cid;
  return graph;
}

namespace {

bool label_less(const ClassDomain& domain, double a, double b) {
  return domain.label(a) < domain.label(b);
}

// Lowest-frequency class value; ties resolved toward the smallest label.
double pick_victim(const EquivalenceClass& eq, const ClassDomain& domain) {
  double victim = 0.0;
  int best_count = std::numeric_limits<int>::max();
  bool found = false;
  for (const auto& [value, count] : eq.class_counts) {
    if (count < best_count ||
        (count == best_count && label_less(domain, value, victim))) {
      victim = value;
      best_count = count;
      found = true;
    }
  }
  internal_check(found, "victim selection on an empty class set");
  return victim;
}

// Majority merge used by naive enforcement and DGBE. Returns the number of
// tuples whose class value changed.
long merge_minority(EquivalenceClass& eq, const ClassDomain& domain) {
  internal_check(eq.distinct_classes() >= 2,
                 "majority merge needs two distinct class values");
  double victim = pick_victim(eq, domain);
  double target = 0.0;
  int best_count = -1;
  for (const auto& [value, count] : eq.class_counts) {
    if (value == victim) continue;
    if (count > best_count ||
        (count == best_count && label_less(domain, value, target))) {
      target = value;
      best_count = count;
    }
  }
  long moved = eq.class_counts[victim];
  eq.class_counts[target] += static_cast<int>(moved);
  eq.class_counts.erase(victim);
  return moved;
}

bool violates_pair(const EquivalenceClass& a, const EquivalenceClass& b,
                   int k) {
  std::uint64_t size = eq_join_size(a, b);
  return size > 0 && size < static_cast<std::uint64_t>(k);
}

struct BfsWalk {
  std::vector<int> order;  // dequeue order
  std::vector<std::vector<int>> unvisited_neighbors;  // per dequeued node
};

// Shared BFS schedule for the two graph-based strategies: per component, a
// seeded random start node, then breadth-first expansion with nodes marked
// visited when dequeued.
template <typename PairEnforcer>
void enforce_over_graph(const DependencyGraph& graph, std::mt19937_64& rng,
                        PairEnforcer&& enforce_pair) {
  std::vector<char> visited(graph.nodes.size(), 0);
  std::vector<char> enqueued(graph.nodes.size(), 0);
  for (int comp = 1; comp <= graph.component_count; ++comp) {
    auto members = graph.component_members(comp);
    if (members.empty()) continue;
    int start = members[static_cast<std::size_t>(rng() % members.size())];
    std::deque<int> queue{start};
    enqueued[static_cast<std::size_t>(start)] = 1;
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop_front();
      visited[static_cast<std::size_t>(cur)] = 1;
      for (int un : graph.adjacency[static_cast<std::size_t>(cur)]) {
        if (visited[static_cast<std::size_t>(un)]) continue;
        enforce_pair(comp, cur, un, visited);
        if (!enqueued[static_cast<std::size_t>(un)]) {
          enqueued[static_cast<std::size_t>(un)] = 1;
          queue.push_back(un);
        }
      }
    }
  }
}

long component_change_budget(const DependencyGraph& graph,
                             const std::vector<AnonymizedFragment>& fragments,
                             int comp) {
  long total_values = 0;
  for (int n : graph.component_members(comp)) {
    const auto& node = graph.nodes[static_cast<std::size_t>(n)];
    total_values += fragments[static_cast<std::size_t>(node.fragment)]
                        .classes[static_cast<std::size_t>(node.eq)]
                        .distinct_classes();
  }
  long budget = std::max<long>(total_values, 4);
  return budget * budget;
}

}  // namespace

EnforcementReport naive_enforce(std::vector<AnonymizedFragment>& fragments) {
  EnforcementReport report;
  report.strategy = "naive";
  for (auto& fragment : fragments) {
    for (auto& eq : fragment.classes) {
      require_tuple_level(eq, "naive_enforce");
      if (eq.distinct_classes() <= 1) continue;
      double majority = 0.0;
      int best_count = -1;
      for (const auto& [value, count] : eq.class_counts) {
        if (count > best_count ||
            (count == best_count &&
             label_less(fragment.class_domain, value, majority))) {
          majority = value;
          best_count = count;
        }
      }
      report.distorted_class_values += eq.size() - best_count;
      eq.class_counts = {{majority, eq.size()}};
    }
  }
  return report;
}

EnforcementReport dgbe_enforce(std::vector<AnonymizedFragment>& fragments,
                               const DependencyGraph& graph, int k,
                               std::mt19937_64& rng) {
  EnforcementReport report;
  report.strategy = "dgbe";
  auto eq_of = [&fragments, &graph](int node) -> EquivalenceClass& {
    const auto& n = graph.nodes[static_cast<std::size_t>(node)];
    return fragments[static_cast<std::size_t>(n.fragment)]
        .classes[static_cast<std::size_t>(n.eq)];
  };
  auto domain_of = [&fragments, &graph](int node) -> const ClassDomain& {
    const auto& n = graph.nodes[static_cast<std::size_t>(node)];
    return fragments[static_cast<std::size_t>(n.fragment)].class_domain;
  };

  std::vector<long> budget(static_cast<std::size_t>(graph.component_count) + 1,
                           -1);
  auto change = [&](int comp, int node) {
    if (budget[static_cast<std::size_t>(comp)] < 0) {
      budget[static_cast<std::size_t>(comp)] =
          component_change_budget(graph, fragments, comp);
    }
    if (--budget[static_cast<std::size_t>(comp)] < 0) {
      throw EnforcementStuckError("DGBE exceeded its change budget in component " +
                                  std::to_string(comp));
    }
    if (eq_of(node).distinct_classes() < 2) {
      throw EnforcementStuckError(
          "DGBE cannot fix a single-valued class in component " +
          std::to_string(comp));
    }
    report.distorted_class_values += merge_minority(eq_of(node), domain_of(node));
  };

  enforce_over_graph(
      graph, rng,
      [&](int comp, int cur, int un, const std::vector<char>& visited) {
        ++report.pairs_checked;
        bool changed = false;
        while (violates_pair(eq_of(cur), eq_of(un), k)) {
          change(comp, un);
          changed = true;
        }
        // A change may break pairs with already-visited neighbors; re-fix
        // until the whole visited neighborhood of `un` is clean.
        while (changed) {
          changed = false;
          for (int vn : graph.adjacency[static_cast<std::size_t>(un)]) {
            if (!visited[static_cast<std::size_t>(vn)]) continue;
            ++report.pairs_checked;
            while (violates_pair(eq_of(un), eq_of(vn), k)) {
              change(comp, un);
              changed = true;
            }
          }
        }
      });
  return report;
}

AnonymizedFragment to_ec_level(const AnonymizedFragment& fragment) {
  AnonymizedFragment out = fragment;
  for (auto& eq : out.classes) {
    require_tuple_level(eq, "to_ec_level");
    eq.publish_mode = PublishMode::kEcLevel;
  }
  return out;
}

std::uint64_t count_versions(const EquivalenceClass& eq) {
  require_ec_level(eq, "count_versions");
  uint128 versions =
      binom128(eq.size() - 1, eq.distinct_classes() - 1);
  if (versions > std::numeric_limits<std::uint64_t>::max()) {
    throw Error("count_versions overflows 64 bits for |EQ|=" +
                std::to_string(eq.size()) +
                ", |C|=" + std::to_string(eq.distinct_classes()));
  }
  return static_cast<std::uint64_t>(versions);
}

double EtaCounts::ratio() const {
  internal_check(denominator > 0, "eta with zero version pairs");
  return static_cast<double>(to_long_double(numerator) /
                             to_long_double(denominator));
}

namespace {

struct EtaProblem {
  std::vector<double> values_a;  // class values of a, ascending
  std::vector<double> values_b;
  std::vector<int> shared_a;  // positions of the shared values in values_a
  std::vector<int> shared_b;
  int size_a = 0, size_b = 0;
  int w = 0;
};

EtaProblem eta_problem(const EquivalenceClass& a, const EquivalenceClass& b,
                       const char* op) {
  require_ec_level(a, op);
  require_ec_level(b, op);
  EtaProblem p;
  for (const auto& [value, count] : a.class_counts) p.values_a.push_back(value);
  for (const auto& [value, count] : b.class_counts) p.values_b.push_back(value);
  for (std::size_t i = 0; i < p.values_a.size(); ++i) {
    auto it = std::find(p.values_b.begin(), p.values_b.end(), p.values_a[i]);
    if (it != p.values_b.end()) {
      p.shared_a.push_back(static_cast<int>(i));
      p.shared_b.push_back(static_cast<int>(it - p.values_b.begin()));
    }
  }
  p.size_a = a.size();
  p.size_b = b.size();
  p.w = static_cast<int>(p.shared_a.size());
  if (p.w == 0) {
    throw EtaUndefinedError(
        "eta is undefined for classes with no shared class value");
  }
  return p;
}

// Calls fn(counts) for every composition of `total` into positive parts.
template <typename Fn>
void for_each_composition(int total, int parts, std::vector<int>& counts,
                          int index, Fn&& fn) {
  if (index == parts - 1) {
    counts[static_cast<std::size_t>(index)] = total;
    fn(counts);
    return;
  }
  int remaining_parts = parts - index - 1;
  for (int c = 1; c + remaining_parts <= total; ++c) {
    counts[static_cast<std::size_t>(index)] = c;
    for_each_composition(total - c, parts, counts, index + 1, fn);
  }
}

}  // namespace

EtaCounts eta_counts_enumerated(const EquivalenceClass& a,
                                const EquivalenceClass& b, int k) {
  EtaProblem p = eta_problem(a, b, "eta_counts_enumerated");
  uint128 na = binom128(p.size_a - 1,
                        static_cast<long>(p.values_a.size()) - 1);
  uint128 nb = binom128(p.size_b - 1,
                        static_cast<long>(p.values_b.size()) - 1);
  uint128 pairs = checked_mul(na, nb, "eta enumeration");
  if (pairs > 20000000) {
    throw PreconditionError("version space too large to enumerate");
  }

  std::vector<std::vector<int>> versions_b;
  std::vector<int> counts_b(p.values_b.size());
  for_each_composition(p.size_b, static_cast<int>(p.values_b.size()), counts_b,
                       0, [&](const std::vector<int>& v) {
                         versions_b.push_back(v);
                       });

  EtaCounts result;
  result.denominator = pairs;
  std::vector<int> counts_a(p.values_a.size());
  for_each_composition(
      p.size_a, static_cast<int>(p.values_a.size()), counts_a, 0,
      [&](const std::vector<int>& va) {
        for (const auto& vb : versions_b) {
          std::uint64_t join = 0;
          for (int d = 0; d < p.w; ++d) {
            join += static_cast<std::uint64_t>(
                        va[static_cast<std::size_t>(p.shared_a[d])]) *
                    static_cast<std::uint64_t>(
                        vb[static_cast<std::size_t>(p.shared_b[d])]);
          }
          if (join >= static_cast<std::uint64_t>(k)) ++result.numerator;
        }
      });
  return result;
}

EtaCounts eta_counts_constrained(const EquivalenceClass& a,
                                 const EquivalenceClass& b, int k) {
  EtaProblem p = eta_problem(a, b, "eta_counts_constrained");
  int ca = static_cast<int>(p.values_a.size());
  int cb = static_cast<int>(p.values_b.size());
  int slots_a = p.size_a - ca;
  int slots_b = p.size_b - cb;
  int w = p.w;

  EtaCounts result;
  uint128 na = binom128(p.size_a - 1, ca - 1);
  uint128 nb = binom128(p.size_b - 1, cb - 1);
  result.denominator = checked_mul(na, nb, "eta version pairs");

  // A version pair joins into fewer than k tuples only if the shared
  // frequency products sum to at most k-1, which bounds every partial sum
  // by k-1 as well. Count that complement with a DP over the shared values,
  // weighting each partial frequency vector by the number of ways the
  // non-shared values can absorb the remaining slots.
  if (w >= k) {  // minimum join is w, so no pair can fall below k
    result.numerator = result.denominator;
    return result;
  }
  int budget = k - 1;
  int ta_max = std::min(budget, w + slots_a);
  int tb_max = std::min(budget, w + slots_b);
  std::size_t table_size = static_cast<std::size_t>(budget + 1) *
                           (ta_max + 1) * (tb_max + 1);
  if (table_size > 80000000) {
    throw Error("eta counting table too large for k=" + std::to_string(k));
  }
  auto idx = [=](int s, int ta, int tb) {
    return (static_cast<std::size_t>(s) * (ta_max + 1) + ta) * (tb_max + 1) +
           tb;
  };
  std::vector<uint128> table(table_size, 0), next(table_size, 0);
  table[idx(0, 0, 0)] = 1;

  int cap_a = 1 + slots_a;
  int cap_b = 1 + slots_b;
  for (int d = 0; d < w; ++d) {
    std::fill(next.begin(), next.end(), 0);
    int coords_left = w - d - 1;
    for (int s = 0; s <= budget; ++s) {
      for (int ta = 0; ta <= std::min(s, ta_max); ++ta) {
        for (int tb = 0; tb <= std::min(s, tb_max); ++tb) {
          uint128 count = table[idx(s, ta, tb)];
          if (count == 0) continue;
          int room = budget - s - coords_left;  // product budget for this value
          int a_hi = std::min({cap_a, ta_max - ta - coords_left, room});
          for (int va = 1; va <= a_hi; ++va) {
            int b_hi = std::min({cap_b, tb_max - tb - coords_left, room / va});
            for (int vb = 1; vb <= b_hi; ++vb) {
              next[idx(s + va * vb, ta + va, tb + vb)] += count;
            }
          }
        }
      }
    }
    table.swap(next);
  }

  // Extensions: compositions of the leftover rows into the non-shared
  // values, one stars-and-bars factor per side.
  auto extensions = [](int size, int c, int w_shared, int t) -> uint128 {
    if (c == w_shared) return t == size ? 1 : 0;
    return binom128(size - t - 1, c - w_shared - 1);
  };
  uint128 complement = 0;
  for (int s = 0; s <= budget; ++s) {
    for (int ta = 0; ta <= ta_max; ++ta) {
      for (int tb = 0; tb <= tb_max; ++tb) {
        uint128 count = table[idx(s, ta, tb)];
        if (count == 0) continue;
        uint128 ways_a = extensions(p.size_a, ca, w, ta);
        if (ways_a == 0) continue;
        uint128 ways_b = extensions(p.size_b, cb, w, tb);
        if (ways_b == 0) continue;
        complement += checked_mul(count, checked_mul(ways_a, ways_b, "eta"),
                                  "eta complement");
      }
    }
  }
  internal_check(complement <= result.denominator,
                 "eta complement exceeds the version-pair total");
  result.numerator = result.denominator - complement;
  return result;
}

double eta(const EquivalenceClass& a, const EquivalenceClass& b, int k) {
  EtaProblem p = eta_problem(a, b, "eta");
  uint128 na = binom128(p.size_a - 1,
                        static_cast<long>(p.values_a.size()) - 1);
  uint128 nb = binom128(p.size_b - 1,
                        static_cast<long>(p.values_b.size()) - 1);
  uint128 pairs = checked_mul(na, nb, "eta");
  EtaCounts counts = pairs <= kEtaEnumerationLimit
                         ? eta_counts_enumerated(a, b, k)
                         : eta_counts_constrained(a, b, k);
  return counts.ratio();
}

EnforcementReport delta_enforce(std::vector<AnonymizedFragment>& fragments,
                                const DependencyGraph& graph, double delta,
                                int k, std::mt19937_64& rng) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw PreconditionError("delta must lie in (0, 1]");
  }
  EnforcementReport report;
  report.strategy = "delta";
  auto eq_of = [&fragments, &graph](int node) -> EquivalenceClass& {
    const auto& n = graph.nodes[static_cast<std::size_t>(node)];
    return fragments[static_cast<std::size_t>(n.fragment)]
        .classes[static_cast<std::size_t>(n.eq)];
  };
  auto domain_of = [&fragments, &graph](int node) -> const ClassDomain& {
    const auto& n = graph.nodes[static_cast<std::size_t>(node)];
    return fragments[static_cast<std::size_t>(n.fragment)].class_domain;
  };
  // eta >= delta, or no shared value left at all.
  auto pair_ok = [&](int x, int y) {
    ++report.pairs_checked;
    if (shared_values(eq_of(x), eq_of(y)).empty()) return true;
    return eta(eq_of(x), eq_of(y), k) >= delta;
  };

  std::vector<long> budget(static_cast<std::size_t>(graph.component_count) + 1,
                           -1);
  auto change = [&](int comp, int node) {
    if (budget[static_cast<std::size_t>(comp)] < 0) {
      budget[static_cast<std::size_t>(comp)] =
          component_change_budget(graph, fragments, comp);
    }
    if (--budget[static_cast<std::size_t>(comp)] < 0) {
      throw EnforcementStuckError(
          "delta-selectivity exceeded its change budget in component " +
          std::to_string(comp));
    }
    EquivalenceClass& eq = eq_of(node);
    if (eq.distinct_classes() < 2) {
      throw EnforcementStuckError(
          "delta-selectivity stuck at a single-valued class in component " +
          std::to_string(comp));
    }
    eq.class_counts.erase(pick_victim(eq, domain_of(node)));
    ++report.removed_class_values;
  };

  enforce_over_graph(
      graph, rng,
      [&](int comp, int cur, int un, const std::vector<char>& visited) {
        bool changed = false;
        while (!pair_ok(un, cur)) {
          change(comp, un);
          changed = true;
        }
        while (changed) {
          changed = false;
          for (int vn : graph.adjacency[static_cast<std::size_t>(un)]) {
            if (!visited[static_cast<std::size_t>(vn)]) continue;
            while (!pair_ok(un, vn)) {
              change(comp, un);
              changed = true;
            }
          }
        }
      });
  return report;
}

long enforce_multiway_fixup(std::vector<AnonymizedFragment>& fragments,
                            int k) {
  long changed = 0;
  long total_values = 0;
  for (const auto& fragment : fragments) {
    for (const auto& eq : fragment.classes) {
      total_values += eq.distinct_classes();
    }
  }
  for (long round = 0; round <= total_values; ++round) {
    // Direct pairs first; the later fragment absorbs the change.
    for (std::size_t i = 0; i < fragments.size(); ++i) {
      for (std::size_t j = i + 1; j < fragments.size(); ++j) {
        for (auto& ea : fragments[i].classes) {
          for (auto& eb : fragments[j].classes) {
            while (violates_pair(ea, eb, k)) {
              changed += merge_minority(eb, fragments[j].class_domain);
            }
          }
        }
      }
    }
    auto violations = check_multiway(fragments, k);
    if (violations.empty()) return changed;
    const auto& v = violations.front();
    internal_check(v.table_b.size() > 1 && v.table_b[0] == 'F',
                   "multiway violation names a non-fragment right side");
    int frag = std::stoi(v.table_b.substr(1)) - 1;
    auto& eq = fragments[static_cast<std::size_t>(frag)]
                   .classes[static_cast<std::size_t>(v.eq_b)];
    if (eq.distinct_classes() < 2) {
      throw EnforcementStuckError(
          "multiway fixup stuck at a single-valued class");
    }
    changed += merge_minority(
        eq, fragments[static_cast<std::size_t>(frag)].class_domain);
  }
  throw EnforcementStuckError("multiway fixup exceeded its change budget");
}

}  // namespace fraganon
