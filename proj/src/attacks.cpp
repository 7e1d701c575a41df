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

#include "fraganon/attacks.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "fraganon/ldiversity.hpp"

namespace fraganon {

namespace {

long double to_long_double(uint128 v) {
  return static_cast<long double>(static_cast<std::uint64_t>(v >> 64)) *
             18446744073709551616.0L +
         static_cast<long double>(static_cast<std::uint64_t>(v));
}

// Published frequency of a class value: actual counts at tuple level, one
// occurrence per listed value at EC level.
std::uint64_t published_freq(const EquivalenceClass& eq, double value) {
  auto it = eq.class_counts.find(value);
  if (it == eq.class_counts.end()) return 0;
  return eq.publish_mode == PublishMode::kTupleLevel
             ? static_cast<std::uint64_t>(it->second)
             : 1;
}

}  // namespace

double membership_likelihood(
    const std::vector<std::vector<double>>& subject_per_fragment,
    const std::vector<AnonymizedFragment>& fragments) {
  if (fragments.empty()) throw PreconditionError("no fragments");
  if (subject_per_fragment.size() != fragments.size()) {
    throw PreconditionError("subject values do not match the fragment count");
  }

  std::vector<const EquivalenceClass*> matched;
  for (std::size_t f = 0; f < fragments.size(); ++f) {
    const auto& values = subject_per_fragment[f];
    if (values.size() != fragments[f].feature_ranges.size()) {
      throw PreconditionError("subject width mismatch in fragment " +
                              std::to_string(f));
    }
    const EquivalenceClass* match = nullptr;
    for (const auto& eq : fragments[f].classes) {
      bool inside = true;
      for (std::size_t d = 0; d < values.size(); ++d) {
        if (!eq.qi_box[d].contains(values[d])) {
          inside = false;
          break;
        }
      }
      if (inside) {
        if (match != nullptr) {
          throw InternalError(
              "subject matches two equivalence classes in fragment " +
              std::to_string(f));
        }
        match = &eq;
      }
    }
    if (match == nullptr) return 0.0;
    matched.push_back(match);
  }

  // Numerator: class join size of the matched classes. Denominator: the sum
  // over all class combinations, which factorizes into per-value products of
  // fragment totals.
  std::set<double> all_values;
  std::map<double, uint128> fragment_totals_product;
  for (const auto& [value, count] : matched.front()->class_counts) {
    all_values.insert(value);
  }
  uint128 numerator = 0;
  for (double value : all_values) {
    uint128 product = 1;
    for (const auto* eq : matched) {
      product *= published_freq(*eq, value);
      if (product == 0) break;
    }
    numerator += product;
  }

  uint128 denominator = 0;
  std::map<double, uint128> totals;
  for (const auto& eq : fragments.front().classes) {
    for (const auto& [value, count] : eq.class_counts) {
      totals[value] += published_freq(eq, value);
    }
  }
  for (const auto& [value, first_total] : totals) {
    uint128 product = first_total;
    for (std::size_t f = 1; f < fragments.size() && product > 0; ++f) {
      uint128 total = 0;
      for (const auto& eq : fragments[f].classes) {
        total += published_freq(eq, value);
      }
      product *= total;
    }
    denominator += product;
  }
  if (denominator == 0) return 0.0;
  internal_check(numerator <= denominator,
                 "membership numerator exceeds the denominator");
  return static_cast<double>(to_long_double(numerator) /
                             to_long_double(denominator));
}

bool AuditReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AuditCheck& c) { return c.passed; });
}

std::vector<Violation> AuditReport::all_violations() const {
  std::vector<Violation> all;
  for (const auto& check : checks) {
    all.insert(all.end(), check.violations.begin(), check.violations.end());
  }
  return all;
}

namespace {

MembershipStats stats_of(std::vector<double> likelihoods) {
  MembershipStats stats;
  stats.subjects = static_cast<int>(likelihoods.size());
  if (likelihoods.empty()) return stats;
  std::sort(likelihoods.begin(), likelihoods.end());
  stats.min = likelihoods.front();
  stats.max = likelihoods.back();
  std::size_t n = likelihoods.size();
  stats.median = n % 2 == 1 ? likelihoods[n / 2]
                            : (likelihoods[n / 2 - 1] + likelihoods[n / 2]) / 2;
  return stats;
}

std::vector<std::vector<double>> subject_from_row(
    const std::vector<AnonymizedFragment>& fragments, const Dataset& data,
    std::size_t row) {
  std::vector<std::vector<double>> subject;
  for (const auto& fragment : fragments) {
    std::vector<double> values;
    for (int attr : fragment.fragment.feature_indices) {
      values.push_back(data.column(attr)[row]);
    }
    subject.push_back(std::move(values));
  }
  return subject;
}

}  // namespace

AuditReport audit(const std::vector<AnonymizedFragment>& published,
                  const AuditOptions& options, std::mt19937_64& rng) {
  if (published.empty()) throw PreconditionError("nothing to audit");
  AuditReport report;

  AuditCheck k_check{"fragment-k-anonymity", true, {}};
  for (std::size_t f = 0; f < published.size(); ++f) {
    for (std::size_t e = 0; e < published[f].classes.size(); ++e) {
      int size = published[f].classes[e].size();
      if (size < options.k) {
        k_check.violations.push_back(
            Violation{"F" + std::to_string(f + 1), static_cast<int>(e), "-",
                      -1, static_cast<double>(size),
                      static_cast<double>(options.k)});
      }
    }
  }
  k_check.passed = k_check.violations.empty();
  report.checks.push_back(std::move(k_check));

  bool ec_level = false;
  for (const auto& fragment : published) {
    for (const auto& eq : fragment.classes) {
      if (eq.publish_mode == PublishMode::kEcLevel) ec_level = true;
    }
  }

  // The l-diversity pipeline's guarantee is the same-segment join theorem;
  // cross-segment joins only produce fake tuples, so the plain pairwise
  // check applies to the k-anonymity strategies only.
  if (published.size() >= 2 && !options.l.has_value()) {
    if (!ec_level) {
      AuditCheck pairwise{"pairwise-non-reconstructability", true, {}};
      for (std::size_t i = 0; i < published.size(); ++i) {
        for (std::size_t j = i + 1; j < published.size(); ++j) {
          auto v = check_non_reconstructability(published[i], published[j],
                                                options.k,
                                                static_cast<int>(i) + 1,
                                                static_cast<int>(j) + 1);
          pairwise.violations.insert(pairwise.violations.end(), v.begin(),
                                     v.end());
        }
      }
      pairwise.passed = pairwise.violations.empty();
      report.checks.push_back(std::move(pairwise));

      if (published.size() > 2) {
        AuditCheck multiway{"consecutive-join-non-reconstructability", true, {}};
        multiway.violations = check_multiway(published, options.k);
        multiway.passed = multiway.violations.empty();
        report.checks.push_back(std::move(multiway));
      }
    } else {
      double delta = options.delta.value_or(0.5);
      AuditCheck scan{"delta-threshold-scan", true, {}};
      for (std::size_t i = 0; i < published.size(); ++i) {
        for (std::size_t j = i + 1; j < published.size(); ++j) {
          for (std::size_t a = 0; a < published[i].classes.size(); ++a) {
            for (std::size_t b = 0; b < published[j].classes.size(); ++b) {
              const auto& eq_a = published[i].classes[a];
              const auto& eq_b = published[j].classes[b];
              bool shares = false;
              for (const auto& [value, count] : eq_a.class_counts) {
                if (eq_b.class_counts.count(value)) {
                  shares = true;
                  break;
                }
              }
              if (!shares) continue;
              double value = eta(eq_a, eq_b, options.k);
              if (value < delta) {
                scan.violations.push_back(Violation{
                    "F" + std::to_string(i + 1), static_cast<int>(a),
                    "F" + std::to_string(j + 1), static_cast<int>(b), value,
                    delta});
              }
            }
          }
        }
      }
      scan.passed = scan.violations.empty();
      report.checks.push_back(std::move(scan));
    }
  }

  if (options.l.has_value()) {
    AuditCheck l_check{"fragment-l-diversity", true, {}};
    for (std::size_t f = 0; f < published.size(); ++f) {
      for (std::size_t e = 0; e < published[f].classes.size(); ++e) {
        int distinct = published[f].classes[e].distinct_classes();
        if (distinct < *options.l) {
          l_check.violations.push_back(
              Violation{"F" + std::to_string(f + 1), static_cast<int>(e), "-",
                        -1, static_cast<double>(distinct),
                        static_cast<double>(*options.l)});
        }
      }
    }
    l_check.passed = l_check.violations.empty();
    report.checks.push_back(std::move(l_check));

    bool segmented = true;
    for (const auto& fragment : published) {
      for (const auto& eq : fragment.classes) {
        if (eq.segment_id < 0) segmented = false;
      }
    }
    if (segmented && published.size() >= 2) {
      AuditCheck thm{"ldiv-join-theorem", true, {}};
      auto chunks = collect_chunks(published);
      for (std::size_t a = 0; a < chunks.size(); ++a) {
        for (std::size_t b = a + 1; b < chunks.size(); ++b) {
          if (chunks[a].segment != chunks[b].segment ||
              chunks[a].fragment == chunks[b].fragment) {
            continue;
          }
          auto v = verify_ldiv_join(published, chunks[a], chunks[b], options.k);
          thm.violations.insert(thm.violations.end(), v.begin(), v.end());
        }
      }
      thm.passed = thm.violations.empty();
      report.checks.push_back(std::move(thm));
    }
  }

  if (options.original != nullptr && options.subject_samples > 0) {
    const Dataset& data = *options.original;
    std::vector<double> member_likelihoods, nonmember_likelihoods;
    for (int s = 0; s < options.subject_samples; ++s) {
      std::size_t row = static_cast<std::size_t>(rng() % data.row_count());
      member_likelihoods.push_back(
          membership_likelihood(subject_from_row(published, data, row),
                                published));
      // A non-member probe: the same record shifted by a random fraction of
      // each attribute's range.
      auto subject = subject_from_row(published, data, row);
      for (std::size_t f = 0; f < subject.size(); ++f) {
        for (std::size_t d = 0; d < subject[f].size(); ++d) {
          double range = published[f].feature_ranges[d].second -
                         published[f].feature_ranges[d].first;
          double unit = static_cast<double>(rng() % 1000) / 1000.0;
          double shift = (0.25 + unit / 2.0) * (range > 0.0 ? range : 1.0);
          subject[f][d] += (rng() % 2 == 0) ? shift : -shift;
        }
      }
      nonmember_likelihoods.push_back(
          membership_likelihood(subject, published));
    }
    report.member_stats = stats_of(std::move(member_likelihoods));
    report.nonmember_stats = stats_of(std::move(nonmember_likelihoods));
  }
  return report;
}

void write_audit_text(const AuditReport& report, std::ostream& out) {
  for (const auto& check : report.checks) {
    out << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << " ("
        << check.violations.size() << " violations)\n";
  }
  auto print_stats = [&out](const char* name, const MembershipStats& stats) {
    out << name << " membership likelihood over " << stats.subjects
        << " subjects: min=" << format_number(stats.min)
        << " median=" << format_number(stats.median)
        << " max=" << format_number(stats.max) << '\n';
  };
  if (report.member_stats) print_stats("member", *report.member_stats);
  if (report.nonmember_stats) print_stats("non-member", *report.nonmember_stats);
  out << (report.passed() ? "AUDIT PASSED\n" : "AUDIT FAILED\n");
}

void write_membership_csv(const AuditReport& report, std::ostream& out) {
  out << "group,subjects,min,median,max\n";
  auto row = [&out](const char* name, const MembershipStats& stats) {
    out << name << ',' << stats.subjects << ',' << format_number(stats.min)
        << ',' << format_number(stats.median) << ','
        << format_number(stats.max) << '\n';
  };
  if (report.member_stats) row("member", *report.member_stats);
  if (report.nonmember_stats) row("nonmember", *report.nonmember_stats);
}

}  // namespace fraganon
