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

#ifndef FRAGANON_ATTACKS_HPP_
#define FRAGANON_ATTACKS_HPP_

#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fraganon/dataset.hpp"
#include "fraganon/mondrian.hpp"
#include "fraganon/reconstruct.hpp"

namespace fraganon {

// Chance that a subject's record is present in the published fragmented
// data, given the subject's feature values per fragment: the class-join size
// of the matched equivalence classes over the total join size of all
// combinations. Returns 0 when some fragment has no matching class.
//
// Under tuple-level publishing class frequencies are the published counts;
// under EC-level publishing every listed value counts once (the attacker's
// view). Throws InternalError if a subject matches two classes in one
// fragment, which strict Mondrian rules out.
double membership_likelihood(
    const std::vector<std::vector<double>>& subject_per_fragment,
    const std::vector<AnonymizedFragment>& fragments);

struct MembershipStats {
  int subjects = 0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

struct AuditCheck {
  std::string name;
  bool passed = true;
  std::vector<Violation> violations;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  std::optional<MembershipStats> member_stats;
  std::optional<MembershipStats> nonmember_stats;

  bool passed() const;
  std::vector<Violation> all_violations() const;
};

struct AuditOptions {
  int k = 2;
  std::optional<int> l;
  std::optional<double> delta;
  // Original table for membership sampling; skipped when absent.
  const Dataset* original = nullptr;
  int subject_samples = 50;
};

// Adversary-side verification of published fragments: per-class k-anonymity,
// pairwise and consecutive-join non-reconstructability (or the delta
// threshold scan for EC-level data), the l-diversity join theorem when l is
// set, and membership-likelihood statistics over sampled subjects.
AuditReport audit(const std::vector<AnonymizedFragment>& published,
                  const AuditOptions& options, std::mt19937_64& rng);

void write_audit_text(const AuditReport& report, std::ostream& out);
void write_membership_csv(const AuditReport& report, std::ostream& out);

}  // namespace fraganon

#endif  // FRAGANON_ATTACKS_HPP_
