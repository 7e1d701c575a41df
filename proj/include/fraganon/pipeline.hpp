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

#ifndef FRAGANON_PIPELINE_HPP_
#define FRAGANON_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fraganon/attacks.hpp"
#include "fraganon/dataset.hpp"
#include "fraganon/infotheory.hpp"
#include "fraganon/mondrian.hpp"
#include "fraganon/reconstruct.hpp"

namespace fraganon {

enum class Model { kKAnon, kLDiv };

std::string to_string(Model model);
Model model_from_string(const std::string& text);

// Everything one anonymization run depends on. Serialized verbatim into the
// run manifest so a run can be reproduced byte for byte.
struct RunConfig {
  std::string input_csv;
  std::string schema_path;
  std::string out_dir;
  Model model = Model::kKAnon;
  int k = 2;
  int l = 2;
  std::string strategy = "dgbe";  // naive | dgbe | delta (k-anon only)
  double delta = 0.5;
  int bins = 10;
  std::uint64_t seed = 1;
  int fragments = 2;  // 1 = unfragmented baseline
  std::vector<int> use_features;  // schema attr indices; empty = all
  bool debug_segments = false;    // adds *.debug.csv with a segment column
};

struct RunResult {
  std::vector<AnonymizedFragment> published;
  EnforcementReport report;
  std::vector<std::string> fragment_files;
  std::optional<MIMatrix> mi;
};

// In-memory pipeline: fragment construction, per-fragment anonymization and
// non-reconstructability enforcement (or the five-step l-diversity variant).
RunResult run_pipeline(const Dataset& data, const RunConfig& config);

// run_pipeline plus output files: manifest.json, fragment_<i>.csv,
// eq_meta.json and enforcement_report.json under config.out_dir.
RunResult run_anonymize(const RunConfig& config);

// Loads a run directory back: manifest plus the fragment definitions from
// eq_meta.json, cross-checked against the published CSVs.
struct LoadedRun {
  RunConfig config;
  std::vector<AnonymizedFragment> published;
};
LoadedRun load_run(const std::string& out_dir);

// Re-checks the guarantees the manifest claims. Returns the violations and
// writes violations.csv into the run directory.
std::vector<Violation> verify_run(const std::string& out_dir);

// Audit with membership sampling; writes audit_report.txt,
// audit_violations.csv and audit_membership.csv into the run directory.
AuditReport attack_run(const std::string& out_dir,
                       const std::string& original_csv,
                       const std::string& schema_path, int subject_samples,
                       std::uint64_t seed);

struct MetricsRow {
  std::string run_id;
  Model model = Model::kKAnon;
  int k = 0;
  int l = 0;
  double delta = 0.0;
  int dims = 0;
  int fragments = 0;
  std::string strategy;
  double info_loss = 0.0;
  double weighted_f = 0.0;
  long distortions = 0;
};

std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsRow& row);

// Information loss, weighted F-measure and distortion totals for one run.
// `test_csv` empty falls back to evaluating on the original data.
MetricsRow eval_run(const std::string& out_dir, const std::string& original_csv,
                    const std::string& schema_path, const std::string& test_csv,
                    int neighbors);

struct SweepConfig {
  std::string input_csv;
  std::string schema_path;
  std::string test_csv;  // optional
  std::string out_dir;
  Model model = Model::kKAnon;
  std::vector<int> dims;
  std::vector<int> ks;
  std::vector<std::string> strategies;
  int l = 2;
  double delta = 0.5;
  int bins = 10;
  int neighbors = 5;
  std::uint64_t seed = 1;
  int fragments = 2;
  bool include_unfragmented = true;
};

// One anonymize + eval cell per (dims, k, strategy) grid point, plus an
// unfragmented baseline row per (dims, k) unless disabled. Feature subsets
// of different sizes are nested prefixes of one seeded shuffle. Returns the
// metrics rows in grid order and writes metrics.csv under out_dir.
std::vector<MetricsRow> sweep_run(const SweepConfig& config);

}  // namespace fraganon

#endif  // FRAGANON_PIPELINE_HPP_
