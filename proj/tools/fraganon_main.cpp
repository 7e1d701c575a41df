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

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fraganon/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

// FRAGANON_LOG=debug enables progress notes on stderr; no other levels.
bool debug_log_enabled() {
  const char* level = std::getenv("FRAGANON_LOG");
  return level != nullptr && std::string(level) == "debug";
}

void log_debug(const std::string& message) {
  if (debug_log_enabled()) std::cerr << "[fraganon] " << message << '\n';
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Fragmentation-based anonymization for high-dimensional "
               "tabular data"};
  app.require_subcommand(1);

  // --- anonymize ---
  fraganon::RunConfig run;
  std::string model_text = "k-anon";
  auto* anonymize = app.add_subcommand(
      "anonymize", "Fragment, anonymize and enforce non-reconstructability");
  anonymize->add_option("--input", run.input_csv, "Input CSV")->required();
  anonymize->add_option("--schema", run.schema_path, "Schema file")->required();
  anonymize->add_option("--out-dir", run.out_dir, "Output directory")
      ->required();
  anonymize->add_option("--model", model_text, "k-anon or l-div")
      ->check(CLI::IsMember({"k-anon", "l-div"}));
  anonymize->add_option("--k", run.k, "Anonymity level (>= 2)");
  anonymize->add_option("--l", run.l, "Diversity level (l-div model)");
  auto* strategy_opt =
      anonymize
          ->add_option("--strategy", run.strategy,
                       "naive, dgbe or delta (k-anon model)")
          ->check(CLI::IsMember({"naive", "dgbe", "delta"}));
  anonymize->add_option("--delta", run.delta,
                        "Selectivity threshold for --strategy delta");
  anonymize->add_option("--bins", run.bins, "Histogram bins for MI");
  anonymize->add_option("--seed", run.seed, "PRNG seed");
  anonymize->add_option("--fragments", run.fragments,
                        "Fragment count; 1 = unfragmented baseline");
  anonymize->add_flag("--debug-segments", run.debug_segments,
                      "Also write *.debug.csv with a segment column "
                      "(never publish these)");

  // --- verify ---
  std::string verify_dir;
  auto* verify = app.add_subcommand(
      "verify", "Re-check the privacy guarantees of a run directory");
  verify->add_option("--run-dir", verify_dir, "Directory written by anonymize")
      ->required();

  // --- attack ---
  std::string attack_dir, attack_input, attack_schema;
  int subjects = 50;
  std::uint64_t attack_seed = 1;
  auto* attack = app.add_subcommand(
      "attack", "Adversarial audit with membership sampling");
  attack->add_option("--run-dir", attack_dir, "Run directory")->required();
  attack->add_option("--input", attack_input, "Original CSV")->required();
  attack->add_option("--schema", attack_schema, "Schema file")->required();
  attack->add_option("--subjects", subjects, "Sampled subjects per group");
  attack->add_option("--seed", attack_seed, "PRNG seed");

  // --- eval ---
  std::string eval_dir, eval_input, eval_schema, eval_test;
  int neighbors = 5;
  auto* eval = app.add_subcommand("eval", "Utility metrics for a run");
  eval->add_option("--run-dir", eval_dir, "Run directory")->required();
  eval->add_option("--input", eval_input, "Original CSV")->required();
  eval->add_option("--schema", eval_schema, "Schema file")->required();
  eval->add_option("--test", eval_test, "Held-out test CSV");
  eval->add_option("--neighbors", neighbors, "k-NN neighbor count");

  // --- sweep ---
  fraganon::SweepConfig sweep;
  std::string sweep_model = "k-anon";
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Metrics grid over dimensionality, k and strategy");
  sweep_cmd->add_option("--input", sweep.input_csv, "Input CSV")->required();
  sweep_cmd->add_option("--schema", sweep.schema_path, "Schema file")
      ->required();
  sweep_cmd->add_option("--out-dir", sweep.out_dir, "Output directory")
      ->required();
  sweep_cmd->add_option("--dims", sweep.dims, "Feature counts to sweep")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--k", sweep.ks, "Anonymity levels to sweep")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--strategies", sweep.strategies,
                        "Enforcement strategies (default all three)")
      ->delimiter(',');
  sweep_cmd->add_option("--model", sweep_model, "k-anon or l-div")
      ->check(CLI::IsMember({"k-anon", "l-div"}));
  sweep_cmd->add_option("--l", sweep.l, "Diversity level");
  sweep_cmd->add_option("--delta", sweep.delta, "Selectivity threshold");
  sweep_cmd->add_option("--bins", sweep.bins, "Histogram bins for MI");
  sweep_cmd->add_option("--seed", sweep.seed, "PRNG seed");
  sweep_cmd->add_option("--test", sweep.test_csv, "Held-out test CSV");
  sweep_cmd->add_option("--neighbors", sweep.neighbors, "k-NN neighbors");
  sweep_cmd->add_flag("--no-baseline", "Skip the unfragmented baseline rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (anonymize->parsed()) {
    run.model = fraganon::model_from_string(model_text);
    if (run.model == fraganon::Model::kLDiv && strategy_opt->count() > 0) {
      std::cerr << "--strategy applies to --model k-anon only; the "
                   "l-diversity pipeline carries its own join guarantee\n";
      return kExitUsage;
    }
    log_debug("anonymizing " + run.input_csv + " into " + run.out_dir);
    auto result = fraganon::run_anonymize(run);
    log_debug("anonymize finished");
    std::cout << "wrote " << result.fragment_files.size() << " fragments to "
              << run.out_dir << " (strategy " << result.report.strategy
              << ", " << result.report.distorted_class_values << " distorted, "
              << result.report.removed_class_values << " removed)\n";
    return kExitOk;
  }
  if (verify->parsed()) {
    log_debug("verifying " + verify_dir);
    auto violations = fraganon::verify_run(verify_dir);
    if (violations.empty()) {
      std::cout << "verify: all checks passed\n";
      return kExitOk;
    }
    std::cout << "verify: " << violations.size() << " violations\n";
    for (const auto& v : violations) {
      std::cout << "  " << v.table_a << "#" << v.eq_a << " x " << v.table_b
                << "#" << v.eq_b << ": " << fraganon::format_number(v.value)
                << " (threshold " << fraganon::format_number(v.threshold)
                << ")\n";
    }
    return kExitViolation;
  }
  if (attack->parsed()) {
    auto report = fraganon::attack_run(attack_dir, attack_input, attack_schema,
                                       subjects, attack_seed);
    fraganon::write_audit_text(report, std::cout);
    return report.passed() ? kExitOk : kExitViolation;
  }
  if (eval->parsed()) {
    auto row = fraganon::eval_run(eval_dir, eval_input, eval_schema, eval_test,
                                  neighbors);
    std::cout << fraganon::metrics_csv_header() << '\n'
              << fraganon::metrics_csv_row(row) << '\n';
    return kExitOk;
  }
  if (sweep_cmd->parsed()) {
    sweep.model = fraganon::model_from_string(sweep_model);
    sweep.include_unfragmented = sweep_cmd->count("--no-baseline") == 0;
    auto rows = fraganon::sweep_run(sweep);
    std::cout << fraganon::metrics_csv_header() << '\n';
    for (const auto& row : rows) {
      std::cout << fraganon::metrics_csv_row(row) << '\n';
    }
    return kExitOk;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const fraganon::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const fraganon::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fraganon::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}
