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

#include "fraganon/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "json.hpp"

#include "fraganon/infotheory.hpp"
#include "fraganon/ldiversity.hpp"
#include "fraganon/metrics.hpp"

namespace fraganon {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Model model) {
  return model == Model::kKAnon ? "k-anon" : "l-div";
}

Model model_from_string(const std::string& text) {
  if (text == "k-anon") return Model::kKAnon;
  if (text == "l-div") return Model::kLDiv;
  throw PreconditionError("unknown model: " + text);
}

namespace {

void validate_config(const RunConfig& config) {
  if (config.k < 2) throw PreconditionError("k must be at least 2");
  if (config.fragments < 1) {
    throw PreconditionError("fragments must be at least 1");
  }
  if (config.bins < 1) throw PreconditionError("bins must be positive");
  if (config.model == Model::kKAnon) {
    if (config.strategy != "naive" && config.strategy != "dgbe" &&
        config.strategy != "delta" && config.strategy != "none") {
      throw PreconditionError("unknown strategy: " + config.strategy);
    }
    if (config.strategy == "none" && config.fragments >= 2) {
      throw PreconditionError(
          "fragmented publishing requires an enforcement strategy");
    }
    if (!(config.delta > 0.0 && config.delta <= 1.0)) {
      throw PreconditionError("delta must lie in (0, 1]");
    }
  } else {
    if (config.l < 2) throw PreconditionError("l must be at least 2");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write: " + path);
  out << content;
}

json domain_to_json(const ClassDomain& domain) {
  return json{{"name", domain.name},
              {"kind", domain.kind == AttrKind::kCategorical ? "categorical"
                                                             : "numeric"},
              {"labels", domain.labels}};
}

ClassDomain domain_from_json(const json& j) {
  ClassDomain domain;
  domain.name = j.at("name").get<std::string>();
  domain.kind = j.at("kind").get<std::string>() == "categorical"
                    ? AttrKind::kCategorical
                    : AttrKind::kNumeric;
  domain.labels = j.at("labels").get<std::vector<std::string>>();
  return domain;
}

json fragments_to_json(const std::vector<AnonymizedFragment>& fragments) {
  json out = json::array();
  for (const auto& fragment : fragments) {
    json eqs = json::array();
    for (const auto& eq : fragment.classes) {
      json box = json::array();
      for (const auto& cell : eq.qi_box) {
        box.push_back(json::array({cell.lower, cell.upper}));
      }
      json classes = json::object();
      for (const auto& [value, count] : eq.class_counts) {
        classes[fragment.class_domain.label(value)] = count;
      }
      eqs.push_back(json{
          {"box", box},
          {"mode", eq.publish_mode == PublishMode::kEcLevel ? "ec" : "tuple"},
          {"segment", eq.segment_id},
          {"rows", eq.row_ids},
          {"classes", classes}});
    }
    json ranges = json::array();
    for (const auto& [lo, hi] : fragment.feature_ranges) {
      ranges.push_back(json::array({lo, hi}));
    }
    out.push_back(json{{"k", fragment.k},
                       {"features", fragment.feature_names},
                       {"feature_indices", fragment.fragment.feature_indices},
                       {"ranges", ranges},
                       {"eqs", eqs}});
  }
  return out;
}

std::vector<AnonymizedFragment> fragments_from_json(const json& meta) {
  ClassDomain domain = domain_from_json(meta.at("class"));
  std::vector<AnonymizedFragment> fragments;
  for (const auto& jf : meta.at("fragments")) {
    AnonymizedFragment fragment;
    fragment.k = jf.at("k").get<int>();
    fragment.feature_names = jf.at("features").get<std::vector<std::string>>();
    fragment.fragment.feature_indices =
        jf.at("feature_indices").get<std::vector<int>>();
    for (const auto& r : jf.at("ranges")) {
      fragment.feature_ranges.emplace_back(r.at(0).get<double>(),
                                           r.at(1).get<double>());
    }
    fragment.class_domain = domain;
    for (const auto& je : jf.at("eqs")) {
      EquivalenceClass eq;
      for (const auto& cell : je.at("box")) {
        eq.qi_box.push_back(GeneralizedValue{cell.at(0).get<double>(),
                                             cell.at(1).get<double>()});
      }
      eq.publish_mode = je.at("mode").get<std::string>() == "ec"
                            ? PublishMode::kEcLevel
                            : PublishMode::kTupleLevel;
      eq.segment_id = je.at("segment").get<int>();
      eq.row_ids = je.at("rows").get<std::vector<int>>();
      for (const auto& [label, count] : je.at("classes").items()) {
        eq.class_counts[domain.value_of(label)] = count.get<int>();
      }
      fragment.classes.push_back(std::move(eq));
    }
    fragments.push_back(std::move(fragment));
  }
  return fragments;
}

json config_to_json(const RunConfig& config) {
  return json{{"bins", config.bins},
              {"debug_segments", config.debug_segments},
              {"delta", config.delta},
              {"fragments", config.fragments},
              {"input", config.input_csv},
              {"k", config.k},
              {"l", config.l},
              {"model", to_string(config.model)},
              {"schema", config.schema_path},
              {"seed", config.seed},
              {"strategy", config.strategy},
              {"use_features", config.use_features}};
}

RunConfig config_from_json(const json& j) {
  RunConfig config;
  config.bins = j.at("bins").get<int>();
  config.debug_segments = j.at("debug_segments").get<bool>();
  config.delta = j.at("delta").get<double>();
  config.fragments = j.at("fragments").get<int>();
  config.input_csv = j.at("input").get<std::string>();
  config.k = j.at("k").get<int>();
  config.l = j.at("l").get<int>();
  config.model = model_from_string(j.at("model").get<std::string>());
  config.schema_path = j.at("schema").get<std::string>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.strategy = j.at("strategy").get<std::string>();
  config.use_features = j.at("use_features").get<std::vector<int>>();
  return config;
}

}  // namespace

RunResult run_pipeline(const Dataset& data, const RunConfig& config) {
  validate_config(config);
  std::mt19937_64 rng(config.seed);

  // Restrict to the requested feature subset; indices into the working
  // dataset map back to the input schema through `original_attr`.
  std::vector<int> original_attr;
  Dataset working;
  if (config.use_features.empty()) {
    working = data;
    for (std::size_t i = 0; i < data.attribute_count(); ++i) {
      original_attr.push_back(static_cast<int>(i));
    }
  } else {
    working = project(data, Fragment{config.use_features, true});
    original_attr = config.use_features;
    original_attr.push_back(data.class_index());
  }
  auto features = working.feature_indices();

  RunResult result;
  if (config.fragments >= 2) {
    result.mi = build_mi_matrix(working, config.bins);
  }
  if (config.model == Model::kLDiv) {
    if (config.fragments > 2) {
      throw PreconditionError("the l-diversity pipeline publishes 2 fragments");
    }
    if (config.fragments == 1) {
      Fragment all{features, true};
      Dataset projected = project(working, all);
      auto published = mondrian_l_diverse(projected, config.k, config.l);
      published.fragment = all;
      result.published.push_back(std::move(published));
    } else {
      result.published = ldiverse_pipeline(working, config.k, config.l,
                                           config.bins, rng);
    }
    result.report.strategy = "ldiv";
  } else {
    Fragmentation fragmentation;
    if (config.fragments == 1) {
      fragmentation.fragments.push_back(Fragment{features, true});
    } else {
      fragmentation =
          config.fragments == 2
              ? construct_fragments(*result.mi)
              : construct_fragments_recursive(*result.mi, config.fragments);
    }
    for (const auto& fragment : fragmentation.fragments) {
      Dataset projected = project(working, fragment);
      AnonymizedFragment anonymized = mondrian_k_anonymize(projected, config.k);
      anonymized.fragment = fragment;
      result.published.push_back(std::move(anonymized));
    }
    if (config.fragments == 1) {
      result.report.strategy = "none";
    } else if (config.strategy == "naive") {
      result.report = naive_enforce(result.published);
    } else if (config.strategy == "dgbe") {
      DependencyGraph graph = build_dependency_graph(result.published, rng);
      result.report = dgbe_enforce(result.published, graph, config.k, rng);
      if (config.fragments > 2) {
        result.report.distorted_class_values +=
            enforce_multiway_fixup(result.published, config.k);
      }
    } else if (config.strategy == "delta") {
      for (auto& fragment : result.published) {
        fragment = to_ec_level(fragment);
      }
      DependencyGraph graph = build_dependency_graph(result.published, rng);
      result.report = delta_enforce(result.published, graph, config.delta,
                                    config.k, rng);
    } else {
      result.report.strategy = config.strategy;
    }
  }

  // Translate fragment feature indices back into the input schema.
  for (auto& fragment : result.published) {
    for (auto& attr : fragment.fragment.feature_indices) {
      attr = original_attr[static_cast<std::size_t>(attr)];
    }
  }
  return result;
}

RunResult run_anonymize(const RunConfig& config) {
  auto schema = load_schema_file(config.schema_path);
  Dataset data = load_csv(config.input_csv, schema);
  RunResult result = run_pipeline(data, config);

  fs::create_directories(config.out_dir);
  write_file((fs::path(config.out_dir) / "manifest.json").string(),
             config_to_json(config).dump(2) + "\n");

  for (std::size_t f = 0; f < result.published.size(); ++f) {
    std::ostringstream csv;
    write_fragment_csv(result.published[f], csv);
    std::string name = "fragment_" + std::to_string(f) + ".csv";
    write_file((fs::path(config.out_dir) / name).string(), csv.str());
    result.fragment_files.push_back(name);
    if (config.debug_segments) {
      std::ostringstream debug_csv;
      write_fragment_csv(result.published[f], debug_csv, true);
      write_file((fs::path(config.out_dir) /
                  ("fragment_" + std::to_string(f) + ".debug.csv"))
                     .string(),
                 debug_csv.str());
    }
  }
  if (result.mi.has_value()) {
    std::ostringstream mi_csv;
    result.mi->write_csv(mi_csv);
    write_file((fs::path(config.out_dir) / "mi_matrix.csv").string(),
               mi_csv.str());
  }

  json meta{{"class", domain_to_json(result.published.front().class_domain)},
            {"fragments", fragments_to_json(result.published)}};
  write_file((fs::path(config.out_dir) / "eq_meta.json").string(),
             meta.dump(2) + "\n");

  json report{{"strategy", result.report.strategy},
              {"distorted_class_values", result.report.distorted_class_values},
              {"removed_class_values", result.report.removed_class_values},
              {"pairs_checked", result.report.pairs_checked}};
  write_file((fs::path(config.out_dir) / "enforcement_report.json").string(),
             report.dump(2) + "\n");
  return result;
}

LoadedRun load_run(const std::string& out_dir) {
  LoadedRun run;
  json manifest = json::parse(
      read_file((fs::path(out_dir) / "manifest.json").string()));
  run.config = config_from_json(manifest);
  json meta =
      json::parse(read_file((fs::path(out_dir) / "eq_meta.json").string()));
  run.published = fragments_from_json(meta);
  return run;
}

std::vector<Violation> verify_run(const std::string& out_dir) {
  LoadedRun run = load_run(out_dir);
  const RunConfig& config = run.config;
  std::vector<Violation> violations;

  // Published CSVs must match the metadata byte for byte.
  for (std::size_t f = 0; f < run.published.size(); ++f) {
    std::string name = "fragment_" + std::to_string(f) + ".csv";
    std::string on_disk = read_file((fs::path(out_dir) / name).string());
    std::ostringstream expected;
    write_fragment_csv(run.published[f], expected);
    if (on_disk != expected.str()) {
      violations.push_back(Violation{name, -1, "eq_meta.json", -1, 0.0, 0.0});
    }
  }

  for (std::size_t f = 0; f < run.published.size(); ++f) {
    for (std::size_t e = 0; e < run.published[f].classes.size(); ++e) {
      int size = run.published[f].classes[e].size();
      if (size < config.k) {
        violations.push_back(Violation{
            "F" + std::to_string(f + 1), static_cast<int>(e), "-", -1,
            static_cast<double>(size), static_cast<double>(config.k)});
      }
    }
  }

  if (config.model == Model::kLDiv) {
    for (std::size_t f = 0; f < run.published.size(); ++f) {
      for (std::size_t e = 0; e < run.published[f].classes.size(); ++e) {
        int distinct = run.published[f].classes[e].distinct_classes();
        if (distinct < config.l) {
          violations.push_back(Violation{
              "F" + std::to_string(f + 1), static_cast<int>(e), "-", -1,
              static_cast<double>(distinct), static_cast<double>(config.l)});
        }
      }
    }
    if (run.published.size() >= 2) {
      auto chunks = collect_chunks(run.published);
      for (std::size_t a = 0; a < chunks.size(); ++a) {
        for (std::size_t b = a + 1; b < chunks.size(); ++b) {
          if (chunks[a].segment != chunks[b].segment ||
              chunks[a].fragment == chunks[b].fragment ||
              chunks[a].segment < 0) {
            continue;
          }
          auto v = verify_ldiv_join(run.published, chunks[a], chunks[b],
                                    config.k);
          violations.insert(violations.end(), v.begin(), v.end());
        }
      }
    }
  } else if (run.published.size() >= 2) {
    if (config.strategy == "delta") {
      for (std::size_t i = 0; i < run.published.size(); ++i) {
        for (std::size_t j = i + 1; j < run.published.size(); ++j) {
          for (std::size_t a = 0; a < run.published[i].classes.size(); ++a) {
            for (std::size_t b = 0; b < run.published[j].classes.size();
                 ++b) {
              const auto& eq_a = run.published[i].classes[a];
              const auto& eq_b = run.published[j].classes[b];
              bool shares = false;
              for (const auto& [value, count] : eq_a.class_counts) {
                if (eq_b.class_counts.count(value)) {
                  shares = true;
                  break;
                }
              }
              if (!shares) continue;
              double value = eta(eq_a, eq_b, config.k);
              if (value < config.delta) {
                violations.push_back(Violation{
                    "F" + std::to_string(i + 1), static_cast<int>(a),
                    "F" + std::to_string(j + 1), static_cast<int>(b), value,
                    config.delta});
              }
            }
          }
        }
      }
    } else {
      for (std::size_t i = 0; i < run.published.size(); ++i) {
        for (std::size_t j = i + 1; j < run.published.size(); ++j) {
          auto v = check_non_reconstructability(
              run.published[i], run.published[j], config.k,
              static_cast<int>(i) + 1, static_cast<int>(j) + 1);
          violations.insert(violations.end(), v.begin(), v.end());
        }
      }
      if (run.published.size() > 2) {
        auto v = check_multiway(run.published, config.k);
        violations.insert(violations.end(), v.begin(), v.end());
      }
    }
  }

  std::ostringstream csv;
  write_violations_csv(violations, csv);
  write_file((fs::path(out_dir) / "violations.csv").string(), csv.str());
  return violations;
}

AuditReport attack_run(const std::string& out_dir,
                       const std::string& original_csv,
                       const std::string& schema_path, int subject_samples,
                       std::uint64_t seed) {
  LoadedRun run = load_run(out_dir);
  auto schema = load_schema_file(schema_path);
  Dataset original = load_csv(original_csv, schema);

  AuditOptions options;
  options.k = run.config.k;
  if (run.config.model == Model::kLDiv) options.l = run.config.l;
  if (run.config.strategy == "delta") options.delta = run.config.delta;
  options.original = &original;
  options.subject_samples = subject_samples;

  std::mt19937_64 rng(seed);
  AuditReport report = audit(run.published, options, rng);

  std::ostringstream text;
  write_audit_text(report, text);
  write_file((fs::path(out_dir) / "audit_report.txt").string(), text.str());
  std::ostringstream vio;
  write_violations_csv(report.all_violations(), vio);
  write_file((fs::path(out_dir) / "audit_violations.csv").string(), vio.str());
  std::ostringstream membership;
  write_membership_csv(report, membership);
  write_file((fs::path(out_dir) / "audit_membership.csv").string(),
             membership.str());
  return report;
}

std::string metrics_csv_header() {
  return "run_id,model,k,l,delta,dims,fragments,strategy,info_loss,"
         "weighted_f,distortions";
}

std::string metrics_csv_row(const MetricsRow& row) {
  std::ostringstream out;
  out << row.run_id << ',' << to_string(row.model) << ',' << row.k << ','
      << row.l << ',' << format_number(row.delta) << ',' << row.dims << ','
      << row.fragments << ',' << row.strategy << ','
      << format_number(row.info_loss) << ',' << format_number(row.weighted_f)
      << ',' << row.distortions;
  return out.str();
}

MetricsRow eval_run(const std::string& out_dir, const std::string& original_csv,
                    const std::string& schema_path, const std::string& test_csv,
                    int neighbors) {
  LoadedRun run = load_run(out_dir);
  auto schema = load_schema_file(schema_path);
  Dataset original = load_csv(original_csv, schema);
  Dataset test = test_csv.empty() ? original : load_csv(test_csv, schema);

  std::vector<std::pair<double, double>> ranges(original.attribute_count(),
                                                {0.0, 0.0});
  for (std::size_t a = 0; a < original.attribute_count(); ++a) {
    ranges[a] = original.range(static_cast<int>(a));
  }

  MetricsRow row;
  row.run_id = fs::path(out_dir).filename().string();
  row.model = run.config.model;
  row.k = run.config.k;
  row.l = run.config.model == Model::kLDiv ? run.config.l : 0;
  row.delta = run.config.strategy == "delta" ? run.config.delta : 0.0;
  row.fragments = static_cast<int>(run.published.size());
  int dims = 0;
  for (const auto& fragment : run.published) {
    dims += static_cast<int>(fragment.fragment.feature_indices.size());
  }
  row.dims = dims;
  row.strategy = run.config.model == Model::kLDiv ? "ldiv"
                                                  : run.config.strategy;
  row.info_loss = information_loss(run.published, ranges);
  row.weighted_f = weighted_f_measure(run.published, test, neighbors);

  json report = json::parse(read_file(
      (fs::path(out_dir) / "enforcement_report.json").string()));
  row.distortions = report.at("distorted_class_values").get<long>() +
                    report.at("removed_class_values").get<long>();
  return row;
}

std::vector<MetricsRow> sweep_run(const SweepConfig& config) {
  if (config.dims.empty() || config.ks.empty()) {
    throw PreconditionError("sweep needs at least one dims and one k value");
  }
  auto schema = load_schema_file(config.schema_path);
  Dataset data = load_csv(config.input_csv, schema);
  auto features = data.feature_indices();

  // One seeded shuffle; dims subsets are nested prefixes of it.
  std::mt19937_64 rng(config.seed);
  for (std::size_t i = features.size(); i > 1; --i) {
    std::swap(features[i - 1], features[static_cast<std::size_t>(rng() % i)]);
  }

  std::vector<std::string> strategies = config.strategies;
  if (config.model == Model::kLDiv) strategies = {"ldiv"};
  if (strategies.empty()) strategies = {"naive", "dgbe", "delta"};

  fs::create_directories(config.out_dir);

  // Grid cells are independent pipeline runs in separate directories, so
  // they execute concurrently; rows stay in grid order.
  struct Cell {
    RunConfig run;
    std::string strategy;
  };
  std::vector<Cell> cells;
  for (int dims : config.dims) {
    if (dims < 1 || dims > static_cast<int>(features.size())) {
      throw PreconditionError("sweep dims out of range: " +
                              std::to_string(dims));
    }
    std::vector<int> subset(features.begin(), features.begin() + dims);
    std::sort(subset.begin(), subset.end());
    for (int k : config.ks) {
      std::vector<std::pair<std::string, int>> variants;
      if (config.include_unfragmented) variants.emplace_back("none", 1);
      for (const auto& strategy : strategies) {
        variants.emplace_back(strategy, config.fragments);
      }
      for (const auto& [strategy, fragment_count] : variants) {
        RunConfig cell;
        cell.input_csv = config.input_csv;
        cell.schema_path = config.schema_path;
        cell.model = config.model;
        cell.k = k;
        cell.l = config.l;
        cell.strategy = config.model == Model::kKAnon && strategy != "ldiv"
                            ? strategy
                            : "none";
        cell.delta = config.delta;
        cell.bins = config.bins;
        cell.seed = config.seed;
        cell.fragments = fragment_count;
        cell.use_features = subset;
        std::string cell_name = "cell_d" + std::to_string(dims) + "_k" +
                                std::to_string(k) + "_" + strategy;
        cell.out_dir = (fs::path(config.out_dir) / cell_name).string();
        cells.push_back(Cell{std::move(cell), strategy});
      }
    }
  }

  std::vector<std::future<MetricsRow>> futures;
  futures.reserve(cells.size());
  for (const auto& cell : cells) {
    futures.push_back(std::async(std::launch::async, [&config, cell] {
      run_anonymize(cell.run);
      MetricsRow row = eval_run(cell.run.out_dir, config.input_csv,
                                config.schema_path, config.test_csv,
                                config.neighbors);
      row.strategy = cell.strategy;
      return row;
    }));
  }
  std::vector<MetricsRow> rows;
  rows.reserve(futures.size());
  for (auto& future : futures) rows.push_back(future.get());

  std::ostringstream csv;
  csv << metrics_csv_header() << '\n';
  for (const auto& row : rows) csv << metrics_csv_row(row) << '\n';
  write_file((fs::path(config.out_dir) / "metrics.csv").string(), csv.str());
  return rows;
}

}  // namespace fraganon
