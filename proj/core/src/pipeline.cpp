// Copyright 2026 The ensemble-forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "forge/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "forge/diversity.hpp"
#include "forge/error.hpp"
#include "forge/format.hpp"
#include "forge/random.hpp"

namespace forge {
namespace {

using nlohmann::json;

// --- config parsing ----------------------------------------------------------

void reject_unknown(const json& object, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& item : object.items()) {
    if (!known.contains(item.key())) {
      throw Error(ErrorCode::kParse, "unknown key '" + item.key() + "' in " + where);
    }
  }
}

const json& require_object(const json& value, const std::string& where) {
  if (!value.is_object()) throw Error(ErrorCode::kParse, where + " must be a JSON object");
  return value;
}

template <typename T>
void read(const json& object, const char* key, T& out, const std::string& where) {
  if (!object.contains(key)) return;
  try {
    out = object.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kParse, where + "." + key + " has the wrong type");
  }
}

template <typename T>
void read_optional(const json& object, const char* key, std::optional<T>& out,
                   const std::string& where) {
  if (!object.contains(key)) return;
  if (object.at(key).is_null()) {
    out.reset();
    return;
  }
  T value{};
  read(object, key, value, where);
  out = value;
}

Activation parse_activation(const std::string& name) {
  for (auto a : kAllActivations) {
    if (to_string(a) == name) return a;
  }
  throw Error(ErrorCode::kParse, "unknown activation '" + name + "'");
}

int rate_index(double rate) {
  for (std::size_t i = 0; i < kLearningRates.size(); ++i) {
    if (std::abs(kLearningRates[i] - rate) < 1e-12) return static_cast<int>(i);
  }
  throw Error(ErrorCode::kParse, "learning rate " + format_double(rate) +
                                     " is not one of 0.01, 0.02, 0.03");
}

void parse_data(const json& j, DataSourceConfig& d) {
  const std::string where = "data";
  require_object(j, where);
  reject_unknown(j, {"csv", "label_column", "synthetic", "draw", "positive_share", "split"}, where);
  if (j.contains("csv") && !j.at("csv").is_null()) {
    std::string path;
    read(j, "csv", path, where);
    d.csv = path;
    // A CSV source keeps all rows unless a draw is requested explicitly.
    d.draw.reset();
    d.positive_share.reset();
  }
  read(j, "label_column", d.label_column, where);
  read_optional(j, "draw", d.draw, where);
  read_optional(j, "positive_share", d.positive_share, where);
  if (j.contains("synthetic")) {
    const auto& s = require_object(j.at("synthetic"), "data.synthetic");
    reject_unknown(s, {"samples", "minority_fraction", "noise"}, "data.synthetic");
    read(s, "samples", d.synth.samples, "data.synthetic");
    read(s, "minority_fraction", d.synth.minority_fraction, "data.synthetic");
    read(s, "noise", d.synth.noise, "data.synthetic");
  }
  if (j.contains("split")) {
    const auto& s = require_object(j.at("split"), "data.split");
    reject_unknown(s, {"train", "validation", "test", "order", "stats"}, "data.split");
    read(s, "train", d.counts.train, "data.split");
    read(s, "validation", d.counts.validation, "data.split");
    read(s, "test", d.counts.test, "data.split");
    std::string order = d.order == SplitOrder::kShuffled ? "shuffled" : "sequential";
    read(s, "order", order, "data.split");
    if (order == "shuffled") {
      d.order = SplitOrder::kShuffled;
    } else if (order == "sequential") {
      d.order = SplitOrder::kSequential;
    } else {
      throw Error(ErrorCode::kParse, "data.split.order must be 'shuffled' or 'sequential'");
    }
    std::string scope = d.scope == StatsScope::kTrainOnly ? "train" : "global";
    read(s, "stats", scope, "data.split");
    if (scope == "train") {
      d.scope = StatsScope::kTrainOnly;
    } else if (scope == "global") {
      d.scope = StatsScope::kGlobal;
    } else {
      throw Error(ErrorCode::kParse, "data.split.stats must be 'train' or 'global'");
    }
  }
}

void parse_pool(const json& j, PoolConfig& p) {
  const std::string where = "pool";
  require_object(j, where);
  reject_unknown(j, {"size", "error_cap", "max_attempts", "epochs", "candidates", "threads",
                     "forced_spec"},
                 where);
  read(j, "size", p.size, where);
  read(j, "error_cap", p.error_cap, where);
  read(j, "max_attempts", p.max_attempts, where);
  read(j, "epochs", p.epochs, where);
  read(j, "candidates", p.candidates, where);
  read(j, "threads", p.threads, where);
  if (j.contains("forced_spec") && !j.at("forced_spec").is_null()) {
    const auto& f = require_object(j.at("forced_spec"), "pool.forced_spec");
    reject_unknown(f, {"hidden_nodes", "activation", "learning_rate"}, "pool.forced_spec");
    ClassifierSpec spec;
    std::string activation = std::string(to_string(spec.activation));
    double rate = spec.learning_rate();
    read(f, "hidden_nodes", spec.hidden_nodes, "pool.forced_spec");
    read(f, "activation", activation, "pool.forced_spec");
    read(f, "learning_rate", rate, "pool.forced_spec");
    spec.activation = parse_activation(activation);
    spec.learning_rate_index = rate_index(rate);
    p.forced_spec = spec;
  }
}

void parse_ga(const json& j, GaConfig& g, std::optional<std::uint64_t>& seed) {
  const std::string where = "ga";
  require_object(j, where);
  reject_unknown(j, {"population", "generations", "crossover_rate", "mutation_rate",
                     "tournament_size", "elitism", "ensemble_size", "seed"},
                 where);
  read(j, "population", g.population, where);
  read(j, "generations", g.generations, where);
  read(j, "crossover_rate", g.crossover_rate, where);
  read(j, "mutation_rate", g.mutation_rate, where);
  read(j, "tournament_size", g.tournament_size, where);
  read(j, "elitism", g.elitism, where);
  read(j, "ensemble_size", g.ensemble_size, where);
  read_optional(j, "seed", seed, where);
}

json optional_json(const auto& value) {
  if (!value) return nullptr;
  return json(*value);
}

json config_json(const SweepConfig& c) {
  // nlohmann::ordered_json would keep insertion order; the default json
  // sorts keys, which is just as deterministic.
  json data = {
      {"csv", c.data.csv ? json(c.data.csv->string()) : json(nullptr)},
      {"label_column", c.data.label_column},
      {"synthetic",
       {{"samples", c.data.synth.samples},
        {"minority_fraction", c.data.synth.minority_fraction},
        {"noise", c.data.synth.noise}}},
      {"draw", optional_json(c.data.draw)},
      {"positive_share", optional_json(c.data.positive_share)},
      {"split",
       {{"train", c.data.counts.train},
        {"validation", c.data.counts.validation},
        {"test", c.data.counts.test},
        {"order", c.data.order == SplitOrder::kShuffled ? "shuffled" : "sequential"},
        {"stats", c.data.scope == StatsScope::kTrainOnly ? "train" : "global"}}},
  };
  json pool = {
      {"size", c.pool.size},
      {"error_cap", c.pool.error_cap},
      {"max_attempts", c.pool.max_attempts},
      {"epochs", c.pool.epochs},
      {"candidates", c.pool.candidates},
      {"forced_spec", nullptr},
  };
  if (c.pool.forced_spec) {
    pool["forced_spec"] = {{"hidden_nodes", c.pool.forced_spec->hidden_nodes},
                           {"activation", std::string(to_string(c.pool.forced_spec->activation))},
                           {"learning_rate", c.pool.forced_spec->learning_rate()}};
  }
  json ga = {
      {"population", c.ga.population},
      {"generations", c.ga.generations},
      {"crossover_rate", c.ga.crossover_rate},
      {"mutation_rate", c.ga.mutation_rate},
      {"tournament_size", c.ga.tournament_size},
      {"elitism", c.ga.elitism},
      {"ensemble_size", c.ga.ensemble_size},
      {"seed", optional_json(c.ga_seed)},
  };
  return {{"seed", c.seed},
          {"probe_count", c.probe_count},
          {"data", data},
          {"pool", pool},
          {"ga", ga}};
}

// --- report rendering ------------------------------------------------------

template <typename T, typename F>
std::string join(const std::vector<T>& values, char sep, F&& render) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += sep;
    out += render(values[i]);
  }
  return out;
}

void check_row_kw(const SweepRow& row) {
  std::vector<IdentityDescriptor> descriptors;
  descriptors.reserve(row.descriptors.size());
  for (const auto& d : row.descriptors) descriptors.push_back(IdentityDescriptor::from_string(d));
  const double recomputed = kw_variance(descriptors);
  if (std::abs(recomputed - row.achieved_kw) > kReportKwTolerance) {
    throw Error(ErrorCode::kFormat, "row kw " + format_double(row.achieved_kw) +
                                        " disagrees with its descriptors (" +
                                        format_double(recomputed) + ")");
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path.string() + "' failed");
}

}  // namespace

void SweepConfig::validate() const {
  pool.validate();
  ga.validate();
  if (probe_count < 1) throw Error(ErrorCode::kConfig, "probe_count must be at least 1");
  if (pool.size < ga.ensemble_size) {
    throw Error(ErrorCode::kConfig, "pool size " + std::to_string(pool.size) +
                                        " is smaller than the ensemble size " +
                                        std::to_string(ga.ensemble_size));
  }
  if (data.positive_share && !(*data.positive_share >= 0.0 && *data.positive_share <= 1.0)) {
    throw Error(ErrorCode::kConfig, "positive_share must lie in [0, 1]");
  }
}

SweepConfig parse_sweep_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("config is not valid JSON: ") + e.what());
  }
  require_object(root, "config");
  reject_unknown(root, {"seed", "probe_count", "data", "pool", "ga"}, "config");
  SweepConfig config;
  read(root, "seed", config.seed, "config");
  read(root, "probe_count", config.probe_count, "config");
  if (root.contains("data")) parse_data(root.at("data"), config.data);
  if (root.contains("pool")) parse_pool(root.at("pool"), config.pool);
  if (root.contains("ga")) parse_ga(root.at("ga"), config.ga, config.ga_seed);
  config.validate();
  return config;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_sweep_config(buffer.str());
}

std::string sweep_config_to_json(const SweepConfig& config) {
  return config_json(config).dump(2) + "\n";
}

DatasetBundle prepare_data(const DataSourceConfig& config, std::uint64_t master_seed) {
  auto rng = make_stream(master_seed, StreamPurpose::kData);
  Dataset source = config.csv ? load_csv(*config.csv, config.label_column)
                              : synth_conflict(config.synth.samples,
                                               config.synth.minority_fraction,
                                               config.synth.noise, rng);
  if (config.draw) source = subsample(source, *config.draw, config.positive_share, rng);
  SplitOptions options;
  options.order = config.order;
  options.scope = config.scope;
  options.seed = derive_seed(master_seed, StreamPurpose::kSplit);
  return split(source, config.counts, options);
}

std::uint64_t pool_seed(std::uint64_t master_seed) {
  return derive_seed(master_seed, StreamPurpose::kPool);
}

GaConfig resolved_ga(const SweepConfig& config) {
  GaConfig ga = config.ga;
  ga.seed = config.ga_seed ? *config.ga_seed : derive_seed(config.seed, StreamPurpose::kGa);
  return ga;
}

const SweepRow* SweepReport::min_test_error_row() const {
  const SweepRow* best = nullptr;
  for (const auto& row : rows) {
    if (best == nullptr || row.test_error < best->test_error) best = &row;
  }
  return best;
}

SweepReport run_sweep(const SweepConfig& config) {
  config.validate();
  const auto bundle = prepare_data(config.data, config.seed);
  const auto pool = build_max_diversity_pool(config.pool, bundle, pool_seed(config.seed));
  return run_sweep_on_pool(config, pool, bundle);
}

SweepReport run_sweep_on_pool(const SweepConfig& config, const Pool& pool,
                              const DatasetBundle& bundle) {
  config.validate();
  const auto ga = resolved_ga(config);
  SweepReport report;
  report.config = config;
  report.pool = {pool.size(), pool.pool_kw(), pool.stats().attempts, pool.stats().rejections,
                 pool.stats().candidate};

  // Phase 1 and phase 2 see descriptors only.
  report.calibration = calibrate_targets(pool.descriptors(), config.probe_count, ga);
  for (const auto& [target, seed] : report.calibration.targets) {
    GaConfig run = ga;
    run.seed = seed;
    const auto evolved = evolve(pool.descriptors(), target, run, pool.pool_kw());
    const auto scored = evaluate_selection(evolved.best, pool, bundle);
    SweepRow row;
    row.target_kw = target;
    row.achieved_kw = scored.achieved_kw;
    row.fitness = evolved.fitness.value;
    row.validation_error = scored.validation_error;
    row.test_error = scored.test_error;
    row.indices = evolved.best.indices();
    row.descriptors = scored.descriptors;
    row.member_validation_errors = scored.member_validation_errors;
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.achieved_kw < b.achieved_kw; });
  return report;
}

std::string render_sweep_csv(const SweepReport& report) {
  std::string out = "target_kw,achieved_kw,fitness,val_error,test_error,indices,descriptors\n";
  for (const auto& r : report.rows) {
    out += format_double(r.target_kw) + ',' + format_double(r.achieved_kw) + ',' +
           format_double(r.fitness) + ',' + format_double(r.validation_error) + ',' +
           format_double(r.test_error) + ',' +
           join(r.indices, ';', [](int i) { return std::to_string(i); }) + ',' +
           join(r.descriptors, ';', [](const std::string& s) { return s; }) + '\n';
  }
  return out;
}

std::string render_curve_csv(const SweepReport& report) {
  std::string out = "achieved_kw,val_error,test_error\n";
  for (const auto& r : report.rows) {
    out += format_double(r.achieved_kw) + ',' + format_double(r.validation_error) + ',' +
           format_double(r.test_error) + '\n';
  }
  return out;
}

std::string render_table2(const SweepReport& report) {
  std::string out = "Classification error by structural diversity (majority vote)\n\n";
  out += "kw        val_error  test_error\n";
  for (const auto& r : report.rows) {
    auto kw = format_fixed(r.achieved_kw, 4);
    auto val = format_fixed(r.validation_error, 4);
    kw.resize(10, ' ');
    val.resize(11, ' ');
    out += kw + val + format_fixed(r.test_error, 4) + '\n';
  }
  out += "\npool kw: " + format_fixed(report.pool.pool_kw, 4) + '\n';
  if (const auto* best = report.min_test_error_row()) {
    out += "lowest test error: " + format_fixed(best->test_error, 4) + " at kw " +
           format_fixed(best->achieved_kw, 4) + '\n';
  }
  return out;
}

std::string render_sweep_json(const SweepReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"target_kw", r.target_kw},
                    {"achieved_kw", r.achieved_kw},
                    {"fitness", r.fitness},
                    {"val_error", r.validation_error},
                    {"test_error", r.test_error},
                    {"indices", r.indices},
                    {"descriptors", r.descriptors},
                    {"member_val_errors", r.member_validation_errors}});
  }
  json min_row = nullptr;
  if (const auto* best = report.min_test_error_row()) {
    min_row = {{"achieved_kw", best->achieved_kw}, {"test_error", best->test_error}};
  }
  const json root = {
      {"version", std::string(kVersion)},
      {"seed", report.config.seed},
      {"config", config_json(report.config)},
      {"pool",
       {{"size", report.pool.size},
        {"pool_kw", report.pool.pool_kw},
        {"attempts", report.pool.attempts},
        {"rejections", report.pool.rejections},
        {"candidate", report.pool.candidate}}},
      {"calibration",
       {{"probes", report.calibration.probes},
        {"achieved", report.calibration.achieved},
        {"targets", report.calibration.target_values()}}},
      {"rows", rows},
      {"min_test_error", min_row},
  };
  return root.dump(2) + "\n";
}

void emit_report(const SweepReport& report, const std::filesystem::path& directory) {
  for (const auto& row : report.rows) check_row_kw(row);
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot create '" + directory.string() + "': " + ec.message());
  }
  write_file(directory / "sweep.csv", render_sweep_csv(report));
  write_file(directory / "sweep.json", render_sweep_json(report));
  write_file(directory / "curve.csv", render_curve_csv(report));
  write_file(directory / "table2.txt", render_table2(report));
}

}  // namespace forge
