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

#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "forge/data.hpp"
#include "forge/diversity.hpp"
#include "forge/ensemble.hpp"
#include "forge/error.hpp"
#include "forge/format.hpp"
#include "forge/ga.hpp"
#include "forge/pipeline.hpp"
#include "forge/pool.hpp"
#include "forge/random.hpp"

namespace forge::cli {
namespace {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out_dir = "forge-out";
  bool quiet = false;
};

std::uint64_t parse_seed_text(const std::string& text, const std::string& source) {
  std::size_t used = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-') {
    throw Error(ErrorCode::kConfig, source + " must be an unsigned integer, got '" + text + "'");
  }
  return value;
}

SweepConfig resolve_config(const GlobalOptions& g) {
  SweepConfig config = g.config_path.empty() ? SweepConfig{} : load_sweep_config(g.config_path);
  if (g.seed) config.seed = *g.seed;
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    config.seed = parse_seed_text(env, kSeedEnv);
  }
  config.validate();
  return config;
}

std::vector<int> parse_indices(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    std::size_t used = 0;
    int value = -1;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw Error(ErrorCode::kInvalidSelection, "index '" + item + "' is not an integer");
    }
    out.push_back(value);
  }
  return out;
}

void print_pool(const Pool& pool, std::ostream& out) {
  out << "pool: " << pool.size() << " classifiers, kw " << format_fixed(pool.pool_kw(), 6)
      << ", " << pool.stats().rejections << " rejected of " << pool.stats().attempts
      << " attempts (candidate " << pool.stats().candidate << ")\n";
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structural-diversity ensemble selection for MLP classifier pools", "forge"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  GlobalOptions g;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Master seed (overridden by " +
                                                            std::string(kSeedEnv) + ")");
  app.add_option("--config", g.config_path, "JSON sweep configuration")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress progress output");

  auto* pool_cmd = app.add_subcommand("pool", "Pool operations");
  pool_cmd->require_subcommand(1);
  pool_cmd->fallthrough();
  auto* pool_build = pool_cmd->add_subcommand("build", "Build the max-diversity pool into <out>/pool.bin");
  pool_build->fallthrough();

  std::string calibrate_pool;
  auto* calibrate = app.add_subcommand("calibrate", "Phase-1 search for attainable diversity targets");
  calibrate->add_option("--pool", calibrate_pool, "Saved pool file (built from the config if omitted)")
      ->check(CLI::ExistingFile);
  calibrate->fallthrough();

  auto* sweep = app.add_subcommand("sweep", "Run the full diversity/accuracy sweep");
  sweep->fallthrough();

  std::string eval_pool;
  std::string eval_csv;
  std::string eval_indices;
  std::string eval_label = "label";
  auto* evaluate = app.add_subcommand("evaluate", "Score a saved selection on a CSV file");
  evaluate->add_option("--pool", eval_pool, "Saved pool file")->required();
  evaluate->add_option("--csv", eval_csv, "Raw (unnormalized) CSV to score")->required();
  evaluate->add_option("--indices", eval_indices, "Pool indices, semicolon-separated")->required();
  evaluate->add_option("--label", eval_label, "Label column name")->capture_default_str();
  evaluate->fallthrough();

  SynthParams synth;
  std::string synth_output;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic conflict-style dataset as CSV");
  synth_cmd->add_option("--samples", synth.samples, "Number of rows")->capture_default_str();
  synth_cmd->add_option("--minority", synth.minority_fraction, "Expected positive fraction")
      ->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "Label noise")->capture_default_str();
  synth_cmd->add_option("--output", synth_output, "CSV path (default <out>/synthetic.csv)");
  synth_cmd->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (seed_opt->count() > 0) g.seed = seed_value;
    const auto log = [&](const std::string& line) {
      if (!g.quiet) out << line << '\n';
    };

    if (synth_cmd->parsed()) {
      std::uint64_t seed = g.seed.value_or(0);
      if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
        seed = parse_seed_text(env, kSeedEnv);
      }
      auto rng = make_stream(seed, StreamPurpose::kData);
      const auto data = synth_conflict(synth.samples, synth.minority_fraction, synth.noise, rng);
      std::filesystem::path path = synth_output;
      if (synth_output.empty()) {
        std::filesystem::create_directories(g.out_dir);
        path = std::filesystem::path(g.out_dir) / "synthetic.csv";
      }
      save_csv(data, path);
      log("wrote " + std::to_string(data.size()) + " rows (" + std::to_string(data.positives()) +
          " positive) to " + path.string());
      return kExitOk;
    }

    if (evaluate->parsed()) {
      const auto pool = load_pool(eval_pool);
      const auto raw = load_csv(eval_csv, eval_label);
      Dataset data = raw;
      if (pool.normalization()) data = apply_stats(raw, *pool.normalization()).data;
      const EnsembleSelection selection(parse_indices(eval_indices), pool.size());
      const double kw = kw_variance(pool.descriptors(), selection.indices());
      const double error = ensemble_error(selection, pool, data);
      out << "kw," << format_double(kw) << '\n' << "ensemble_error," << format_double(error) << '\n';
      for (int i : selection.indices()) {
        out << "member " << i << ',' << pool[i].descriptor.to_string() << ','
            << format_double(classification_error(pool[i].network, data)) << '\n';
      }
      return kExitOk;
    }

    const auto config = resolve_config(g);
    const std::filesystem::path out_dir = g.out_dir;

    if (pool_build->parsed()) {
      const auto bundle = prepare_data(config.data, config.seed);
      const auto pool = build_max_diversity_pool(config.pool, bundle, pool_seed(config.seed));
      std::filesystem::create_directories(out_dir);
      save_pool(pool, out_dir / "pool.bin");
      if (!g.quiet) print_pool(pool, out);
      log("wrote " + (out_dir / "pool.bin").string());
      return kExitOk;
    }

    if (calibrate->parsed()) {
      std::optional<Pool> pool;
      if (!calibrate_pool.empty()) {
        pool = load_pool(calibrate_pool);
      } else {
        const auto bundle = prepare_data(config.data, config.seed);
        pool = build_max_diversity_pool(config.pool, bundle, pool_seed(config.seed));
      }
      if (!g.quiet) print_pool(*pool, out);
      const auto calibration = calibrate_targets(*pool, config.probe_count, resolved_ga(config));
      std::filesystem::create_directories(out_dir);
      std::ofstream csv(out_dir / "calibration.csv", std::ios::binary | std::ios::trunc);
      csv << "probe_kw,achieved_kw\n";
      for (std::size_t i = 0; i < calibration.probes.size(); ++i) {
        csv << format_double(calibration.probes[i]) << ',' << format_double(calibration.achieved[i])
            << '\n';
      }
      if (!csv) throw Error(ErrorCode::kIo, "cannot write " + (out_dir / "calibration.csv").string());
      out << "targets:";
      for (const auto& t : calibration.targets) out << ' ' << format_fixed(t.kw, 6);
      out << '\n';
      return kExitOk;
    }

    if (sweep->parsed()) {
      const auto report = run_sweep(config);
      emit_report(report, out_dir);
      log(render_table2(report));
      log("wrote sweep.csv, sweep.json, curve.csv, table2.txt to " + out_dir.string());
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "forge: " << to_string(e.code()) << " error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "forge: " << e.what() << '\n';
    return kExitRuntime;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace forge::cli
