// Copyright 2026 The Mutafuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.
//
//   mutafuzz targets
//   mutafuzz collect --target builtin:mini_xml --seed-dir seeds --budget-execs 50000
//   mutafuzz train   --dataset out/fuzz-instruct.jsonl --model-out out/model.bin
//   mutafuzz fuzz    --target builtin:magic_header --oracle count --model out/model.bin ...
//   mutafuzz report  --in out
//
// Exit codes: 0 success, 1 usage/configuration error, 2 campaign failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mutafuzz/campaign.h"
#include "mutafuzz/error.h"

namespace {

using mutafuzz::CampaignConfig;

struct CommonFlags {
  std::string target;
  std::string seed_dir;
  std::string output_dir = "out";
  std::string scratch_dir;
  uint64_t budget_execs = 0;
  double budget_seconds = 0.0;
  uint64_t rng_seed = 1;
  int timeout_ms = 1000;
  uint64_t memory_cap_mb = 0;
  int k_max = 16;
  double top_p = 0.9;
  double temperature = 1.0;
  double alpha = 0.5;
  int workers = 1;
  uint64_t gain_bucket = 1000;
  uint64_t byte_cap = 2048;
  double split_ratio = 0.9;
  uint64_t max_input_kb = 1024;
  std::string instruction = std::string(mutafuzz::kDefaultInstruction);
};

void AddCommonFlags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--target", flags->target,
                  "Target: 'builtin:NAME' or 'ext:CMD ... @@ ...'")
      ->required();
  cmd->add_option("--seed-dir", flags->seed_dir,
                  "Directory with initial seed files")
      ->required();
  cmd->add_option("--out", flags->output_dir,
                  "Output directory (queue/, crashes/, reports, datasets)");
  cmd->add_option("--scratch-dir", flags->scratch_dir,
                  "Scratch directory for external-target temp files "
                  "(default: $MUTAFUZZ_WORKDIR or the system temp dir)");
  cmd->add_option("--budget-execs", flags->budget_execs,
                  "Stop after this many target executions (0 = unlimited)");
  cmd->add_option("--budget-seconds", flags->budget_seconds,
                  "Stop after this much wall time (0 = unlimited)");
  cmd->add_option("--rng-seed", flags->rng_seed, "Campaign random seed");
  cmd->add_option("--timeout-ms", flags->timeout_ms,
                  "Per-execution timeout for external targets");
  cmd->add_option("--memory-cap-mb", flags->memory_cap_mb,
                  "Address-space cap for external targets (0 = none)");
  cmd->add_option("--k-max", flags->k_max, "Mutation pairs per plan");
  cmd->add_option("--top-p", flags->top_p, "Nucleus sampling mass");
  cmd->add_option("--temperature", flags->temperature,
                  "Sampling temperature for the count oracle");
  cmd->add_option("--alpha", flags->alpha,
                  "Laplace smoothing for the count oracle");
  cmd->add_option("--workers", flags->workers,
                  "Parallel workers (>1 forfeits exact replay)");
  cmd->add_option("--gain-bucket", flags->gain_bucket,
                  "Input-gain series bucket width, in executions");
  cmd->add_option("--byte-cap", flags->byte_cap,
                  "Seed bytes kept per dataset sample");
  cmd->add_option("--split-ratio", flags->split_ratio,
                  "Train share of the dataset split");
  cmd->add_option("--max-input-kb", flags->max_input_kb,
                  "Largest seed file accepted, in KiB");
  cmd->add_option("--instruction", flags->instruction,
                  "Instruction template for dataset samples "
                  "({program} is substituted)");
}

CampaignConfig BuildConfig(const CommonFlags& flags) {
  CampaignConfig config;
  config.target = mutafuzz::TargetSpec::Parse(flags.target);
  config.target.timeout = std::chrono::milliseconds(flags.timeout_ms);
  if (flags.memory_cap_mb > 0) {
    config.target.memory_cap_bytes = flags.memory_cap_mb * 1024 * 1024;
  }
  config.seed_dir = flags.seed_dir;
  config.output_dir = flags.output_dir;
  if (!flags.scratch_dir.empty()) {
    config.scratch_dir = flags.scratch_dir;
  } else if (const char* env = std::getenv("MUTAFUZZ_WORKDIR");
             env != nullptr && *env != '\0') {
    config.scratch_dir = env;
  }
  config.budget_execs = flags.budget_execs;
  config.budget_seconds = flags.budget_seconds;
  config.rng_seed = flags.rng_seed;
  config.oracle.k_max = flags.k_max;
  config.oracle.top_p = flags.top_p;
  config.oracle.temperature = flags.temperature;
  config.oracle.alpha = flags.alpha;
  config.workers = flags.workers;
  config.gain_bucket = flags.gain_bucket;
  config.byte_cap = flags.byte_cap;
  config.split_ratio = flags.split_ratio;
  config.max_input_bytes = flags.max_input_kb * 1024;
  config.instruction = flags.instruction;
  return config;
}

std::string ReadFileOrDie(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw mutafuzz::InvalidConfig("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int RunCampaignCommand(const CampaignConfig& config) {
  const mutafuzz::CampaignResult result = mutafuzz::RunCampaign(config);
  std::cout << mutafuzz::RenderTable(result.stats);
  if (!config.output_dir.empty()) {
    std::cout << "\nartifacts written to " << config.output_dir.string()
              << "/\n";
  }
  return 0;
}

int RunTrain(const std::string& dataset_path, const std::string& model_out) {
  const auto dataset = mutafuzz::FromJsonLines(ReadFileOrDie(dataset_path));
  const mutafuzz::CountModel model =
      mutafuzz::TrainCountModelFromDataset(dataset);
  model.Save(model_out);
  std::cout << "trained on " << dataset.size() << " samples ("
            << model.total() << " pairs); model written to " << model_out
            << "\n";
  return 0;
}

int RunReport(const std::string& report_path, const std::string& format) {
  nlohmann::json report;
  try {
    report = nlohmann::json::parse(ReadFileOrDie(report_path));
  } catch (const nlohmann::json::exception& e) {
    throw mutafuzz::InvalidConfig("cannot parse " + report_path + ": " +
                                  e.what());
  }
  if (format == "json") {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << mutafuzz::RenderTableFromJson(report);
  }
  return 0;
}

int RunTargets() {
  for (const auto& target : mutafuzz::ListBuiltinTargets()) {
    std::printf("%-20s %3zu edges  %s\n", std::string(target.name).c_str(),
                target.edge_count, std::string(target.description).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mutafuzz: coverage-guided fuzzer with pluggable mutation "
               "oracles"};
  app.require_subcommand(1);
  // Options for a subcommand live in a section named after it, e.g. [fuzz].
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.fallthrough(true);

  CommonFlags collect_flags;
  CLI::App* collect = app.add_subcommand(
      "collect", "Fuzz with the uniform oracle and emit a mutation dataset");
  AddCommonFlags(collect, &collect_flags);

  std::string train_dataset;
  std::string train_model_out = "out/model.bin";
  CLI::App* train = app.add_subcommand(
      "train", "Fit the count model on a collected dataset");
  train->add_option("--dataset", train_dataset,
                    "Dataset file (fuzz-instruct.jsonl)")
      ->required();
  train->add_option("--model-out", train_model_out, "Where to write the model");

  CommonFlags fuzz_flags;
  std::string fuzz_oracle = "uniform";
  std::string fuzz_model;
  std::string fuzz_endpoint;
  int fuzz_remote_timeout_ms = 1000;
  CLI::App* fuzz =
      app.add_subcommand("fuzz", "Run a fuzzing campaign against a target");
  AddCommonFlags(fuzz, &fuzz_flags);
  fuzz->add_option("--oracle", fuzz_oracle, "uniform, count or remote");
  fuzz->add_option("--model", fuzz_model, "Model file for the count oracle");
  fuzz->add_option("--endpoint", fuzz_endpoint,
                   "http:// endpoint for the remote oracle");
  fuzz->add_option("--remote-timeout-ms", fuzz_remote_timeout_ms,
                   "Remote oracle request timeout");

  std::string report_in = "out";
  std::string report_file;
  std::string report_format = "table";
  CLI::App* report = app.add_subcommand("report", "Render a campaign report");
  report->add_option("--in", report_in,
                     "Output directory containing report.json");
  report->add_option("--report", report_file,
                     "Explicit report.json path (overrides --in)");
  report->add_option("--format", report_format, "table or json")
      ->check(CLI::IsMember({"table", "json"}));

  app.add_subcommand("targets", "List built-in targets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (collect->parsed()) {
      return RunCampaignCommand(BuildConfig(collect_flags));
    }
    if (train->parsed()) {
      return RunTrain(train_dataset, train_model_out);
    }
    if (fuzz->parsed()) {
      CampaignConfig config = BuildConfig(fuzz_flags);
      config.oracle_kind = mutafuzz::OracleKindFromName(fuzz_oracle);
      config.model_path = fuzz_model;
      config.endpoint = fuzz_endpoint;
      config.remote_timeout_ms = fuzz_remote_timeout_ms;
      return RunCampaignCommand(config);
    }
    if (report->parsed()) {
      const std::string path =
          report_file.empty() ? report_in + "/report.json" : report_file;
      return RunReport(path, report_format);
    }
    return RunTargets();
  } catch (const mutafuzz::InvalidConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "campaign failed: " << e.what() << "\n";
    return 2;
  }
}
