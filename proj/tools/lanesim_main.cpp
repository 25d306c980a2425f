#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lanesim/harness.hpp"

namespace {

std::vector<lanesim::PolicyId> parse_policies(const std::string& csv) {
  std::vector<lanesim::PolicyId> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const std::string token =
        csv.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!token.empty()) {
      auto p = lanesim::policy_from_string(token);
      if (!p) throw lanesim::ConfigError("unknown policy: " + token);
      out.push_back(*p);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lanesim: highway lane-change policy experiments (checkpoint lane-change "
      "counts and collision averages over seeded Monte Carlo iterations)"};

  std::string policy_csv;
  std::string avs_csv;
  int iterations = 100;
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  std::string config_path;
  std::string log_dir;
  bool validate = false;
  bool strict = false;
  int jobs = 1;

  app.add_option("--policy", policy_csv,
                 "Comma list from LC2017,MOBIL,IDM_LC,CONTINUOUS,MLCA,NONE "
                 "(default: all)");
  app.add_option("--avs", avs_csv, "Comma list of tracked-AV counts from {1,3}");
  app.add_option("--iterations", iterations, "Iterations per cell (default 100)");
  app.add_option("--seed", seed, "Base seed; iteration i uses seed+i");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--config", config_path, "Config file (key = value sections)");
  app.add_option("--log-dir", log_dir, "Write per-iteration event logs here");
  app.add_flag("--validate", validate, "Enable MLCA runtime assertion checking");
  app.add_flag("--strict", strict, "Missing figure rows become an error");
  app.add_option("--jobs", jobs, "Parallel workers over iterations");

  CLI11_PARSE(app, argc, argv);

  lanesim::ExperimentPlan plan;
  try {
    if (!config_path.empty()) plan.config = lanesim::load_config(config_path);
    if (!policy_csv.empty()) plan.policies = parse_policies(policy_csv);
    if (!avs_csv.empty()) {
      plan.av_counts.clear();
      std::size_t start = 0;
      while (start <= avs_csv.size()) {
        const auto comma = avs_csv.find(',', start);
        const std::string token = avs_csv.substr(
            start, comma == std::string::npos ? comma : comma - start);
        if (!token.empty()) plan.av_counts.push_back(std::stoi(token));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return lanesim::kExitConfigError;
  }
  plan.iterations = iterations;
  plan.base_seed = seed;
  plan.out_dir = out_dir;
  plan.validation = validate;
  plan.strict = strict;
  plan.jobs = jobs;
  if (!log_dir.empty()) plan.log_dir = log_dir;

  return lanesim::run_experiment(plan);
}
