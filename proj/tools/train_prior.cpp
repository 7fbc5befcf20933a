#include <cstdio>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "ltlmcts/bench/experiment.hpp"

using namespace ltlmcts;

int main(int argc, char** argv) {
  CLI::App app{"Train the option prior by fitted Q-iteration on uniform-prior self-play"};
  std::string out_path, scenario_path, config_path;
  std::uint64_t first_seed = 1001;
  int worlds = 50;
  prior::TrainingConfig tc;
  app.add_option("--out", out_path, "prior JSON to write")->required();
  app.add_option("--first-seed", first_seed, "first self-play world seed");
  app.add_option("--worlds", worlds, "self-play worlds per environment")->check(CLI::PositiveNumber);
  app.add_option("--scenario", scenario_path, "base scenario JSON")->check(CLI::ExistingFile);
  app.add_option("--config", config_path, "planner JSON")->check(CLI::ExistingFile);
  app.add_option("--iterations", tc.iterations, "fitted Q iterations")->check(CLI::PositiveNumber);
  app.add_option("--gamma", tc.gamma, "discount per option")->check(CLI::Range(0.0, 1.0));
  app.add_option("--temperature", tc.temperature, "softmax temperature")->check(CLI::PositiveNumber);
  app.add_option("--ridge", tc.ridge, "ridge penalty")->check(CLI::NonNegativeNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    bench::SelfPlayConfig sp;
    if (!scenario_path.empty()) sp.base = bench::scenario_from_json(bench::read_json_file(scenario_path));
    if (!config_path.empty()) sp.settings = bench::settings_from_json(bench::read_json_file(config_path));
    for (int i = 0; i < worlds; ++i) sp.seeds.push_back(first_seed + static_cast<std::uint64_t>(i));
    const auto data = bench::self_play(sp);
    prior::TrainingReport report;
    const auto prior = prior::train_prior(data, tc, &report);
    prior::save_prior(prior, out_path);
    std::printf("transitions %zu iterations %d early_stopped %d final_loss %.6g\n", data.size(), report.iterations,
                report.early_stopped ? 1 : 0, report.loss.empty() ? 0.0 : report.loss.back());
    return 0;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
