#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "ltlmcts/bench/config_io.hpp"
#include "ltlmcts/bench/export.hpp"
#include "ltlmcts/planner/planner.hpp"

using namespace ltlmcts;

int main(int argc, char** argv) {
  CLI::App app{"Plan one episode with MCTS over options"};
  std::string scenario_path, config_path, prior_spec = "manual", trace_path, tree_path;
  std::optional<std::uint64_t> seed;
  app.add_option("--scenario", scenario_path, "scenario JSON")->required()->check(CLI::ExistingFile);
  app.add_option("--config", config_path, "planner JSON")->check(CLI::ExistingFile);
  app.add_option("--prior", prior_spec, "uniform, manual or learned:<path>");
  app.add_option("--seed", seed, "world seed; overrides the scenario");
  app.add_option("--trace", trace_path, "trace CSV to write");
  app.add_option("--tree", tree_path, "DOT dump of the first search tree");
  CLI11_PARSE(app, argc, argv);

  try {
    auto scenario = bench::scenario_from_json(bench::read_json_file(scenario_path));
    if (seed) scenario.spawn.seed = *seed;
    bench::RunSettings settings;
    settings.planner.options = scenario.options;
    settings.planner.weights = scenario.weights;
    if (!config_path.empty()) settings = bench::settings_from_json(bench::read_json_file(config_path), settings);
    settings.planner.seed ^= scenario.spawn.seed;
    settings.episode.record_trace = !trace_path.empty();

    const auto prior = prior::prior_from_spec(prior_spec);
    const auto start = sim::spawn_scenario(scenario.spawn);
    std::optional<planner::SearchTree> first_tree;
    const auto result = planner::receding_horizon_run(start, settings.planner, prior, settings.episode,
                                                      [&](const planner::SearchResult& r) {
                                                        if (!first_tree) first_tree = r.tree;
                                                      });
    if (!trace_path.empty()) bench::export_trace(result.trace, trace_path);
    if (!tree_path.empty() && first_tree) bench::dump_tree(*first_tree, tree_path);

    std::string options;
    for (std::size_t i = 0; i < result.executed.size(); ++i) {
      if (i == 0 || result.executed[i] != result.executed[i - 1]) options += options::letter(result.executed[i]);
    }
    std::printf("status %s reward %.3f time %.1f s searches %d options %s\n",
                std::string(sim::to_string(result.status)).c_str(), result.reward,
                static_cast<double>(result.executed.size()) * start.dt, result.searches, options.c_str());
    if (result.status == sim::Status::Collided || result.status == sim::Status::ConstraintViolated) return 2;
    return 0;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
