#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dot_grammar.hpp"
#include "ltlmcts/bench/config_io.hpp"
#include "ltlmcts/bench/experiment.hpp"
#include "ltlmcts/bench/export.hpp"

using namespace ltlmcts;
using namespace ltlmcts::bench;

namespace {

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

std::string csv_of(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results_csv(out, rows);
  return out.str();
}

ExperimentConfig grid(Environment env, int worlds) {
  ExperimentConfig cfg;
  cfg.environment = env;
  cfg.variants = {{LowLevel::ManualPolicy, "none"}, {LowLevel::OptionsMcts, "uniform"}, {LowLevel::OptionsMcts, "manual"}};
  cfg.n_worlds = worlds;
  cfg.seeds = ExperimentConfig::default_seeds(worlds);
  return cfg;
}

ResultRow awkward_row() {
  ResultRow r;
  r.variant = "options_mcts/learned";
  r.low_level = "options_mcts";
  r.prior = "learned";
  r.environment = "STOPPED_CAR_AHEAD";
  r.n_worlds = 100;
  r.constraint_violations = 1;
  r.collisions = 2;
  r.total_failures = 4;
  r.avg_reward = 0.1 + 0.2;
  r.std_reward = 1.0 / 3.0;
  return r;
}

}  // namespace

TEST_CASE("one empty world planned with the manual prior succeeds") {
  ExperimentConfig cfg;
  cfg.variants = {{LowLevel::OptionsMcts, "manual"}};
  cfg.n_worlds = 1;
  cfg.seeds = {6};  // seed % 6 == 0 other vehicles
  const auto r = run_experiment(cfg);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.episodes[0].n_vehicles == 0);
  CHECK(r.rows[0].total_failures == 0);
  CHECK(r.rows[0].avg_reward > 0.0);
}

TEST_CASE("the scripted baseline never collides without the stopped car") {
  ExperimentConfig cfg;
  cfg.variants = {{LowLevel::ManualPolicy, "none"}};
  cfg.seeds = ExperimentConfig::default_seeds(100);
  const auto r = run_experiment(cfg);
  CHECK(r.rows[0].collisions == 0);
  CHECK(r.rows[0].constraint_violations == 0);
}

TEST_CASE("batches are deterministic and independent of the worker count") {
  const auto cfg = grid(Environment::StoppedCarAhead, 8);
  const auto a = run_experiment(cfg, {1, false});
  const auto b = run_experiment(cfg, {1, false});
  const auto c = run_experiment(cfg, {3, false});
  CHECK(a.rows == b.rows);
  CHECK(csv_of(a.rows) == csv_of(c.rows));
  std::ostringstream ma, mc;
  write_seed_manifest(ma, cfg, a.episodes);
  write_seed_manifest(mc, cfg, c.episodes);
  CHECK(ma.str() == mc.str());
  CHECK(count_lines(ma.str()) == 1 + 3 * 8);
}

TEST_CASE("every episode lands in exactly one outcome class") {
  CHECK(classify(sim::Status::GoalReached) == EpisodeOutcome::Success);
  CHECK(classify(sim::Status::Collided) == EpisodeOutcome::Collision);
  CHECK(classify(sim::Status::ConstraintViolated) == EpisodeOutcome::ConstraintViolation);
  CHECK(classify(sim::Status::Timeout) == EpisodeOutcome::Timeout);

  const auto cfg = grid(Environment::StoppedCarAhead, 10);
  const auto r = run_experiment(cfg);
  for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
    const auto& row = r.rows[v];
    int successes = 0, timeouts = 0;
    for (const auto& e : r.episodes) {
      if (e.variant != v) continue;
      successes += e.outcome == EpisodeOutcome::Success;
      timeouts += e.outcome == EpisodeOutcome::Timeout;
    }
    CHECK(row.n_worlds == 10);
    CHECK(successes + row.collisions + row.constraint_violations + timeouts == row.n_worlds);
    CHECK(row.total_failures == row.n_worlds - successes);
  }
}

TEST_CASE("reward statistics cover failures too") {
  ExperimentConfig cfg;
  cfg.variants = {{LowLevel::OptionsMcts, "uniform"}};
  cfg.seeds = {1, 2, 3};
  cfg.n_worlds = 3;
  std::vector<EpisodeRecord> eps(3);
  eps[0].outcome = EpisodeOutcome::Success;
  eps[0].reward = 390.0;
  eps[1].outcome = EpisodeOutcome::Collision;
  eps[1].reward = -210.0;
  eps[2].outcome = EpisodeOutcome::Timeout;
  eps[2].reward = 180.0;
  const auto row = aggregate(cfg, 0, eps);
  CHECK(row.total_failures == 2);
  CHECK(row.collisions == 1);
  CHECK(row.avg_reward == doctest::Approx(120.0));
  CHECK(row.std_reward == doctest::Approx(std::sqrt((270.0 * 270.0 + 330.0 * 330.0 + 60.0 * 60.0) / 2.0)));
}

TEST_CASE("an episode that throws is logged and counted, not fatal") {
  auto cfg = grid(Environment::NoStoppedCar, 2);
  cfg.variants = {{LowLevel::OptionsMcts, "uniform"}, {LowLevel::OptionsMcts, "manual"}};
  cfg.base.spawn.dt = 0.07;  // the replan period is no longer a whole number of steps
  const auto r = run_experiment(cfg);
  REQUIRE(r.episodes.size() == 4);
  for (const auto& e : r.episodes) {
    CHECK(e.error);
    CHECK(e.outcome == EpisodeOutcome::Timeout);
  }
  for (const auto& row : r.rows) CHECK(row.total_failures == 2);
}

TEST_CASE("results CSV: fixed header, one line per row, exact round trip") {
  CHECK(count_lines(csv_of({})) == 1);
  CHECK(csv_of({}).rfind("variant,low_level,prior,environment,n_worlds,constraint_violations,collisions,"
                         "total_failures,avg_reward,std_reward\n",
                         0) == 0);
  auto second = awkward_row();
  second.variant = "manual_policy/none";
  second.avg_reward = -2233.6523578370779;
  second.std_reward = 0.0;
  const std::vector<ResultRow> rows{awkward_row(), second};
  const auto text = csv_of(rows);
  CHECK(count_lines(text) == 3);
  std::istringstream in(text);
  CHECK(read_results_csv(in) == rows);

  std::istringstream bad("variant,oops\n");
  CHECK_THROWS_AS(read_results_csv(bad), ExportError);
  CHECK_THROWS_AS(export_results(rows, "/nonexistent-dir/results.csv"), ExportError);
  CHECK(seed_manifest_path("out/results.csv") == std::filesystem::path("out/results.seeds.csv"));
}

TEST_CASE("trace CSV round trip is exact and feeds the offline checker") {
  auto cfg = grid(Environment::NoStoppedCar, 3);
  cfg.variants = {{LowLevel::OptionsMcts, "manual"}};
  const auto r = run_experiment(cfg, {1, true});
  for (const auto& e : r.episodes) {
    REQUIRE_FALSE(e.trace.empty());
    std::ostringstream out;
    write_trace_csv(out, e.trace);
    std::istringstream in(out.str());
    const auto back = read_trace_csv(in);
    CHECK(back == e.trace);
    const auto labels = actor_labels(back, 0);
    for (const auto& m : planner::road_rules().monitors) {
      const auto v = ltl::check_trace(*m, labels);
      CHECK((e.outcome == EpisodeOutcome::ConstraintViolation) == (v.kind == ltl::MonitorVerdict::Kind::Violated));
    }
  }
}

TEST_CASE("tree dumps are valid DOT with the agreed labels and colours") {
  planner::SearchTree tree;
  auto& nodes = tree.nodes();
  nodes.resize(2);
  planner::Edge d;
  d.option = options::OptionId::Default;
  d.expanded = true;
  d.visits = 3;
  d.child = 1;
  planner::Edge s;
  s.option = options::OptionId::Stop;
  s.expanded = true;
  s.visits = 1;
  s.outcome = planner::Outcome::Violated;
  nodes[0].edges = {d, s};

  std::ostringstream out;
  write_tree_dot(out, tree);
  const auto g = testing_support::DotReader(out.str()).parse();
  CHECK(g.directed);
  CHECK(g.nodes.size() == 3);
  CHECK(g.edges.size() == 2);
  CHECK(g.nodes.at("n0").at("label") == "0");
  CHECK(g.nodes.at("n1").at("label") == "D");
  bool red_stop = false;
  for (const auto& [id, attrs] : g.nodes) {
    if (attrs.count("label") && attrs.at("label") == "S") red_stop = attrs.count("color") && attrs.at("color") == "red";
  }
  CHECK(red_stop);

  nodes[0].edges[1].outcome = planner::Outcome::GoalReached;
  std::ostringstream green;
  write_tree_dot(green, tree);
  CHECK(green.str().find("color=green") != std::string::npos);

  // A real search tree parses too.
  sim::ScenarioConfig sc;
  sc.seed = 4;
  sc.n_vehicles = 4;
  const auto w = sim::spawn_scenario(sc);
  const auto res = planner::search(w, planner::initial_monitor_states(planner::road_rules(), sim::label(w, 0)), {},
                                   planner::PlannerConfig{}, prior::OptionPrior::uniform());
  std::ostringstream big;
  write_tree_dot(big, res.tree);
  const auto gb = testing_support::DotReader(big.str()).parse();
  CHECK(gb.edges.size() + 1 == gb.nodes.size());
}

TEST_CASE("scenario and planner files are read strictly") {
  const auto s = scenario_from_json(nlohmann::json::parse(R"({"seed": 9, "n_vehicles": 3, "stopped_car": true,
      "speed_limit_mps": 10.0, "dt": 0.05, "reward_weights": {"e_y": 2.0}, "options": {"k_v": 0.5}})"));
  CHECK(s.spawn.seed == 9);
  CHECK(s.spawn.n_vehicles == 3);
  CHECK(s.spawn.stopped_car);
  CHECK(s.spawn.env.speed_limit == 10.0);
  CHECK(s.spawn.dt == 0.05);
  CHECK(s.weights.e_y == 2.0);
  CHECK(s.weights.e_theta == features::RewardWeights{}.e_theta);
  CHECK(s.options.k_v == 0.5);
  const auto again = scenario_from_json(to_json(s));
  CHECK(again.spawn.env == s.spawn.env);
  CHECK(again.weights.e_y == 2.0);

  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"seeds": 1})")), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"n_vehicles": 9})")), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"dt": -1})")), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"reward_weights": {"e_y": -1}})")), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"seed": "x"})")), ConfigError);

  const auto st = settings_from_json(nlohmann::json::parse(R"({"iterations": 50, "exploration": 2.0})"));
  CHECK(st.planner.iterations == 50);
  CHECK(st.planner.exploration == 2.0);
  CHECK(settings_from_json(to_json(st)).planner.iterations == 50);
  CHECK_THROWS_AS(settings_from_json(nlohmann::json::parse(R"({"widening": 1.5})")), ConfigError);
  CHECK_THROWS_AS(settings_from_json(nlohmann::json::parse(R"({"depth": 3})")), ConfigError);
}

TEST_CASE("experiment files are validated") {
  const auto cfg = experiment_from_json(nlohmann::json::parse(R"({"environment": "STOPPED_CAR_AHEAD",
      "variants": [{"low_level": "manual_policy"}, {"low_level": "options_mcts", "prior": "uniform"}],
      "n_worlds": 3, "planner": {"iterations": 20}})"));
  CHECK(cfg.environment == Environment::StoppedCarAhead);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(cfg.settings.planner.iterations == 20);
  CHECK(world_for_seed(cfg, 11).n_vehicles == 5);
  CHECK(world_for_seed(cfg, 11).stopped_car);

  CHECK_THROWS_AS(experiment_from_json(nlohmann::json::parse(R"({"variants": []})")), ConfigError);
  CHECK_THROWS_AS(experiment_from_json(nlohmann::json::parse(
                      R"({"variants": [{"low_level": "options_mcts", "prior": "uniform"}], "n_worlds": 2, "seeds": [1]})")),
                  ConfigError);
  CHECK_THROWS_AS(experiment_from_json(nlohmann::json::parse(R"({"variants": [{"low_level": "options_mcts"}]})")),
                  ConfigError);
  CHECK_THROWS_AS(experiment_from_json(
                      nlohmann::json::parse(R"({"variants": [{"low_level": "manual_policy", "prior": "manual"}]})")),
                  ConfigError);
  CHECK_THROWS_AS(experiment_from_json(nlohmann::json::parse(
                      R"({"environment": "RAIN", "variants": [{"low_level": "manual_policy"}]})")),
                  ConfigError);
}
