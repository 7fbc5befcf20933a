#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ltlmcts/features/reward.hpp"
#include "ltlmcts/ltl/monitor.hpp"
#include "ltlmcts/options/options.hpp"
#include "ltlmcts/prior/prior.hpp"
#include "ltlmcts/sim/world.hpp"

namespace ltlmcts::planner {

using options::kOptionCount;
using options::OptionId;

// The rules of the road every plan is checked against.
struct Specification {
  std::vector<ltl::Formula> formulas;
  std::vector<std::shared_ptr<const ltl::MonitorAutomaton>> monitors;
};

const Specification& road_rules();

// Monitor states for one run, one per formula of the specification.
struct MonitorStates {
  std::vector<ltl::MonitorAutomaton::State> states;

  bool violated(const Specification& spec) const;
  void feed(const Specification& spec, ltl::Label l);
  friend bool operator==(const MonitorStates&, const MonitorStates&) = default;
};

MonitorStates initial_monitor_states(const Specification& spec, ltl::Label first);

struct PlannerConfig {
  int iterations = 100;
  double horizon = 10.0;   // s of simulated time below the root
  double exploration = 1.25;
  double value_scale = 1.0;   // mean values are divided by this inside the PUCT score
  double widening = 0.5;
  int rollout_options = 10;  // options per leaf rollout at most
  std::uint64_t seed = 0;
  options::OptionsConfig options;
  features::RewardWeights weights;

  void validate() const;
};

enum class Outcome : std::uint8_t { Running, Collided, Violated, Inapplicable, GoalReached };

std::string_view to_string(Outcome o);

struct OptionResult {
  sim::WorldState world;
  MonitorStates monitors;
  sim::Control last_control;
  double credited = 0.0;  // goal reward earned since the root; forfeited on failure
  double reward = 0.0;    // costs, goal events, option bonus and any failure penalty
  double elapsed = 0.0;
  Outcome outcome = Outcome::Running;
  bool goal = false;

  bool terminal() const { return outcome != Outcome::Running; }
};

// Runs option `o` from `w` until it terminates, fails or `budget` seconds pass.
// A failure costs the penalty plus any goal reward `credited` so far, so a
// failed path scores like a failed episode.
OptionResult simulate_option(const sim::WorldState& w, const MonitorStates& monitors,
                             sim::Control prev_control, double credited, OptionId o, double budget,
                             const PlannerConfig& cfg, const Specification& spec = road_rules());

struct Edge {
  OptionId option = OptionId::Default;
  double prior = 0.0;
  int visits = 0;
  double total = 0.0;
  // Filled on first expansion; transitions are deterministic.
  double reward = 0.0;
  Outcome outcome = Outcome::Running;
  bool goal = false;
  std::optional<std::size_t> child;  // absent for terminal results and the horizon
  bool expanded = false;
  sim::WorldState end;  // world when the option stopped

  double mean() const { return visits > 0 ? total / visits : 0.0; }
};

struct Node {
  sim::WorldState world;
  MonitorStates monitors;
  sim::Control last_control;
  double credited = 0.0;
  double depth = 0.0;  // s below the root
  int visits = 1;      // its own expansion plus one per edge visit
  options::OptionSet applicable = 0;
  prior::Distribution priors{};
  std::vector<Edge> edges;  // in expansion order
};

// Arena-allocated search tree; node 0 is the root.
class SearchTree {
 public:
  std::vector<Node>& nodes() { return nodes_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& root() const { return nodes_.front(); }

 private:
  std::vector<Node> nodes_;
};

// Q + C * P / (1 + N)
inline double puct_score(double q, double prior, int visits, double exploration) {
  return q + exploration * prior / (1.0 + visits);
}

// PUCT over the expanded edges of `node`; ties go to the lowest ordinal.
std::size_t select_edge(const Node& node, double exploration, double value_scale = 1.0);
std::size_t widening_limit(int visits, double alpha);
// Adds the highest-prior unexpanded applicable option when the widening rule
// allows; returns its edge index.
std::optional<std::size_t> maybe_widen(Node& node, double alpha);

struct RootStat {
  bool expanded = false;
  int visits = 0;
  double mean = 0.0;
  double prior = 0.0;
};

struct SearchResult {
  std::vector<OptionId> plan;
  std::array<RootStat, kOptionCount> root{};
  SearchTree tree;
};

SearchResult search(const sim::WorldState& root, const MonitorStates& monitors, sim::Control last_control,
                    const PlannerConfig& cfg, const prior::OptionPrior& prior,
                    const Specification& spec = road_rules());

struct TraceRow {
  double t = 0.0;
  std::size_t actor = 0;
  sim::VehicleState vehicle;
  int lane = 0;
  std::uint32_t predicates = 0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct EpisodeResult {
  sim::Status status = sim::Status::Running;
  double reward = 0.0;
  features::Goals goals;
  std::vector<TraceRow> trace;
  std::vector<ltl::Label> agent_labels;
  std::vector<OptionId> executed;  // option running at each step
  int searches = 0;
  bool violated = false;
  bool collided = false;
};

struct EpisodeConfig {
  double replan_period = 1.0;
  double timeout = 60.0;
  bool record_trace = true;
};

// Observer for each search made during an episode, e.g. to collect training data.
using SearchObserver = std::function<void(const SearchResult&)>;

EpisodeResult receding_horizon_run(const sim::WorldState& start, const PlannerConfig& cfg,
                                   const prior::OptionPrior& prior, const EpisodeConfig& episode = {},
                                   const SearchObserver& observer = {},
                                   const Specification& spec = road_rules());

void append_trace(std::vector<TraceRow>& rows, const sim::WorldState& w);

// One transition per expanded edge of the tree. Edges cut by the horizon
// bootstrap from the world they ended in.
void collect_transitions(const SearchTree& tree, const options::OptionsConfig& cfg, prior::EpisodeDataset& out);

}  // namespace ltlmcts::planner
