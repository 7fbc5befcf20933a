#include "ltlmcts/planner/planner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "ltlmcts/features/features.hpp"
#include "ltlmcts/ltl/parser.hpp"

namespace ltlmcts::planner {

namespace {

constexpr double kTimeEps = 1e-9;

std::shared_ptr<const ltl::MonitorAutomaton> make_monitor(const ltl::Formula& f) {
  return std::make_shared<const ltl::MonitorAutomaton>(ltl::build_monitor(f, sim::world_alphabet()));
}

// Option-local constraint monitors, built once.
const ltl::MonitorAutomaton& option_monitor(OptionId o) {
  static const auto monitors = [] {
    std::array<std::shared_ptr<const ltl::MonitorAutomaton>, kOptionCount> m;
    for (auto id : options::kAllOptions) m[options::ordinal(id)] = make_monitor(options::option_constraint(id));
    return m;
  }();
  return *monitors[options::ordinal(o)];
}

bool rejecting(const ltl::MonitorAutomaton& m, ltl::MonitorAutomaton::State s) {
  return m.classify(s) == ltl::StateClass::RejectingTrap;
}

}  // namespace

const Specification& road_rules() {
  static const Specification spec = [] {
    Specification s;
    const auto& ap = sim::world_alphabet();
    s.formulas.push_back(ltl::parse("G (in_stop_region -> (in_stop_region U has_stopped_in_stop_region))", ap));
    s.formulas.push_back(ltl::parse(
        "G ((in_intersection -> intersection_is_clear) & (!in_intersection U higher_priority))", ap));
    for (const auto& f : s.formulas) s.monitors.push_back(make_monitor(f));
    return s;
  }();
  return spec;
}

bool MonitorStates::violated(const Specification& spec) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (rejecting(*spec.monitors[i], states[i])) return true;
  }
  return false;
}

void MonitorStates::feed(const Specification& spec, ltl::Label l) {
  for (std::size_t i = 0; i < states.size(); ++i) states[i] = spec.monitors[i]->step(states[i], l);
}

MonitorStates initial_monitor_states(const Specification& spec, ltl::Label first) {
  MonitorStates m;
  for (const auto& a : spec.monitors) m.states.push_back(a->initial());
  m.feed(spec, first);
  return m;
}

void PlannerConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(widening > 0.0 && widening < 1.0)) throw std::invalid_argument("widening exponent must lie in (0, 1)");
  if (!(exploration >= 0.0)) throw std::invalid_argument("exploration constant must be non-negative");
  if (rollout_options < 0) throw std::invalid_argument("rollout depth must be non-negative");
  if (!(value_scale > 0.0)) throw std::invalid_argument("value scale must be positive");
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Running: return "running";
    case Outcome::Collided: return "collided";
    case Outcome::Violated: return "violated";
    case Outcome::Inapplicable: return "inapplicable";
    case Outcome::GoalReached: return "goal";
  }
  return "?";
}

OptionResult simulate_option(const sim::WorldState& w, const MonitorStates& monitors, sim::Control prev_control,
                             double credited, OptionId o, double budget, const PlannerConfig& cfg,
                             const Specification& spec) {
  OptionResult r{w, monitors, prev_control, credited};
  if (w.status != sim::Status::Running || !options::applicable(o, w, cfg.options)) {
    r.outcome = Outcome::Inapplicable;
    r.reward = features::kFailurePenalty - r.credited;
    r.credited = 0.0;
    return r;
  }
  auto ctx = options::begin_option(o, w, cfg.options);
  const auto& local = option_monitor(o);
  auto local_state = local.step(local.initial(), sim::label(w, 0));
  const auto spec_opt = options::option_spec(o, cfg.options);

  int steps = 0;
  do {
    r.world.actors[0].lane = ctx.target_lane;
    const auto u = options::option_control(ctx, r.world, cfg.options);
    r.reward += features::step_reward(r.world, u, r.last_control, cfg.weights);
    const bool had_stopped = r.world.actors[0].has_stopped_in_stop_region;
    r.world = sim::advance_world(r.world, u);
    r.last_control = u;
    ++steps;
    r.elapsed = steps * w.dt;

    const auto l = sim::label(r.world, 0);
    r.monitors.feed(spec, l);
    local_state = local.step(local_state, l);
    if (r.world.status == sim::Status::Collided) {
      r.outcome = Outcome::Collided;
    } else if (r.monitors.violated(spec) || rejecting(local, local_state)) {
      r.outcome = Outcome::Violated;
    }
    if (r.outcome != Outcome::Running) {
      r.reward += features::kFailurePenalty - r.credited;
      r.credited = 0.0;
      return r;
    }
    if (!had_stopped && r.world.actors[0].has_stopped_in_stop_region) {
      r.reward += features::kGoalReward;
      r.credited += features::kGoalReward;
    }
    if (r.world.status == sim::Status::GoalReached) {
      r.reward += features::kGoalReward;
      r.credited += features::kGoalReward;
      r.outcome = Outcome::GoalReached;
      break;
    }
  } while (r.elapsed < budget - kTimeEps && !options::option_terminated(ctx, r.world, r.elapsed, cfg.options));

  r.goal = options::option_goal(ctx, r.world);
  if (r.goal) r.reward += spec_opt.goal_bonus;
  return r;
}

std::size_t widening_limit(int visits, double alpha) {
  if (visits <= 0) return 1;
  const double n = std::floor(std::pow(static_cast<double>(visits), alpha) + 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

std::optional<std::size_t> maybe_widen(Node& node, double alpha) {
  if (node.edges.size() >= widening_limit(node.visits, alpha)) return std::nullopt;
  std::optional<OptionId> best;
  for (auto o : options::kAllOptions) {
    if (!options::contains(node.applicable, o)) continue;
    const bool taken = std::any_of(node.edges.begin(), node.edges.end(), [&](const Edge& e) { return e.option == o; });
    if (taken) continue;
    if (!best || node.priors[options::ordinal(o)] > node.priors[options::ordinal(*best)]) best = o;
  }
  if (!best) return std::nullopt;
  Edge e;
  e.option = *best;
  e.prior = node.priors[options::ordinal(*best)];
  node.edges.push_back(e);
  return node.edges.size() - 1;
}

std::size_t select_edge(const Node& node, double exploration, double value_scale) {
  if (node.edges.empty()) throw std::logic_error("select_edge on a node without children");
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < node.edges.size(); ++i) {
    const auto& e = node.edges[i];
    const double score = puct_score(e.mean() / value_scale, e.prior, e.visits, exploration);
    const bool better = score > best_score ||
                        (score == best_score && options::ordinal(e.option) < options::ordinal(node.edges[best].option));
    if (better) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

namespace {

class Searcher {
 public:
  Searcher(const PlannerConfig& cfg, const prior::OptionPrior& prior, const Specification& spec)
      : cfg_(cfg), prior_(prior), spec_(spec), rng_(cfg.seed) {}

  std::size_t add_node(SearchTree& tree, const sim::WorldState& w, const MonitorStates& m, sim::Control u,
                       double credited, double depth) {
    Node n;
    n.world = w;
    n.monitors = m;
    n.last_control = u;
    n.credited = credited;
    n.depth = depth;
    n.applicable = options::applicable_set(w, cfg_.options);
    if (n.applicable != 0) n.priors = prior_.predict(features::features(w, 0), n.applicable);
    tree.nodes().push_back(std::move(n));
    return tree.nodes().size() - 1;
  }

  double descend(SearchTree& tree, std::size_t id) {
    auto widened = maybe_widen(tree.nodes()[id], cfg_.widening);
    if (tree.nodes()[id].edges.empty()) {
      ++tree.nodes()[id].visits;
      return 0.0;
    }
    const std::size_t e = widened ? *widened : select_edge(tree.nodes()[id], cfg_.exploration, cfg_.value_scale);
    double value = 0.0;
    if (!tree.nodes()[id].edges[e].expanded) {
      const Node& n = tree.nodes()[id];
      const double budget = std::min(options::max_duration(n.edges[e].option, cfg_.options), cfg_.horizon - n.depth);
      const auto res = simulate_option(n.world, n.monitors, n.last_control, n.credited, n.edges[e].option, budget, cfg_, spec_);
      const double depth = n.depth + res.elapsed;
      auto& edge = tree.nodes()[id].edges[e];
      edge.expanded = true;
      edge.reward = res.reward;
      edge.outcome = res.outcome;
      edge.goal = res.goal;
      edge.end = res.world;
      value = res.reward;
      if (!res.terminal() && depth < cfg_.horizon - kTimeEps) {
        const auto child = add_node(tree, res.world, res.monitors, res.last_control, res.credited, depth);
        tree.nodes()[id].edges[e].child = child;
        value += rollout(tree.nodes()[child]);
      }
    } else {
      const auto& edge = tree.nodes()[id].edges[e];
      value = edge.reward;
      if (edge.child) value += descend(tree, *edge.child);
    }
    auto& edge = tree.nodes()[id].edges[e];
    ++edge.visits;
    edge.total += value;
    ++tree.nodes()[id].visits;
    return value;
  }

  double rollout(const Node& from) {
    sim::WorldState w = from.world;
    MonitorStates m = from.monitors;
    sim::Control u = from.last_control;
    double credited = from.credited;
    double t = from.depth;
    double total = 0.0;
    for (int k = 0; k < cfg_.rollout_options && t < cfg_.horizon - kTimeEps; ++k) {
      const auto applicable = options::applicable_set(w, cfg_.options);
      if (applicable == 0) break;
      const auto o = prior::rollout_policy(prior_, features::features(w, 0), applicable, rng_);
      const double budget = std::min(options::max_duration(o, cfg_.options), cfg_.horizon - t);
      auto res = simulate_option(w, m, u, credited, o, budget, cfg_, spec_);
      total += res.reward;
      if (res.terminal()) break;
      t += res.elapsed;
      w = std::move(res.world);
      m = std::move(res.monitors);
      u = res.last_control;
      credited = res.credited;
    }
    return total;
  }

 private:
  const PlannerConfig& cfg_;
  const prior::OptionPrior& prior_;
  const Specification& spec_;
  Rng rng_;
};

const Edge* most_visited(const Node& n) {
  const Edge* best = nullptr;
  for (const auto& e : n.edges) {
    if (e.visits == 0) continue;
    const bool better = !best || e.visits > best->visits ||
                        (e.visits == best->visits &&
                         (e.mean() > best->mean() ||
                          (e.mean() == best->mean() && options::ordinal(e.option) < options::ordinal(best->option))));
    if (better) best = &e;
  }
  return best;
}

}  // namespace

SearchResult search(const sim::WorldState& root, const MonitorStates& monitors, sim::Control last_control,
                    const PlannerConfig& cfg, const prior::OptionPrior& prior, const Specification& spec) {
  cfg.validate();
  if (root.status != sim::Status::Running) throw std::invalid_argument("search from a finished world");
  SearchResult result;
  Searcher s(cfg, prior, spec);
  s.add_node(result.tree, root, monitors, last_control, 0.0, 0.0);
  for (int i = 0; i < cfg.iterations; ++i) s.descend(result.tree, 0);

  const auto& nodes = result.tree.nodes();
  for (const auto& e : nodes[0].edges) {
    auto& st = result.root[options::ordinal(e.option)];
    st.expanded = true;
    st.visits = e.visits;
    st.mean = e.mean();
  }
  for (auto o : options::kAllOptions) result.root[options::ordinal(o)].prior = nodes[0].priors[options::ordinal(o)];

  std::size_t id = 0;
  while (const Edge* e = most_visited(nodes[id])) {
    result.plan.push_back(e->option);
    if (!e->child) break;
    id = *e->child;
  }
  return result;
}

void append_trace(std::vector<TraceRow>& rows, const sim::WorldState& w) {
  for (std::size_t i = 0; i < w.actors.size(); ++i) {
    rows.push_back({w.time(), i, w.actors[i].vehicle, w.actors[i].lane, sim::label(w, i).bits});
  }
}

void collect_transitions(const SearchTree& tree, const options::OptionsConfig& cfg, prior::EpisodeDataset& out) {
  for (const auto& node : tree.nodes()) {
    const auto f = features::features(node.world, 0);
    for (const auto& e : node.edges) {
      if (!e.expanded) continue;
      prior::Transition t;
      t.features = f;
      t.option = e.option;
      t.reward = e.reward;
      t.terminal = e.outcome != Outcome::Running;
      if (!t.terminal) {
        t.next = features::features(e.end, 0);
        t.next_applicable = options::applicable_set(e.end, cfg);
      }
      out.push_back(t);
    }
  }
}

EpisodeResult receding_horizon_run(const sim::WorldState& start, const PlannerConfig& cfg,
                                   const prior::OptionPrior& prior, const EpisodeConfig& episode,
                                   const SearchObserver& observer, const Specification& spec) {
  cfg.validate();
  const auto replan_steps = static_cast<std::int64_t>(std::llround(episode.replan_period / start.dt));
  if (replan_steps < 1 || std::abs(replan_steps * start.dt - episode.replan_period) > 1e-9) {
    throw std::invalid_argument("replan period must be a positive multiple of the time step");
  }
  EpisodeResult out;
  sim::WorldState w = start;
  MonitorStates monitors = initial_monitor_states(spec, sim::label(w, 0));
  out.agent_labels.push_back(sim::label(w, 0));
  if (episode.record_trace) append_trace(out.trace, w);

  sim::Control prev{};
  std::optional<options::OptionContext> ctx;
  double elapsed = 0.0;
  std::deque<OptionId> plan;
  const std::int64_t first_step = w.step;

  auto replan = [&] {
    PlannerConfig c = cfg;
    c.seed = cfg.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(out.searches);
    auto result = search(w, monitors, prev, c, prior, spec);
    ++out.searches;
    if (observer) observer(result);
    plan.assign(result.plan.begin(), result.plan.end());
    if (plan.empty()) plan.push_back(OptionId::Default);
    const auto first = plan.front();
    plan.pop_front();
    if (!(ctx && ctx->id == first && !options::option_terminated(*ctx, w, elapsed, cfg.options))) {
      ctx = options::begin_option(first, w, cfg.options);
      elapsed = 0.0;
    }
  };

  while (w.status == sim::Status::Running) {
    if ((w.step - first_step) % replan_steps == 0 || !ctx) {
      replan();
    } else if (options::option_terminated(*ctx, w, elapsed, cfg.options)) {
      ctx.reset();
      while (!plan.empty() && !ctx) {
        const auto next = plan.front();
        plan.pop_front();
        if (options::applicable(next, w, cfg.options)) {
          ctx = options::begin_option(next, w, cfg.options);
          elapsed = 0.0;
        }
      }
      if (!ctx) replan();
    }

    w.actors[0].lane = ctx->target_lane;
    const auto u = options::option_control(*ctx, w, cfg.options);
    out.reward += features::step_reward(w, u, prev, cfg.weights);
    w = sim::advance_world(w, u);
    prev = u;
    elapsed += w.dt;
    out.executed.push_back(ctx->id);

    const auto l = sim::label(w, 0);
    monitors.feed(spec, l);
    out.agent_labels.push_back(l);
    if (episode.record_trace) append_trace(out.trace, w);
    if (w.status == sim::Status::Running && monitors.violated(spec)) w.status = sim::Status::ConstraintViolated;
    if (w.status == sim::Status::Running && w.time() - start.time() >= episode.timeout - kTimeEps) {
      w.status = sim::Status::Timeout;
    }
  }
  out.status = w.status;
  out.collided = w.status == sim::Status::Collided;
  out.violated = monitors.violated(spec);
  out.goals = features::achieved_goals(w);
  out.reward += features::terminal_reward(w.status, out.goals);
  return out;
}

}  // namespace ltlmcts::planner
