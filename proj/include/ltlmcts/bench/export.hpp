#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "ltlmcts/bench/experiment.hpp"
#include "ltlmcts/planner/planner.hpp"

namespace ltlmcts::bench {

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reals are written with 17 significant digits so a parse restores them exactly.
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(std::istream& in);
void export_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> load_results(const std::filesystem::path& path);

// variant, world, seed, n_vehicles, outcome, reward, error
void write_seed_manifest(std::ostream& out, const ExperimentConfig& cfg, const std::vector<EpisodeRecord>& episodes);
std::filesystem::path seed_manifest_path(const std::filesystem::path& results);

// t, actor, p_x, p_y, theta, v, psi, a, psi_dot, lane, predicates
void write_trace_csv(std::ostream& out, const std::vector<planner::TraceRow>& rows);
std::vector<planner::TraceRow> read_trace_csv(std::istream& in);
void export_trace(const std::vector<planner::TraceRow>& rows, const std::filesystem::path& path);
std::vector<planner::TraceRow> load_trace(const std::filesystem::path& path);

// Labels of one actor in time order.
std::vector<ltl::Label> actor_labels(const std::vector<planner::TraceRow>& rows, std::size_t actor);

// Root is "0"; every other node is named by the letter of the option leading
// to it. Terminal leaves are green on success and red on failure.
void write_tree_dot(std::ostream& out, const planner::SearchTree& tree);
void dump_tree(const planner::SearchTree& tree, const std::filesystem::path& path);

}  // namespace ltlmcts::bench
