#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "ltlmcts/bench/experiment.hpp"
#include "ltlmcts/bench/export.hpp"

using namespace ltlmcts;

int main(int argc, char** argv) {
  CLI::App app{"Run a batch experiment and export Table-I style results"};
  std::string experiment_path, out_path, traces_dir;
  int jobs = 1;
  app.add_option("--experiment", experiment_path, "experiment JSON")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "results CSV")->required();
  app.add_option("--traces", traces_dir, "directory for per-episode trace CSVs");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = bench::experiment_from_json(bench::read_json_file(experiment_path));
    const auto result = bench::run_experiment(cfg, {jobs, !traces_dir.empty()});
    bench::export_results(result.rows, out_path);
    const auto manifest = bench::seed_manifest_path(out_path);
    {
      std::ofstream m(manifest, std::ios::binary);
      if (!m) throw bench::ExportError("cannot write " + manifest.string());
      bench::write_seed_manifest(m, cfg, result.episodes);
    }
    if (!traces_dir.empty()) {
      std::filesystem::create_directories(traces_dir);
      for (const auto& e : result.episodes) {
        std::string name = cfg.variants[e.variant].label();
        for (auto& c : name) {
          if (c == '/') c = '_';
        }
        bench::export_trace(e.trace, std::filesystem::path(traces_dir) / (name + "_" + std::to_string(e.seed) + ".csv"));
      }
    }
    bench::write_results_csv(std::cout, result.rows);
    return 0;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
