#include "ltlmcts/bench/export.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

namespace ltlmcts::bench {

namespace {

constexpr const char* kResultsHeader =
    "variant,low_level,prior,environment,n_worlds,constraint_violations,collisions,total_failures,avg_reward,"
    "std_reward";
constexpr const char* kTraceHeader = "t,actor,p_x,p_y,theta,v,psi,a,psi_dot,lane,predicates";

std::string real(double x) { return fmt::format("{:.17g}", x); }

void check_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") != std::string::npos) {
    throw ExportError("field '" + s + "' cannot be written to CSV unquoted");
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class T>
T number(const std::string& s, std::size_t line) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ExportError(fmt::format("line {}: '{}' is not a number", line, s));
  }
  return value;
}

double real_from(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ExportError(fmt::format("line {}: '{}' is not a number", line, s));
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void expect_header(std::istream& in, const char* header) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != header) {
    throw ExportError(std::string("expected header '") + header + "'");
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExportError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ExportError("cannot read " + path.string());
  return in;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw ExportError("write failed for " + path.string());
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    for (const auto* s : {&r.variant, &r.low_level, &r.prior, &r.environment}) check_field(*s);
    out << r.variant << ',' << r.low_level << ',' << r.prior << ',' << r.environment << ',' << r.n_worlds << ','
        << r.constraint_violations << ',' << r.collisions << ',' << r.total_failures << ',' << real(r.avg_reward)
        << ',' << real(r.std_reward) << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  expect_header(in, kResultsHeader);
  std::vector<ResultRow> rows;
  std::string line;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) throw ExportError(fmt::format("line {}: expected 10 fields, got {}", n, f.size()));
    ResultRow r;
    r.variant = f[0];
    r.low_level = f[1];
    r.prior = f[2];
    r.environment = f[3];
    r.n_worlds = number<int>(f[4], n);
    r.constraint_violations = number<int>(f[5], n);
    r.collisions = number<int>(f[6], n);
    r.total_failures = number<int>(f[7], n);
    r.avg_reward = real_from(f[8], n);
    r.std_reward = real_from(f[9], n);
    rows.push_back(r);
  }
  return rows;
}

void export_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_results_csv(out, rows);
  finish(out, path);
}

std::vector<ResultRow> load_results(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_results_csv(in);
  } catch (const ExportError& e) {
    throw ExportError(path.string() + ": " + e.what());
  }
}

void write_seed_manifest(std::ostream& out, const ExperimentConfig& cfg, const std::vector<EpisodeRecord>& episodes) {
  out << "variant,world,seed,n_vehicles,outcome,reward,error\n";
  for (const auto& e : episodes) {
    out << cfg.variants.at(e.variant).label() << ',' << e.world << ',' << e.seed << ',' << e.n_vehicles << ','
        << to_string(e.outcome) << ',' << real(e.reward) << ',' << (e.error ? 1 : 0) << '\n';
  }
}

std::filesystem::path seed_manifest_path(const std::filesystem::path& results) {
  auto p = results;
  p.replace_extension();
  p += ".seeds.csv";
  return p;
}

void write_trace_csv(std::ostream& out, const std::vector<planner::TraceRow>& rows) {
  out << kTraceHeader << '\n';
  for (const auto& r : rows) {
    const auto& v = r.vehicle;
    out << real(r.t) << ',' << r.actor << ',' << real(v.p_x) << ',' << real(v.p_y) << ',' << real(v.theta) << ','
        << real(v.v) << ',' << real(v.psi) << ',' << real(v.u.a) << ',' << real(v.u.psi_dot) << ',' << r.lane
        << ',' << r.predicates << '\n';
  }
}

std::vector<planner::TraceRow> read_trace_csv(std::istream& in) {
  expect_header(in, kTraceHeader);
  std::vector<planner::TraceRow> rows;
  std::string line;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 11) throw ExportError(fmt::format("line {}: expected 11 fields, got {}", n, f.size()));
    planner::TraceRow r;
    r.t = real_from(f[0], n);
    r.actor = number<std::size_t>(f[1], n);
    r.vehicle.p_x = real_from(f[2], n);
    r.vehicle.p_y = real_from(f[3], n);
    r.vehicle.theta = real_from(f[4], n);
    r.vehicle.v = real_from(f[5], n);
    r.vehicle.psi = real_from(f[6], n);
    r.vehicle.u.a = real_from(f[7], n);
    r.vehicle.u.psi_dot = real_from(f[8], n);
    r.lane = number<int>(f[9], n);
    r.predicates = number<std::uint32_t>(f[10], n);
    rows.push_back(r);
  }
  return rows;
}

void export_trace(const std::vector<planner::TraceRow>& rows, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_trace_csv(out, rows);
  finish(out, path);
}

std::vector<planner::TraceRow> load_trace(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_trace_csv(in);
  } catch (const ExportError& e) {
    throw ExportError(path.string() + ": " + e.what());
  }
}

std::vector<ltl::Label> actor_labels(const std::vector<planner::TraceRow>& rows, std::size_t actor) {
  std::vector<ltl::Label> out;
  for (const auto& r : rows) {
    if (r.actor == actor) out.push_back(ltl::Label{r.predicates});
  }
  return out;
}

void write_tree_dot(std::ostream& out, const planner::SearchTree& tree) {
  out << "digraph search {\n";
  const auto& nodes = tree.nodes();
  if (!nodes.empty()) out << "  n0 [label=\"0\"];\n";
  std::size_t leaves = 0;
  auto edge_label = [](const planner::Edge& e) { return fmt::format("N={} Q={:.1f}", e.visits, e.mean()); };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const auto& e : nodes[i].edges) {
      if (!e.expanded) continue;
      const char letter = options::letter(e.option);
      std::string target;
      if (e.child) {
        target = fmt::format("n{}", *e.child);
        out << "  " << target << " [label=\"" << letter << "\"];\n";
      } else {
        target = fmt::format("leaf{}", leaves++);
        out << "  " << target << " [label=\"" << letter << "\"";
        if (e.outcome == planner::Outcome::GoalReached) {
          out << ", color=green";
        } else if (e.outcome != planner::Outcome::Running) {
          out << ", color=red";
        }
        out << "];\n";
      }
      out << "  n" << i << " -> " << target << " [label=\"" << edge_label(e) << "\"];\n";
    }
  }
  out << "}\n";
}

void dump_tree(const planner::SearchTree& tree, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_tree_dot(out, tree);
  finish(out, path);
}

}  // namespace ltlmcts::bench
