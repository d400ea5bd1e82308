// Command-line front end: run scenarios, aggregate metrics, render
// snapshots and normalize maps.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bimsense/errors.hpp"
#include "bimsense/harness/config.hpp"
#include "bimsense/harness/map_io.hpp"
#include "bimsense/harness/metrics.hpp"
#include "bimsense/harness/mission.hpp"
#include "bimsense/harness/record_io.hpp"
#include "bimsense/harness/render.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace bimsense;

namespace {

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt::format("{:.1f}", *v) : "null";
}

int cmd_run(const fs::path& config_path, std::optional<std::uint64_t> seed,
            std::optional<int> runs, const fs::path& out_dir) {
  const ScenarioConfig cfg = load_config(config_path);
  const Site site = load_site(cfg);
  const std::uint64_t first = seed.value_or(cfg.seed);
  const int count = runs.value_or(cfg.runs);
  fs::create_directories(out_dir);
  bool all_ok = true;
  for (int k = 0; k < count; ++k) {
    const std::uint64_t s = first + static_cast<std::uint64_t>(k);
    const MissionRecord rec = run_mission(cfg, site, s);
    const std::string stem = fmt::format("{}_seed{}", cfg.name, s);
    write_text(out_dir / (stem + ".json"), dump_record(rec, fs::absolute(config_path).string()));
    write_text(out_dir / (stem + "_trace.csv"), trace_csv(rec));
    fmt::print("{} seed={} outcome={} goal={} time={:.1f}s length={:.1f}m interventions={} "
               "dR%={} dH%={} min_clearance={:.3f}\n",
               cfg.name, s, rec.outcome, rec.goal_reached, rec.mission_time, rec.path_length,
               rec.interventions.size(), fmt_opt(rec.delta_risk_pct),
               fmt_opt(rec.delta_entropy_pct), rec.min_clearance);
    all_ok = all_ok && rec.completed();
  }
  return all_ok ? 0 : 1;
}

int cmd_metrics(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const fs::path& p = e.path();
    if (p.extension() == ".json" && p.filename() != "metrics.json") files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  std::vector<RunSummary> runs;
  for (const fs::path& p : files) runs.push_back(read_summary(p));
  const std::vector<ScenarioMetrics> rows = compute_all_metrics(runs);
  const std::string csv = metrics_csv(rows);
  write_text(dir / "metrics.csv", csv);
  write_text(dir / "metrics.json", metrics_json(rows).dump(1) + "\n");
  std::cout << csv;
  return 0;
}

int cmd_render(const fs::path& record_path, int tick, fs::path out) {
  std::ifstream in(record_path);
  if (!in) throw ConfigError("cannot open " + record_path.string());
  const nlohmann::json doc = nlohmann::json::parse(in);
  const RunSummary summary = summary_from_json(doc);
  if (summary.config_path.empty()) throw ConfigError("record has no config path");
  const ScenarioConfig cfg = load_config(summary.config_path);
  const Site site = load_site(cfg);
  if (out.empty()) {
    out = record_path;
    out.replace_filename(record_path.stem().string() + fmt::format("_tick{}.ppm", tick));
  }
  bool rendered = false;
  run_mission(cfg, site, summary.seed, [&](const MissionSnapshot& s) {
    if (s.tick < tick) return true;
    RenderInput ri;
    ri.grid = s.grid;
    ri.prior = s.prior;
    ri.path = s.path;
    ri.corridor = s.corridor;
    ri.roi = s.roi;
    ri.pose = s.pose;
    render_snapshot(ri, out);
    rendered = true;
    return false;
  });
  if (!rendered) {
    std::cerr << "tick " << tick << " not reached by the mission\n";
    return 1;
  }
  std::cout << out.string() << "\n";
  return 0;
}

int cmd_mapconvert(const fs::path& in, const fs::path& out) {
  save_map(load_map(in), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BIM-prior risk-triggered sensing simulator"};
  app.require_subcommand(1);

  fs::path config_path, out_dir = "runs";
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  auto* run = app.add_subcommand("run", "Run a scenario");
  run->add_option("config", config_path, "Scenario file")->required();
  run->add_option("--seed", seed, "First seed (default: from the scenario)");
  run->add_option("--runs", runs, "Number of runs with consecutive seeds");
  run->add_option("--out", out_dir, "Output directory");

  fs::path metrics_dir;
  auto* metrics = app.add_subcommand("metrics", "Aggregate mission records in a directory");
  metrics->add_option("dir", metrics_dir, "Directory with records")->required();

  fs::path record_path, render_out;
  int tick = 0;
  auto* render = app.add_subcommand("render", "Render the map at a tick of a recorded run");
  render->add_option("record", record_path, "Mission record (JSON)")->required();
  render->add_option("tick", tick, "Tick index")->required();
  render->add_option("--out", render_out, "Output PPM file");

  fs::path map_in, map_out;
  auto* convert = app.add_subcommand("mapconvert", "Re-encode a PGM+YAML map");
  convert->add_option("in", map_in, "Input map YAML")->required();
  convert->add_option("out", map_out, "Output map YAML")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config_path, seed, runs, out_dir);
    if (*metrics) return cmd_metrics(metrics_dir);
    if (*render) return cmd_render(record_path, tick, render_out);
    if (*convert) return cmd_mapconvert(map_in, map_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
