#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "brickstab/io/layout.hpp"
#include "brickstab/io/mesh.hpp"
#include "brickstab/io/result.hpp"
#include "brickstab/io/voxel.hpp"
#include "brickstab/program.hpp"
#include "brickstab/stability.hpp"
#include "brickstab/structures.hpp"

namespace brickstab::cli {

namespace fs = std::filesystem;

inline constexpr int kExitStable = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnstable = 2;

inline constexpr const char* kConfigEnv = "BRICKSTAB_CONFIG";
inline constexpr int kManifestVersion = 1;

/// Settings shared by every command. Layout-level mode/ground settings are
/// overridden only when set here.
struct RunConfig {
  SolverWeights weights;
  SolveOptions options;
  ScoreThresholds eps;
  std::optional<Mode> mode;
  bool no_ground = false;
  int workers = 1;
  std::string catalog_path;
};

class CommandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw CommandError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw CommandError("cannot write " + p.string());
  out << text;
  if (!out) throw CommandError("failed writing " + p.string());
}

/// Applies a JSON config file on top of `cfg`. Keys: alpha, beta, capacity_T,
/// eps_force, eps_torque, mode, ground_knobs, workers, time_limit, node_limit, catalog.
inline void apply_config_file(RunConfig& cfg, const fs::path& path) {
  using namespace io::detail;
  const io::Json doc = parse_json(read_file(path), "config");
  require_object(doc, "config",
                 {"alpha", "beta", "capacity_T", "eps_force", "eps_torque", "mode", "ground_knobs", "workers",
                  "time_limit", "node_limit", "catalog"});
  auto num = [&](const char* key, double& out) {
    if (auto it = doc.find(key); it != doc.end()) out = get_number(*it, std::string("config.") + key);
  };
  num("alpha", cfg.weights.alpha);
  num("beta", cfg.weights.beta);
  num("capacity_T", cfg.weights.capacity_T);
  num("eps_force", cfg.eps.eps_force);
  num("eps_torque", cfg.eps.eps_torque);
  num("time_limit", cfg.options.time_limit);
  if (auto it = doc.find("node_limit"); it != doc.end()) cfg.options.max_branch_nodes = get_int(*it, "config.node_limit");
  if (auto it = doc.find("workers"); it != doc.end()) cfg.workers = get_int(*it, "config.workers");
  if (auto it = doc.find("mode"); it != doc.end()) cfg.mode = io::parse_mode(get_string(*it, "config.mode"));
  if (auto it = doc.find("ground_knobs"); it != doc.end()) cfg.no_ground = !get_bool(*it, "config.ground_knobs");
  if (auto it = doc.find("catalog"); it != doc.end()) {
    fs::path c = get_string(*it, "config.catalog");
    if (c.is_relative()) c = path.parent_path() / c;
    cfg.catalog_path = c.string();
  }
}

inline void check_config(const RunConfig& cfg) {
  if (!cfg.weights.valid()) throw CommandError("invalid weights: need alpha > 0, beta >= 0, capacity-T > 0");
  if (!cfg.options.valid()) throw CommandError("invalid solver options: time and node limits must be positive");
  if (!(cfg.eps.eps_force > 0) || !(cfg.eps.eps_torque > 0)) throw CommandError("eps values must be positive");
  if (cfg.workers < 1) throw CommandError("workers must be at least 1");
}

inline Catalog load_catalog(const RunConfig& cfg) {
  if (cfg.catalog_path.empty()) return default_catalog();
  return io::parse_catalog(read_file(cfg.catalog_path));
}

inline void apply_overrides(const RunConfig& cfg, Assembly& a) {
  if (cfg.mode) a.mode = *cfg.mode;
  if (cfg.no_ground) a.ground_knobs = false;
}

inline std::string verdict_line(const StabilityReport& r) {
  if (r.verdict == Verdict::Stable) return "STABLE";
  const int i = r.failing_bricks.front();
  char buf[64];
  std::snprintf(buf, sizeof buf, "UNSTABLE brick=%d V=%.6g", i, r.score[i]);
  return buf;
}

inline int exit_code(const StabilityReport& r) { return r.verdict == Verdict::Stable ? kExitStable : kExitUnstable; }

inline fs::path sibling_with_suffix(const fs::path& p, const std::string& suffix) {
  fs::path out = p;
  out.replace_extension();
  return out.string() + suffix;
}

struct AnalyzeArgs {
  std::string layout;
  std::string out;
  std::string mesh_out;
  std::string lp_out;
};

inline int cmd_analyze(const RunConfig& cfg, const AnalyzeArgs& args, std::ostream& out) {
  Assembly a = io::parse_layout(read_file(args.layout), load_catalog(cfg));
  apply_overrides(cfg, a);
  if (!args.lp_out.empty()) {
    std::ostringstream lp;
    write_lp_format(lp, assemble_program(build_force_model(a, cfg.weights.capacity_T), cfg.weights));
    write_file(args.lp_out, lp.str());
  }
  const StabilityReport r = analyze(a, cfg.weights, cfg.options, cfg.eps);
  const fs::path result_path = args.out.empty() ? sibling_with_suffix(args.layout, ".result.json") : fs::path(args.out);
  write_file(result_path, io::write_result(r));
  if (!args.mesh_out.empty()) write_file(args.mesh_out, io::export_heatmap_mesh(a, r));
  out << verdict_line(r) << "\n";
  return exit_code(r);
}

struct BatchArgs {
  std::string dir;
  std::string out_dir;
  bool with_timings = false;
};

struct BatchEntry {
  std::string file;
  std::string error;
  std::string verdict;
  std::string status;
  double max_score = 0.0;
  int bricks = 0;
  double solve_time = 0.0;
};

inline std::string manifest_json(const std::vector<BatchEntry>& entries, bool with_timings) {
  io::Json list = io::Json::array();
  for (const BatchEntry& e : entries) {
    io::Json j = {{"file", e.file}};
    if (!e.error.empty()) {
      j["error"] = e.error;
    } else {
      j["verdict"] = e.verdict;
      j["status"] = e.status;
      j["bricks"] = e.bricks;
      j["max_score"] = e.max_score;
      if (with_timings) j["solve_time_s"] = e.solve_time;
    }
    list.push_back(std::move(j));
  }
  io::Json doc = {{"format_version", kManifestVersion}, {"structures", std::move(list)}};
  return doc.dump(2) + "\n";
}

/// Analyzes every *.json layout directly inside `dir`, one structure per worker.
/// Per-structure failures are recorded in the manifest, never fatal.
inline int cmd_batch(const RunConfig& cfg, const BatchArgs& args, std::ostream& out) {
  std::vector<fs::path> inputs;
  std::error_code ec;
  fs::directory_iterator it(args.dir, ec);
  if (ec) throw CommandError("cannot read directory " + args.dir + ": " + ec.message());
  for (const auto& entry : it) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") inputs.push_back(entry.path());
  }
  std::sort(inputs.begin(), inputs.end());
  const fs::path out_dir = args.out_dir.empty() ? fs::path(args.dir) / "results" : fs::path(args.out_dir);
  fs::create_directories(out_dir);
  const Catalog catalog = load_catalog(cfg);

  std::vector<BatchEntry> entries(inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < inputs.size(); k = next++) {
      BatchEntry& e = entries[k];
      e.file = inputs[k].filename().string();
      try {
        Assembly a = io::parse_layout(read_file(inputs[k]), catalog);
        apply_overrides(cfg, a);
        const StabilityReport r = analyze(a, cfg.weights, cfg.options, cfg.eps);
        write_file(out_dir / (inputs[k].stem().string() + ".result.json"), io::write_result(r));
        e.verdict = to_string(r.verdict);
        e.status = to_string(r.status);
        e.max_score = r.max_score();
        e.bricks = r.brick_count();
        e.solve_time = r.timings.total();
      } catch (const std::exception& ex) {
        e.error = ex.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(cfg.workers, static_cast<int>(inputs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  write_file(out_dir / "manifest.json", manifest_json(entries, args.with_timings));
  int failed = 0, unstable = 0;
  for (const BatchEntry& e : entries) {
    failed += !e.error.empty();
    unstable += e.verdict == "UNSTABLE";
  }
  out << inputs.size() << " structures, " << unstable << " unstable, " << failed << " errors\n";
  return kExitStable;
}

struct GenerateArgs {
  std::string grid;
  std::string out;
  std::vector<std::string> types;
  bool analyze = false;
  std::string result_out;
};

inline int cmd_generate(const RunConfig& cfg, const GenerateArgs& args, std::ostream& out) {
  const io::VoxelGrid grid = io::parse_voxel_grid(read_file(args.grid));
  const Catalog catalog = load_catalog(cfg);
  std::vector<BrickType> types;
  if (args.types.empty()) {
    types = catalog.types();
  } else {
    for (const std::string& id : args.types) types.push_back(catalog.at(id));
  }
  Assembly a = io::generate_layout(grid, types);
  apply_overrides(cfg, a);
  const fs::path layout_path = args.out.empty() ? sibling_with_suffix(args.grid, ".layout.json") : fs::path(args.out);
  write_file(layout_path, io::serialize_layout(a));
  out << "wrote " << a.size() << " bricks to " << layout_path.string() << "\n";
  if (!args.analyze) return kExitStable;
  const StabilityReport r = analyze(a, cfg.weights, cfg.options, cfg.eps);
  const fs::path result_path =
      args.result_out.empty() ? sibling_with_suffix(layout_path, ".result.json") : fs::path(args.result_out);
  write_file(result_path, io::write_result(r));
  out << verdict_line(r) << "\n";
  return exit_code(r);
}

struct BenchArgs {
  int min_dim = 1;
  int max_dim = 10;
  int repeats = 3;
  std::string out;
};

/// Linear-interpolated percentile of sorted values.
inline double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = p / 100.0 * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline int cmd_bench(const RunConfig& cfg, const BenchArgs& args, std::ostream& out) {
  if (args.min_dim < 1 || args.max_dim < args.min_dim || args.repeats < 1)
    throw CommandError("bench needs 1 <= min-dim <= max-dim and repeats >= 1");
  std::ostringstream table;
  table << "dim,bricks,verdict,assemble_s,solve_s,total_s,total_p25_s,total_p50_s,total_p75_s\n";
  for (int d = args.min_dim; d <= args.max_dim; ++d) {
    Assembly a = unit_cuboid(d, d, d);
    apply_overrides(cfg, a);
    std::vector<double> assemble, solve_t, total;
    Verdict verdict = Verdict::Stable;
    for (int k = 0; k < args.repeats; ++k) {
      const StabilityReport r = analyze(a, cfg.weights, cfg.options, cfg.eps);
      verdict = r.verdict;
      assemble.push_back(r.timings.build + r.timings.assemble);
      solve_t.push_back(r.timings.solve);
      total.push_back(r.timings.total());
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%d,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", d, a.size(), to_string(verdict),
                  percentile(assemble, 50), percentile(solve_t, 50), percentile(total, 50), percentile(total, 25),
                  percentile(total, 50), percentile(total, 75));
    table << buf;
    out << buf << std::flush;
  }
  if (!args.out.empty()) write_file(args.out, table.str());
  return kExitStable;
}

/// Parses argv and dispatches to a command. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Static stability analysis for interlocking brick assemblies"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "brickstab 1.0.0");

  RunConfig defaults;
  RunConfig flags;
  std::string config_path;
  std::string mode_flag;
  long node_limit = defaults.options.max_branch_nodes;
  app.add_option("--config", config_path, "JSON config file (default: $" + std::string(kConfigEnv) + ")");
  auto* o_alpha = app.add_option("--alpha", flags.weights.alpha, "weight of the per-brick maximum friction");
  auto* o_beta = app.add_option("--beta", flags.weights.beta, "weight of the total friction");
  auto* o_T = app.add_option("--capacity-T", flags.weights.capacity_T, "friction capacity per contact (N)");
  auto* o_ef = app.add_option("--eps-force", flags.eps.eps_force, "force residual threshold (N)");
  auto* o_et = app.add_option("--eps-torque", flags.eps.eps_torque, "torque residual threshold (N*mm)");
  auto* o_mode = app.add_option("--mode", mode_flag, "override the layout mode")
                     ->check(CLI::IsMember({"interlocking", "smooth"}));
  auto* o_ng = app.add_flag("--no-ground", flags.no_ground, "treat the ground as a frictionless floor");
  auto* o_w = app.add_option("--workers", flags.workers, "parallel structures in batch mode");
  auto* o_tl = app.add_option("--time-limit", flags.options.time_limit, "solver time limit per structure (s)");
  auto* o_nl = app.add_option("--node-limit", node_limit, "branch-and-bound node limit per structure");
  auto* o_cat = app.add_option("--catalog", flags.catalog_path, "brick catalog file");

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "analyze one layout");
  analyze_cmd->add_option("layout", an.layout, "layout file")->required();
  analyze_cmd->add_option("--out", an.out, "result file (default: <layout>.result.json)");
  analyze_cmd->add_option("--mesh-out", an.mesh_out, "heatmap mesh (PLY)");
  analyze_cmd->add_option("--lp-out", an.lp_out, "dump the program in LP format");

  BatchArgs ba;
  auto* batch_cmd = app.add_subcommand("batch", "analyze every layout in a directory");
  batch_cmd->add_option("dir", ba.dir, "directory of layout files")->required();
  batch_cmd->add_option("--out-dir", ba.out_dir, "output directory (default: <dir>/results)");
  batch_cmd->add_flag("--with-timings", ba.with_timings, "record solve times in the manifest");

  GenerateArgs ge;
  auto* generate_cmd = app.add_subcommand("generate", "build a brick layout from a voxel grid");
  generate_cmd->add_option("grid", ge.grid, "voxel grid file")->required();
  generate_cmd->add_option("--out", ge.out, "layout file (default: <grid>.layout.json)");
  generate_cmd->add_option("--types", ge.types, "allowed brick types (default: whole catalog)")->delimiter(',');
  generate_cmd->add_flag("--analyze", ge.analyze, "analyze the generated layout");
  generate_cmd->add_option("--result-out", ge.result_out, "result file for --analyze");

  BenchArgs be;
  auto* bench_cmd = app.add_subcommand("bench", "time unit-brick cuboids of growing size");
  bench_cmd->add_option("--min-dim", be.min_dim, "smallest cuboid edge");
  bench_cmd->add_option("--max-dim", be.max_dim, "largest cuboid edge");
  bench_cmd->add_option("--repeats", be.repeats, "runs per size");
  bench_cmd->add_option("--out", be.out, "CSV table file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitStable : kExitError;
  }

  try {
    RunConfig cfg = defaults;
    if (config_path.empty()) {
      if (const char* env = std::getenv(kConfigEnv); env && *env) config_path = env;
    }
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    if (o_alpha->count()) cfg.weights.alpha = flags.weights.alpha;
    if (o_beta->count()) cfg.weights.beta = flags.weights.beta;
    if (o_T->count()) cfg.weights.capacity_T = flags.weights.capacity_T;
    if (o_ef->count()) cfg.eps.eps_force = flags.eps.eps_force;
    if (o_et->count()) cfg.eps.eps_torque = flags.eps.eps_torque;
    if (o_mode->count()) cfg.mode = io::parse_mode(mode_flag);
    if (o_ng->count()) cfg.no_ground = true;
    if (o_w->count()) cfg.workers = flags.workers;
    if (o_tl->count()) cfg.options.time_limit = flags.options.time_limit;
    if (o_nl->count()) cfg.options.max_branch_nodes = node_limit;
    if (o_cat->count()) cfg.catalog_path = flags.catalog_path;
    check_config(cfg);

    if (*analyze_cmd) return cmd_analyze(cfg, an, out);
    if (*batch_cmd) return cmd_batch(cfg, ba, out);
    if (*generate_cmd) return cmd_generate(cfg, ge, out);
    if (*bench_cmd) return cmd_bench(cfg, be, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace brickstab::cli
