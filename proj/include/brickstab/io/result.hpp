#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "brickstab/io/json_support.hpp"
#include "brickstab/stability.hpp"

namespace brickstab::io {

inline constexpr int kResultVersion = 1;

struct BrickResult {
  int index = 0;
  double score = 0.0;
  double dmax_N = 0.0;
  double residual_force_N = 0.0;
  double residual_torque_Nmm = 0.0;

  friend bool operator==(const BrickResult&, const BrickResult&) = default;
};

struct ResultDocument {
  int format_version = kResultVersion;
  std::string status = "OPTIMAL";
  std::string verdict = "STABLE";
  bool complementarity_satisfied = true;
  double objective = 0.0;
  long nodes_explored = 0;
  std::vector<BrickResult> bricks;
  std::vector<int> failing;
  std::vector<int> weakest;
  double max_residual_force_N = 0.0;
  double max_residual_torque_Nmm = 0.0;
  double max_dmax_N = 0.0;
  double build_s = 0.0;
  double assemble_s = 0.0;
  double solve_s = 0.0;

  friend bool operator==(const ResultDocument&, const ResultDocument&) = default;
};

inline ResultDocument to_document(const StabilityReport& r) {
  ResultDocument d;
  d.status = to_string(r.status);
  d.verdict = to_string(r.verdict);
  d.complementarity_satisfied = r.complementarity_satisfied;
  d.objective = r.objective;
  d.nodes_explored = r.nodes_explored;
  for (int i = 1; i <= r.brick_count(); ++i)
    d.bricks.push_back({i, r.score[i], r.d_max[i], r.residual_force[i], r.residual_torque[i]});
  d.failing = r.failing_bricks;
  d.weakest = r.weakest_bricks;
  d.max_residual_force_N = r.max_residual_force;
  d.max_residual_torque_Nmm = r.max_residual_torque;
  d.max_dmax_N = r.max_d_max;
  d.build_s = r.timings.build;
  d.assemble_s = r.timings.assemble;
  d.solve_s = r.timings.solve;
  return d;
}

inline std::string write_result(const ResultDocument& d) {
  Json bricks = Json::array();
  for (const BrickResult& b : d.bricks) {
    bricks.push_back({{"index", b.index},
                      {"score", b.score},
                      {"dmax_N", b.dmax_N},
                      {"residual_force_N", b.residual_force_N},
                      {"residual_torque_Nmm", b.residual_torque_Nmm}});
  }
  Json doc = {{"format_version", d.format_version},
              {"status", d.status},
              {"verdict", d.verdict},
              {"complementarity_satisfied", d.complementarity_satisfied},
              {"objective", d.objective},
              {"nodes_explored", d.nodes_explored},
              {"bricks", std::move(bricks)},
              {"failing", d.failing},
              {"weakest", d.weakest},
              {"summary",
               {{"max_residual_force_N", d.max_residual_force_N},
                {"max_residual_torque_Nmm", d.max_residual_torque_Nmm},
                {"max_dmax_N", d.max_dmax_N}}},
              {"timings", {{"build_s", d.build_s}, {"assemble_s", d.assemble_s}, {"solve_s", d.solve_s}}}};
  return doc.dump(2) + "\n";
}

inline std::string write_result(const StabilityReport& r) { return write_result(to_document(r)); }

inline ResultDocument read_result(std::string_view text) {
  using namespace detail;
  const Json doc = parse_json(text, "result");
  require_object(doc, "result", {"format_version", "status", "verdict", "complementarity_satisfied", "objective",
                                 "nodes_explored", "bricks", "failing", "weakest", "summary", "timings"});
  check_version(doc, "result", kResultVersion);
  ResultDocument d;
  d.status = get_string(field(doc, "result", "status"), "result.status");
  d.verdict = get_string(field(doc, "result", "verdict"), "result.verdict");
  if (d.verdict != "STABLE" && d.verdict != "UNSTABLE") throw FormatError("result.verdict: expected STABLE or UNSTABLE");
  d.complementarity_satisfied =
      get_bool(field(doc, "result", "complementarity_satisfied"), "result.complementarity_satisfied");
  d.objective = get_number(field(doc, "result", "objective"), "result.objective");
  d.nodes_explored = get_int(field(doc, "result", "nodes_explored"), "result.nodes_explored");

  const Json& bricks = get_array(field(doc, "result", "bricks"), "result.bricks");
  for (std::size_t k = 0; k < bricks.size(); ++k) {
    const std::string path = "result.bricks[" + std::to_string(k) + "]";
    const Json& b = bricks[k];
    require_object(b, path, {"index", "score", "dmax_N", "residual_force_N", "residual_torque_Nmm"});
    BrickResult r;
    r.index = get_int(field(b, path, "index"), path + ".index");
    r.score = get_number(field(b, path, "score"), path + ".score");
    if (r.score < 0.0 || r.score > 1.0) throw FormatError(path + ".score: must lie in [0, 1]");
    r.dmax_N = get_number(field(b, path, "dmax_N"), path + ".dmax_N");
    r.residual_force_N = get_number(field(b, path, "residual_force_N"), path + ".residual_force_N");
    r.residual_torque_Nmm = get_number(field(b, path, "residual_torque_Nmm"), path + ".residual_torque_Nmm");
    d.bricks.push_back(r);
  }
  for (const auto* key : {"failing", "weakest"}) {
    const std::string path = std::string("result.") + key;
    const Json& list = get_array(field(doc, "result", key), path);
    auto& out = std::string_view(key) == "failing" ? d.failing : d.weakest;
    for (std::size_t k = 0; k < list.size(); ++k) out.push_back(get_int(list[k], path + "[" + std::to_string(k) + "]"));
  }
  const Json& summary = field(doc, "result", "summary");
  require_object(summary, "result.summary", {"max_residual_force_N", "max_residual_torque_Nmm", "max_dmax_N"});
  d.max_residual_force_N = get_number(field(summary, "result.summary", "max_residual_force_N"), "result.summary");
  d.max_residual_torque_Nmm = get_number(field(summary, "result.summary", "max_residual_torque_Nmm"), "result.summary");
  d.max_dmax_N = get_number(field(summary, "result.summary", "max_dmax_N"), "result.summary");
  const Json& timings = field(doc, "result", "timings");
  require_object(timings, "result.timings", {"build_s", "assemble_s", "solve_s"});
  d.build_s = get_number(field(timings, "result.timings", "build_s"), "result.timings.build_s");
  d.assemble_s = get_number(field(timings, "result.timings", "assemble_s"), "result.timings.assemble_s");
  d.solve_s = get_number(field(timings, "result.timings", "solve_s"), "result.timings.solve_s");
  return d;
}

}  // namespace brickstab::io
