#pragma once

#include <optional>
#include <string>
#include <vector>

#include "topoplan/cgraph.hpp"
#include "topoplan/nags.hpp"
#include "topoplan/trajopt.hpp"

namespace topoplan {

struct PipelineConfig {
  int n = 1;        // distinct local optima to evaluate
  int T = 50;       // transcription steps
  double dt = 0.2;  // transcription timestep [s]
  GridParams grid;
  GraphBuildOptions graph_options;
  NagsVariant variant = NagsVariant::kGeneralized;
  bool distinct_goal_positions_are_distinct_classes = true;
  double clearance_margin = 0.01;
  ReducedConfig start;                  // snapped onto the t = 0 slice
  std::optional<ReducedConfig> goal;    // single t = 1 cell; unset = any t = 1
  SolveOptions solve;

  void validate() const;
};

struct GuessRecord {
  GuessPath guess;
  Trajectory seed;
  SolveReport report;
  Trajectory trajectory;
  bool solve_ok = false;  // converged and collision-free on the obs post-check
};

struct PipelineTimings {
  double graph_s = 0.0;
  double nags_s = 0.0;
  std::vector<double> solve_s;
};

struct PipelineResult {
  int best_index = -1;
  std::vector<GuessRecord> records;
  PipelineTimings timings;
  std::vector<std::string> warnings;
  int classes_found = 0;
};

struct PipelineOutcome {
  bool success = false;
  std::string failure_reason;
  PipelineResult result;  // partial data is retained on failure
};

struct NoConvergedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveStatus {
  double cost = 0.0;
  bool converged = false;
};

// Index of the cheapest converged entry; ties break toward the lowest index.
// Throws NoConvergedError when nothing converged.
int select_best(const std::vector<SolveStatus>& entries);

// Optional debug capture for graph/NAG dumps.
struct PipelineDebug {
  std::optional<ConfigGraph> graph;
  std::optional<SearchResult> search;
};

// Runs the full pipeline: graph generation, the NAGS class search, one
// trajectory optimization per guess (in parallel), and optimum selection.
PipelineOutcome find_path(const World& world, const RobotModel& robot,
                          const EePath& path, const PipelineConfig& cfg,
                          PipelineDebug* debug = nullptr,
                          bool seed_only = false);

}  // namespace topoplan
