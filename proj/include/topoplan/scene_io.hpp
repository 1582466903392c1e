#pragma once

#include <string>
#include <vector>

#include "topoplan/pipeline.hpp"

namespace topoplan {

struct SceneError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A fully parsed planning scene.
struct Scene {
  RobotModel robot;
  World world;
  EePath path;
  PipelineConfig pipeline;
};

// Parses and validates the scene JSON. Error messages carry the offending
// field path; unknown keys are rejected.
Scene parse_scene(const std::string& json_text);
Scene load_scene_file(const std::string& path);

// Serialization of the pipeline result (costs, per-guess trajectories, stage
// timings). Floating point round-trips exactly.
std::string result_to_json(const PipelineResult& result, bool fixed_timings);
std::string trajectory_to_json(const Trajectory& traj);

// Minimal read-back used by round-trip checks.
struct ResultSummary {
  int best_index = -1;
  std::vector<double> costs;
  std::vector<bool> converged;
};
ResultSummary parse_result(const std::string& json_text);

}  // namespace topoplan
