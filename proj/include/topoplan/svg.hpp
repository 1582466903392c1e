#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "topoplan/pipeline.hpp"

namespace topoplan {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Top-down (xy) rendering of one or more trajectories: obstacles grey, the
// desired end effector path blue, elbow paths green, base paths red. Output
// bytes are deterministic for fixed input.
std::string render_scene_svg(const World& world,
                             const std::vector<Eigen::Vector2d>& ee_path,
                             const std::vector<std::vector<Eigen::Vector2d>>& elbow_paths,
                             const std::vector<std::vector<Eigen::Vector2d>>& base_paths);

// Writes one plot_<i>.svg per guess plus overlay.svg into out_dir.
void plot_svg(const PipelineResult& result, const World& world,
              const EePath& path, const std::string& out_dir);

}  // namespace topoplan
