#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "topoplan/model.hpp"
#include "topoplan/world.hpp"

namespace topoplan {

struct GridParams {
  double dx = 0.0;
  double dy = 0.0;
  double dt = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  void validate() const;
  int t_steps() const;  // number of dt intervals, so t indices run 0..t_steps()
};

// Grid-indexed reduced configuration. Coordinates decode as x = ix * dx,
// y = iy * dy, t = it * dt.
struct CgVertex {
  int ix = 0;
  int iy = 0;
  int it = 0;
  int w = 1;

  bool operator==(const CgVertex&) const = default;
};

struct GraphBuildOptions {
  double collision_step = 0.01;  // max tracked-point motion between obs samples
  double epsilon_flip = 0.0;     // extra cost on cross-branch edges
  double t_scale = 1.0;          // weight of the t term in edge costs
};

struct EmptyGraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CgEdge {
  int to = -1;
  double cost = 0.0;
};

class ConfigGraph {
 public:
  ConfigGraph(GridParams params, GraphBuildOptions options)
      : params_(params), options_(options) {}

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  const CgVertex& vertex(int id) const { return vertices_[id]; }
  const std::vector<CgEdge>& neighbors(int id) const { return adjacency_[id]; }
  const GridParams& params() const { return params_; }
  const GraphBuildOptions& options() const { return options_; }

  // -1 when the vertex is not in the graph.
  int find(const CgVertex& v) const;
  int find(int ix, int iy, int it, int w) const { return find({ix, iy, it, w}); }

  ReducedConfig decode(int id) const;
  ReducedConfig decode(const CgVertex& v) const;

  // Nearest grid vertex for continuous reduced coordinates (rounding).
  CgVertex quantize(double x, double y, double t, int w) const;

  int edge_count() const;  // undirected edges

  // One JSON record per vertex: indices, coordinates, neighbor ids and costs.
  std::string dump() const;

  // Populated by build_graph.
  std::vector<CgVertex> vertices_;
  std::vector<std::vector<CgEdge>> adjacency_;
  std::unordered_map<std::uint64_t, int> index_;

  static std::uint64_t key(const CgVertex& v);

 private:
  GridParams params_;
  GraphBuildOptions options_;
};

// King's graph condition: all three index deltas within +-1 (w ignored).
bool kgc(const CgVertex& v1, const CgVertex& v2);

// Euclidean edge cost over (x, y, t_scale * t), plus epsilon_flip across
// branches.
double edge_cost(const GridParams& params, const GraphBuildOptions& options,
                 const CgVertex& v1, const CgVertex& v2);

// True when both endpoints lie in the singularity band
// d >= l1 + l2 - max(dx, dy) * sqrt(2).
bool in_singularity_band(const RobotModel& robot, const EePath& path,
                         const GridParams& params, const ReducedConfig& rc);

// Full edge predicate: kgc, collision-free sweep, and the branch rule.
bool edge_allowed(const World& world, const RobotModel& robot, const EePath& path,
                  const GridParams& params, const GraphBuildOptions& options,
                  const CgVertex& v1, const CgVertex& v2);

// Builds the discrete configuration graph. Throws EmptyGraphError when no
// vertex survives filtering at t = 0 or t = 1.
ConfigGraph build_graph(const World& world, const RobotModel& robot,
                        const EePath& path, const GridParams& params,
                        const GraphBuildOptions& options = {});

}  // namespace topoplan
