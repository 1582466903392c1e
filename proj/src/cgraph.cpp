#include "topoplan/cgraph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace topoplan {

namespace {
// Last slice snaps to exactly 1 so path evaluation never leaves [0, 1].
double decode_t(const GridParams& params, int it) {
  return it >= params.t_steps() ? 1.0 : it * params.dt;
}
}  // namespace

void GridParams::validate() const {
  if (!(dx > 0.0)) throw std::invalid_argument("grid.dx: must be > 0");
  if (!(dy > 0.0)) throw std::invalid_argument("grid.dy: must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("grid.dt: must be > 0");
  const double steps = 1.0 / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9)
    throw std::invalid_argument("grid.dt: 1/dt must be integral");
}

int GridParams::t_steps() const {
  return static_cast<int>(std::round(1.0 / dt));
}

std::uint64_t ConfigGraph::key(const CgVertex& v) {
  const std::uint64_t ix = static_cast<std::uint64_t>(v.ix + (1 << 20));
  const std::uint64_t iy = static_cast<std::uint64_t>(v.iy + (1 << 20));
  const std::uint64_t it = static_cast<std::uint64_t>(v.it);
  const std::uint64_t w = v.w > 0 ? 1 : 0;
  return (ix << 43) | (iy << 22) | (it << 1) | w;
}

int ConfigGraph::find(const CgVertex& v) const {
  auto it = index_.find(key(v));
  return it == index_.end() ? -1 : it->second;
}

ReducedConfig ConfigGraph::decode(const CgVertex& v) const {
  return {v.ix * params_.dx, v.iy * params_.dy, decode_t(params_, v.it), v.w};
}

ReducedConfig ConfigGraph::decode(int id) const { return decode(vertices_[id]); }

CgVertex ConfigGraph::quantize(double x, double y, double t, int w) const {
  CgVertex v;
  v.ix = static_cast<int>(std::lround(x / params_.dx));
  v.iy = static_cast<int>(std::lround(y / params_.dy));
  v.it = static_cast<int>(std::lround(t / params_.dt));
  v.w = w >= 0 ? 1 : -1;
  return v;
}

int ConfigGraph::edge_count() const {
  int twice = 0;
  for (const auto& nbrs : adjacency_) twice += static_cast<int>(nbrs.size());
  return twice / 2;
}

std::string ConfigGraph::dump() const {
  nlohmann::ordered_json root;
  root["vertices"] = nlohmann::ordered_json::array();
  for (int id = 0; id < vertex_count(); ++id) {
    const CgVertex& v = vertices_[id];
    const ReducedConfig rc = decode(v);
    nlohmann::ordered_json rec;
    rec["id"] = id;
    rec["ix"] = v.ix;
    rec["iy"] = v.iy;
    rec["it"] = v.it;
    rec["w"] = v.w;
    rec["x"] = rc.x;
    rec["y"] = rc.y;
    rec["t"] = rc.t;
    auto nbrs = nlohmann::ordered_json::array();
    for (const CgEdge& e : adjacency_[id]) nbrs.push_back({e.to, e.cost});
    rec["neighbors"] = std::move(nbrs);
    root["vertices"].push_back(std::move(rec));
  }
  return root.dump(2) + "\n";
}

bool kgc(const CgVertex& v1, const CgVertex& v2) {
  return std::abs(v2.ix - v1.ix) <= 1 && std::abs(v2.iy - v1.iy) <= 1 &&
         std::abs(v2.it - v1.it) <= 1;
}

double edge_cost(const GridParams& params, const GraphBuildOptions& options,
                 const CgVertex& v1, const CgVertex& v2) {
  const double dx = (v2.ix - v1.ix) * params.dx;
  const double dy = (v2.iy - v1.iy) * params.dy;
  const double dt = (v2.it - v1.it) * params.dt * options.t_scale;
  double cost = std::sqrt(dx * dx + dy * dy + dt * dt);
  if (v1.w != v2.w) cost += options.epsilon_flip;
  return cost;
}

bool in_singularity_band(const RobotModel& robot, const EePath& path,
                         const GridParams& params, const ReducedConfig& rc) {
  const Eigen::Vector3d shoulder(rc.x, rc.y, 0.0);
  const double d = (path.position(rc.t) - shoulder).norm();
  const double band = std::max(params.dx, params.dy) * std::sqrt(2.0);
  return d >= robot.l1 + robot.l2 - band;
}

bool edge_allowed(const World& world, const RobotModel& robot, const EePath& path,
                  const GridParams& params, const GraphBuildOptions& options,
                  const CgVertex& v1, const CgVertex& v2) {
  if (v1 == v2) return false;
  if (!kgc(v1, v2)) return false;
  const ReducedConfig r1{v1.ix * params.dx, v1.iy * params.dy, decode_t(params, v1.it), v1.w};
  const ReducedConfig r2{v2.ix * params.dx, v2.iy * params.dy, decode_t(params, v2.it), v2.w};
  const FullConfigResult q1 = reduced_to_full(robot, path, r1);
  const FullConfigResult q2 = reduced_to_full(robot, path, r2);
  if (!q1.ok() || !q2.ok()) return false;
  if (v1.w != v2.w) {
    if (!in_singularity_band(robot, path, params, r1)) return false;
    if (!in_singularity_band(robot, path, params, r2)) return false;
  }
  const int sub =
      collision_subsample_count(q1.config, q2.config, options.collision_step);
  return !seg_obs(world, robot, q1.config, q2.config, sub);
}

ConfigGraph build_graph(const World& world, const RobotModel& robot,
                        const EePath& path, const GridParams& params,
                        const GraphBuildOptions& options) {
  params.validate();
  robot.validate();
  world.validate();

  ConfigGraph graph(params, options);
  std::vector<FullConfig> configs;
  std::vector<char> in_band;

  const double reach = robot.l1 + robot.l2;
  const int nx = static_cast<int>(std::floor(params.x_max / params.dx + 1e-9));
  const int ny = static_cast<int>(std::floor(params.y_max / params.dy + 1e-9));
  const int nt = params.t_steps();

  for (int it = 0; it <= nt; ++it) {
    const double t = decode_t(params, it);
    const Eigen::Vector3d ee = path.position(t);
    // Candidate cells are restricted to the xy disk of the reach bound.
    const int ix_lo = std::max(-nx, static_cast<int>(std::ceil((ee.x() - reach) / params.dx - 1e-9)));
    const int ix_hi = std::min(nx, static_cast<int>(std::floor((ee.x() + reach) / params.dx + 1e-9)));
    const int iy_lo = std::max(-ny, static_cast<int>(std::ceil((ee.y() - reach) / params.dy - 1e-9)));
    const int iy_hi = std::min(ny, static_cast<int>(std::floor((ee.y() + reach) / params.dy + 1e-9)));
    for (int iy = iy_lo; iy <= iy_hi; ++iy) {
      for (int ix = ix_lo; ix <= ix_hi; ++ix) {
        const Eigen::Vector2d base(ix * params.dx, iy * params.dy);
        if (!reach_feasible(robot, base, ee)) continue;
        for (int w : {1, -1}) {
          const ReducedConfig rc{base.x(), base.y(), t, w};
          const FullConfigResult full = reduced_to_full(robot, path, rc);
          if (!full.ok()) continue;
          if (obs(world, robot, full.config)) continue;
          const CgVertex v{ix, iy, it, w};
          const int id = graph.vertex_count();
          graph.vertices_.push_back(v);
          graph.index_.emplace(ConfigGraph::key(v), id);
          configs.push_back(full.config);
          in_band.push_back(in_singularity_band(robot, path, params, rc) ? 1 : 0);
        }
      }
    }
  }

  bool has_first = false, has_last = false;
  for (const CgVertex& v : graph.vertices_) {
    if (v.it == 0) has_first = true;
    if (v.it == nt) has_last = true;
  }
  if (graph.vertices_.empty() || !has_first || !has_last)
    throw EmptyGraphError("configuration graph has no vertex at t = 0 or t = 1");

  graph.adjacency_.assign(graph.vertex_count(), {});
  for (int id = 0; id < graph.vertex_count(); ++id) {
    const CgVertex& v = graph.vertices_[id];
    for (int dit = -1; dit <= 1; ++dit) {
      for (int diy = -1; diy <= 1; ++diy) {
        for (int dix = -1; dix <= 1; ++dix) {
          for (int w : {1, -1}) {
            const CgVertex u{v.ix + dix, v.iy + diy, v.it + dit, w};
            const int uid = graph.find(u);
            if (uid <= id) continue;  // each undirected edge handled once
            if (u.w != v.w && !(in_band[id] && in_band[uid])) continue;
            const int sub = collision_subsample_count(configs[id], configs[uid],
                                                      options.collision_step);
            if (seg_obs(world, robot, configs[id], configs[uid], sub)) continue;
            const double cost = edge_cost(params, options, v, u);
            graph.adjacency_[id].push_back({uid, cost});
            graph.adjacency_[uid].push_back({id, cost});
          }
        }
      }
    }
  }
  for (auto& nbrs : graph.adjacency_) {
    std::sort(nbrs.begin(), nbrs.end(),
              [](const CgEdge& a, const CgEdge& b) { return a.to < b.to; });
  }
  return graph;
}

}  // namespace topoplan
