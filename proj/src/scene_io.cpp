#include "topoplan/scene_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace topoplan {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SceneError(path + ": " + what);
}

void require_keys(const json& node, const std::string& path,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {}) {
  if (!node.is_object()) fail(path, "expected an object");
  for (const char* key : required) {
    if (!node.contains(key)) fail(path + "." + key, "missing");
  }
  for (auto it = node.begin(); it != node.end(); ++it) {
    bool known = false;
    for (const char* key : required) known |= it.key() == key;
    for (const char* key : optional) known |= it.key() == key;
    if (!known) fail(path + "." + it.key(), "unknown key");
  }
}

double get_number(const json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  return node.get<double>();
}

int get_int(const json& node, const std::string& path) {
  if (!node.is_number_integer()) fail(path, "expected an integer");
  return node.get<int>();
}

Eigen::Vector3d get_vec3(const json& node, const std::string& path) {
  if (!node.is_array() || node.size() != 3) fail(path, "expected [x, y, z]");
  return {get_number(node[0], path + "[0]"), get_number(node[1], path + "[1]"),
          get_number(node[2], path + "[2]")};
}

RobotModel parse_robot(const json& node) {
  require_keys(node, "robot", {"l1", "l2", "arm_radius", "base_radius", "base_depth"});
  RobotModel robot;
  robot.l1 = get_number(node["l1"], "robot.l1");
  robot.l2 = get_number(node["l2"], "robot.l2");
  robot.arm_radius = get_number(node["arm_radius"], "robot.arm_radius");
  robot.base_radius = get_number(node["base_radius"], "robot.base_radius");
  robot.base_depth = get_number(node["base_depth"], "robot.base_depth");
  try {
    robot.validate();
  } catch (const std::invalid_argument& e) {
    throw SceneError(e.what());
  }
  return robot;
}

World parse_world(const json& node) {
  require_keys(node, "world", {"x_max", "y_max", "obstacles"});
  World world;
  world.x_max = get_number(node["x_max"], "world.x_max");
  world.y_max = get_number(node["y_max"], "world.y_max");
  const json& obstacles = node["obstacles"];
  if (!obstacles.is_array()) fail("world.obstacles", "expected an array");
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const std::string path = "world.obstacles[" + std::to_string(i) + "]";
    const json& entry = obstacles[i];
    if (!entry.is_object() || !entry.contains("type"))
      fail(path, "expected an object with a type");
    const std::string type = entry["type"].get<std::string>();
    if (type == "sphere") {
      require_keys(entry, path, {"type", "center", "radius"});
      Sphere s;
      s.center = get_vec3(entry["center"], path + ".center");
      s.radius = get_number(entry["radius"], path + ".radius");
      world.obstacles.push_back(s);
    } else if (type == "box") {
      require_keys(entry, path, {"type", "min", "max"});
      Box b;
      b.min = get_vec3(entry["min"], path + ".min");
      b.max = get_vec3(entry["max"], path + ".max");
      world.obstacles.push_back(b);
    } else {
      fail(path + ".type", "must be \"sphere\" or \"box\"");
    }
  }
  try {
    world.validate();
  } catch (const std::invalid_argument& e) {
    throw SceneError(e.what());
  }
  return world;
}

EePath parse_path(const json& node) {
  require_keys(node, "ee_path", {"samples"});
  const json& samples = node["samples"];
  if (!samples.is_array() || samples.size() < 2)
    fail("ee_path.samples", "expected at least 2 samples");
  std::vector<double> ts;
  std::vector<Eigen::Vector3d> points;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string path = "ee_path.samples[" + std::to_string(i) + "]";
    const json& row = samples[i];
    if (!row.is_array() || row.size() != 4) fail(path, "expected [t, x, y, z]");
    ts.push_back(get_number(row[0], path + "[0]"));
    points.emplace_back(get_number(row[1], path + "[1]"),
                        get_number(row[2], path + "[2]"),
                        get_number(row[3], path + "[3]"));
  }
  try {
    return EePath(std::move(ts), std::move(points));
  } catch (const std::invalid_argument& e) {
    throw SceneError(std::string("ee_path.samples: ") + e.what());
  }
}

ReducedConfig parse_cell(const json& node, const std::string& path) {
  require_keys(node, path, {"x", "y", "w"});
  ReducedConfig rc;
  rc.x = get_number(node["x"], path + ".x");
  rc.y = get_number(node["y"], path + ".y");
  rc.w = get_int(node["w"], path + ".w");
  if (rc.w != 1 && rc.w != -1) fail(path + ".w", "must be +1 or -1");
  return rc;
}

}  // namespace

Scene parse_scene(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SceneError(std::string("scene: invalid JSON: ") + e.what());
  }
  require_keys(root, "scene",
               {"robot", "world", "ee_path", "grid", "pipeline", "nags", "start"});

  Scene scene{parse_robot(root["robot"]), parse_world(root["world"]),
              parse_path(root["ee_path"]), PipelineConfig{}};

  const json& grid = root["grid"];
  require_keys(grid, "grid", {"dx", "dy", "dt"},
               {"collision_step", "epsilon_flip", "t_scale"});
  scene.pipeline.grid.dx = get_number(grid["dx"], "grid.dx");
  scene.pipeline.grid.dy = get_number(grid["dy"], "grid.dy");
  scene.pipeline.grid.dt = get_number(grid["dt"], "grid.dt");
  scene.pipeline.grid.x_max = scene.world.x_max;
  scene.pipeline.grid.y_max = scene.world.y_max;
  if (grid.contains("collision_step"))
    scene.pipeline.graph_options.collision_step =
        get_number(grid["collision_step"], "grid.collision_step");
  if (grid.contains("epsilon_flip"))
    scene.pipeline.graph_options.epsilon_flip =
        get_number(grid["epsilon_flip"], "grid.epsilon_flip");
  if (grid.contains("t_scale"))
    scene.pipeline.graph_options.t_scale = get_number(grid["t_scale"], "grid.t_scale");

  const json& pipeline = root["pipeline"];
  require_keys(pipeline, "pipeline", {"n", "T", "dt", "clearance_margin"});
  scene.pipeline.n = get_int(pipeline["n"], "pipeline.n");
  scene.pipeline.T = get_int(pipeline["T"], "pipeline.T");
  scene.pipeline.dt = get_number(pipeline["dt"], "pipeline.dt");
  scene.pipeline.clearance_margin =
      get_number(pipeline["clearance_margin"], "pipeline.clearance_margin");

  const json& nags = root["nags"];
  require_keys(nags, "nags", {"variant", "goal"},
               {"distinct_goal_positions_are_distinct_classes"});
  const std::string variant = nags["variant"].get<std::string>();
  if (variant == "generalized")
    scene.pipeline.variant = NagsVariant::kGeneralized;
  else if (variant == "modified")
    scene.pipeline.variant = NagsVariant::kModified;
  else
    fail("nags.variant", "must be \"generalized\" or \"modified\"");
  if (nags["goal"].is_string()) {
    if (nags["goal"].get<std::string>() != "t1_any")
      fail("nags.goal", "must be \"t1_any\" or a cell {x, y, w}");
    scene.pipeline.goal.reset();
  } else {
    scene.pipeline.goal = parse_cell(nags["goal"], "nags.goal");
  }
  if (nags.contains("distinct_goal_positions_are_distinct_classes")) {
    const json& flag = nags["distinct_goal_positions_are_distinct_classes"];
    if (!flag.is_boolean())
      fail("nags.distinct_goal_positions_are_distinct_classes", "expected a bool");
    scene.pipeline.distinct_goal_positions_are_distinct_classes = flag.get<bool>();
  }

  scene.pipeline.start = parse_cell(root["start"], "start");
  try {
    scene.pipeline.validate();
  } catch (const std::invalid_argument& e) {
    throw SceneError(e.what());
  }
  return scene;
}

Scene load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneError("scene: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scene(buffer.str());
}

namespace {

ordered_json trajectory_rows(const Trajectory& traj) {
  ordered_json rows = ordered_json::array();
  for (int k = 0; k <= traj.T; ++k) {
    ordered_json row;
    row["t"] = static_cast<double>(k) / traj.T;
    row["x_b"] = {traj.base[k].x(), traj.base[k].y()};
    row["theta"] = traj.heading[k];
    row["x_w"] = {traj.elbow[k].x(), traj.elbow[k].y(), traj.elbow[k].z()};
    row["x_e"] = {traj.ee[k].x(), traj.ee[k].y(), traj.ee[k].z()};
    row["v"] = k < traj.T ? traj.v[k] : 0.0;
    row["omega"] = k < traj.T ? traj.omega[k] : 0.0;
    row["dxw"] = k < traj.T
                     ? ordered_json{traj.delta_elbow[k].x(), traj.delta_elbow[k].y(),
                                    traj.delta_elbow[k].z()}
                     : ordered_json{0.0, 0.0, 0.0};
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string result_to_json(const PipelineResult& result, bool fixed_timings) {
  ordered_json root;
  root["guesses"] = ordered_json::array();
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const GuessRecord& record = result.records[i];
    ordered_json rec;
    rec["h_class_label"] = static_cast<int>(i) + 1;
    rec["converged"] = record.solve_ok;
    rec["cost"] = record.report.cost;
    rec["trajectory"] = trajectory_rows(record.trajectory);
    root["guesses"].push_back(std::move(rec));
  }
  root["best_index"] = result.best_index;
  ordered_json timing;
  timing["graph_s"] = fixed_timings ? 0.0 : result.timings.graph_s;
  timing["nags_s"] = fixed_timings ? 0.0 : result.timings.nags_s;
  ordered_json solves = ordered_json::array();
  for (double s : result.timings.solve_s) solves.push_back(fixed_timings ? 0.0 : s);
  timing["solve_s"] = std::move(solves);
  root["timing"] = std::move(timing);
  return root.dump(2) + "\n";
}

std::string trajectory_to_json(const Trajectory& traj) {
  ordered_json root;
  root["trajectory"] = trajectory_rows(traj);
  return root.dump(2) + "\n";
}

ResultSummary parse_result(const std::string& json_text) {
  const json root = json::parse(json_text);
  ResultSummary summary;
  summary.best_index = root.at("best_index").get<int>();
  for (const json& rec : root.at("guesses")) {
    summary.costs.push_back(rec.at("cost").get<double>());
    summary.converged.push_back(rec.at("converged").get<bool>());
  }
  return summary;
}

}  // namespace topoplan
