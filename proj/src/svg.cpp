#include "topoplan/svg.hpp"

#include <cstdio>
#include <fstream>

namespace topoplan {

namespace {

constexpr double kScale = 100.0;  // px per meter
constexpr double kMargin = 20.0;  // px

std::string fmt(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f", value);
  return buffer;
}

struct Mapper {
  double x_max, y_max;
  double px(double x) const { return kMargin + (x + x_max) * kScale; }
  double py(double y) const { return kMargin + (y_max - y) * kScale; }
  double width() const { return 2.0 * kMargin + 2.0 * x_max * kScale; }
  double height() const { return 2.0 * kMargin + 2.0 * y_max * kScale; }
};

void append_polyline(std::string& out, const Mapper& map,
                     const std::vector<Eigen::Vector2d>& pts, const char* color,
                     double stroke_width) {
  if (pts.empty()) return;
  if (pts.size() == 1) {
    out += "  <circle cx=\"" + fmt(map.px(pts[0].x())) + "\" cy=\"" +
           fmt(map.py(pts[0].y())) + "\" r=\"" + fmt(stroke_width * 1.5) +
           "\" fill=\"" + color + "\"/>\n";
    return;
  }
  out += "  <polyline fill=\"none\" stroke=\"";
  out += color;
  out += "\" stroke-width=\"" + fmt(stroke_width) + "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += fmt(map.px(pts[i].x())) + "," + fmt(map.py(pts[i].y()));
  }
  out += "\"/>\n";
}

}  // namespace

std::string render_scene_svg(
    const World& world, const std::vector<Eigen::Vector2d>& ee_path,
    const std::vector<std::vector<Eigen::Vector2d>>& elbow_paths,
    const std::vector<std::vector<Eigen::Vector2d>>& base_paths) {
  const Mapper map{world.x_max, world.y_max};
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         fmt(map.width()) + "\" height=\"" + fmt(map.height()) + "\" viewBox=\"0 0 " +
         fmt(map.width()) + " " + fmt(map.height()) + "\">\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"" + fmt(map.width()) + "\" height=\"" +
         fmt(map.height()) + "\" fill=\"white\"/>\n";

  for (const Obstacle& obstacle : world.obstacles) {
    if (const Sphere* s = std::get_if<Sphere>(&obstacle)) {
      out += "  <circle cx=\"" + fmt(map.px(s->center.x())) + "\" cy=\"" +
             fmt(map.py(s->center.y())) + "\" r=\"" + fmt(s->radius * kScale) +
             "\" fill=\"#b0b0b0\"/>\n";
    } else {
      const Box& b = std::get<Box>(obstacle);
      out += "  <rect x=\"" + fmt(map.px(b.min.x())) + "\" y=\"" +
             fmt(map.py(b.max.y())) + "\" width=\"" +
             fmt((b.max.x() - b.min.x()) * kScale) + "\" height=\"" +
             fmt((b.max.y() - b.min.y()) * kScale) + "\" fill=\"#b0b0b0\"/>\n";
    }
  }

  append_polyline(out, map, ee_path, "#1f5fd0", 2.0);
  for (const auto& elbow : elbow_paths) append_polyline(out, map, elbow, "#2ca04a", 1.5);
  for (const auto& base : base_paths) append_polyline(out, map, base, "#d03030", 1.5);
  out += "</svg>\n";
  return out;
}

void plot_svg(const PipelineResult& result, const World& world, const EePath& path,
              const std::string& out_dir) {
  std::vector<Eigen::Vector2d> ee_xy;
  for (const Eigen::Vector3d& p : path.points()) ee_xy.push_back(p.head<2>());

  auto write_file = [](const std::string& file_path, const std::string& content) {
    std::ofstream out(file_path, std::ios::binary);
    if (!out) throw IoError("svg: cannot open " + file_path);
    out << content;
    if (!out) throw IoError("svg: write failed for " + file_path);
  };

  std::vector<std::vector<Eigen::Vector2d>> all_elbows, all_bases;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const Trajectory& traj = result.records[i].trajectory;
    std::vector<Eigen::Vector2d> elbow, base;
    for (int k = 0; k <= traj.T; ++k) {
      elbow.push_back(traj.elbow[k].head<2>());
      base.push_back(traj.base[k]);
    }
    write_file(out_dir + "/plot_" + std::to_string(i) + ".svg",
               render_scene_svg(world, ee_xy, {elbow}, {base}));
    all_elbows.push_back(std::move(elbow));
    all_bases.push_back(std::move(base));
  }
  write_file(out_dir + "/overlay.svg",
             render_scene_svg(world, ee_xy, all_elbows, all_bases));
}

}  // namespace topoplan
