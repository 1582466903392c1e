#include "topoplan/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace topoplan {

void World::validate() const {
  if (!(x_max > 0.0)) throw std::invalid_argument("world.x_max: must be > 0");
  if (!(y_max > 0.0)) throw std::invalid_argument("world.y_max: must be > 0");
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const std::string prefix = "world.obstacles[" + std::to_string(i) + "]";
    if (const Sphere* s = std::get_if<Sphere>(&obstacles[i])) {
      if (!(s->radius > 0.0))
        throw std::invalid_argument(prefix + ".radius: must be > 0");
    } else {
      const Box& b = std::get<Box>(obstacles[i]);
      for (int k = 0; k < 3; ++k) {
        if (!(b.min[k] < b.max[k]))
          throw std::invalid_argument(prefix + ".min: must be < max componentwise");
      }
    }
  }
}

std::array<Capsule, 3> robot_capsules(const RobotModel& robot, const FullConfig& q) {
  const Eigen::Vector3d shoulder = q.base_perp();
  return {
      Capsule{{q.base.x(), q.base.y(), -robot.base_depth}, shoulder, robot.base_radius},
      Capsule{shoulder, q.elbow, robot.arm_radius},
      Capsule{q.elbow, q.ee, robot.arm_radius},
  };
}

double segment_point_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                              const Eigen::Vector3d& p, double* t_star) {
  const Eigen::Vector3d ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  if (t_star) *t_star = t;
  return (a + t * ab - p).norm();
}

double point_box_signed_distance(const Eigen::Vector3d& p, const Box& box) {
  const Eigen::Vector3d c = 0.5 * (box.min + box.max);
  const Eigen::Vector3d h = 0.5 * (box.max - box.min);
  const Eigen::Vector3d q = (p - c).cwiseAbs() - h;
  const double outside = q.cwiseMax(0.0).norm();
  const double inside = std::min(q.maxCoeff(), 0.0);
  return outside + inside;
}

double segment_box_signed_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                   const Box& box, double* t_star) {
  // Signed distance to a convex set is convex, hence so is its restriction to
  // the segment; ternary search converges to a global minimizer.
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    const double f1 = point_box_signed_distance(a + m1 * (b - a), box);
    const double f2 = point_box_signed_distance(a + m2 * (b - a), box);
    if (f1 <= f2)
      hi = m2;
    else
      lo = m1;
  }
  const double t = 0.5 * (lo + hi);
  if (t_star) *t_star = t;
  return point_box_signed_distance(a + t * (b - a), box);
}

double capsule_obstacle_clearance(const Capsule& capsule, const Obstacle& obstacle) {
  if (const Sphere* s = std::get_if<Sphere>(&obstacle)) {
    const double d = segment_point_distance(capsule.a, capsule.b, s->center);
    return d - s->radius - capsule.radius;
  }
  const Box& box = std::get<Box>(obstacle);
  return segment_box_signed_distance(capsule.a, capsule.b, box) - capsule.radius;
}

std::vector<double> signed_clearance(const World& world, const RobotModel& robot,
                                     const FullConfig& q) {
  std::vector<double> out;
  out.reserve(3 * world.obstacles.size());
  const auto capsules = robot_capsules(robot, q);
  for (const Capsule& capsule : capsules) {
    for (const Obstacle& obstacle : world.obstacles) {
      out.push_back(capsule_obstacle_clearance(capsule, obstacle));
    }
  }
  return out;
}

bool obs(const World& world, const RobotModel& robot, const FullConfig& q) {
  const auto capsules = robot_capsules(robot, q);
  for (const Capsule& capsule : capsules) {
    for (const Obstacle& obstacle : world.obstacles) {
      if (capsule_obstacle_clearance(capsule, obstacle) < 0.0) return true;
    }
  }
  return false;
}

bool seg_obs(const World& world, const RobotModel& robot, const FullConfig& q1,
             const FullConfig& q2, int sub) {
  if (sub < 1) throw std::invalid_argument("seg_obs: sub must be >= 1");
  for (int i = 0; i <= sub; ++i) {
    const double alpha = static_cast<double>(i) / sub;
    FullConfig q;
    q.base = (1.0 - alpha) * q1.base + alpha * q2.base;
    q.elbow = (1.0 - alpha) * q1.elbow + alpha * q2.elbow;
    q.ee = (1.0 - alpha) * q1.ee + alpha * q2.ee;
    q.heading = q1.heading;
    if (obs(world, robot, q)) return true;
  }
  return false;
}

int collision_subsample_count(const FullConfig& q1, const FullConfig& q2,
                              double max_step) {
  const double motion = std::max({(q2.base - q1.base).norm(),
                                  (q2.elbow - q1.elbow).norm(),
                                  (q2.ee - q1.ee).norm()});
  if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be > 0");
  return std::max(1, static_cast<int>(std::ceil(motion / max_step)));
}

}  // namespace topoplan
