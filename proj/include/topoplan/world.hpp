#pragma once

#include <array>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "topoplan/model.hpp"

namespace topoplan {

struct Sphere {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.0;
};

struct Box {
  Eigen::Vector3d min = Eigen::Vector3d::Zero();
  Eigen::Vector3d max = Eigen::Vector3d::Zero();
};

using Obstacle = std::variant<Sphere, Box>;

struct World {
  std::vector<Obstacle> obstacles;
  double x_max = 0.0;  // base position bounds: |x| <= x_max, |y| <= y_max
  double y_max = 0.0;

  void validate() const;
};

// Capsule = segment swept by a sphere of the given radius.
struct Capsule {
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  double radius = 0.0;
};

// The robot's collision geometry at a configuration: base column, upperarm,
// forearm (in that order).
std::array<Capsule, 3> robot_capsules(const RobotModel& robot, const FullConfig& q);

// Distance from point p to segment [a, b]; t_star receives the segment
// parameter of the closest point.
double segment_point_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                              const Eigen::Vector3d& p, double* t_star = nullptr);

// Signed distance from point p to the box surface (negative inside).
double point_box_signed_distance(const Eigen::Vector3d& p, const Box& box);

// min_t signed_distance(a + t (b - a), box) over t in [0, 1]. The integrand is
// convex in t, minimized by ternary search. t_star receives the minimizer.
double segment_box_signed_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                   const Box& box, double* t_star = nullptr);

// Signed distance between a capsule and an obstacle surface minus the capsule
// radius; negative means penetration.
double capsule_obstacle_clearance(const Capsule& capsule, const Obstacle& obstacle);

// Per-(capsule, obstacle) clearances, capsules major, obstacles minor.
std::vector<double> signed_clearance(const World& world, const RobotModel& robot,
                                     const FullConfig& q);

// True iff any robot capsule intersects any obstacle.
bool obs(const World& world, const RobotModel& robot, const FullConfig& q);

// Checks obs at sub+1 configurations interpolated linearly (base, elbow, ee
// componentwise; heading ignored) between q1 and q2, endpoints included.
bool seg_obs(const World& world, const RobotModel& robot, const FullConfig& q1,
             const FullConfig& q2, int sub);

// Number of interpolation steps so that no tracked point moves more than
// max_step between consecutive samples.
int collision_subsample_count(const FullConfig& q1, const FullConfig& q2,
                              double max_step);

}  // namespace topoplan
