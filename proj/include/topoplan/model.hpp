#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace topoplan {

// Simplified mobile manipulator: a two-link arm (shoulder at the base axis,
// in the plane z = 0) on top of a differential drive base.
struct RobotModel {
  double l1 = 0.0;           // upperarm length [m]
  double l2 = 0.0;           // forearm length [m]
  double arm_radius = 0.0;   // capsule radius of both arm links [m]
  double base_radius = 0.0;  // base footprint cylinder radius [m]
  double base_depth = 0.0;   // base cylinder extends over z in [-base_depth, 0]

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Reduced coordinates (x, y, t, w) of the low-dimensional configuration space.
struct ReducedConfig {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;  // end effector path parameter in [0, 1]
  int w = 1;       // elbow branch, +1 up / -1 down
};

// Full configuration q = [x_b, theta, x_w, x_e].
struct FullConfig {
  Eigen::Vector2d base = Eigen::Vector2d::Zero();
  double heading = 0.0;
  Eigen::Vector3d elbow = Eigen::Vector3d::Zero();
  Eigen::Vector3d ee = Eigen::Vector3d::Zero();

  Eigen::Vector3d base_perp() const { return {base.x(), base.y(), 0.0}; }
};

// Piecewise-linear end effector path x_e(t), t in [0, 1].
class EePath {
 public:
  // Samples must have strictly increasing t with t.front() == 0, t.back() == 1.
  EePath(std::vector<double> t, std::vector<Eigen::Vector3d> points);

  // Interpolated position; throws std::out_of_range for t outside [0, 1].
  Eigen::Vector3d position(double t) const;

  const std::vector<double>& knots() const { return t_; }
  const std::vector<Eigen::Vector3d>& points() const { return points_; }

 private:
  std::vector<double> t_;
  std::vector<Eigen::Vector3d> points_;
};

enum class IkStatus {
  kOk,
  kUnreachable,          // target outside [|l1-l2|, l1+l2]
  kDegenerateVertical,   // ee directly above the base, elbow plane undefined
};

struct IkResult {
  IkStatus status = IkStatus::kUnreachable;
  Eigen::Vector3d elbow = Eigen::Vector3d::Zero();

  bool ok() const { return status == IkStatus::kOk; }
};

// Elbow position for the given branch. The elbow lies in the vertical plane
// through base_perp and ee; w = +1 picks the solution with the larger z.
IkResult elbow_ik(const RobotModel& robot, const Eigen::Vector2d& base,
                  const Eigen::Vector3d& ee, int w);

// True iff |l1 - l2| <= ||[x, y, 0] - ee|| <= l1 + l2.
bool reach_feasible(const RobotModel& robot, const Eigen::Vector2d& base,
                    const Eigen::Vector3d& ee);

struct FullConfigResult {
  IkStatus status = IkStatus::kUnreachable;
  FullConfig config;

  bool ok() const { return status == IkStatus::kOk; }
};

// Maps reduced coordinates back to a full configuration.
FullConfigResult reduced_to_full(const RobotModel& robot, const EePath& path,
                                 const ReducedConfig& rc, double heading = 0.0);

}  // namespace topoplan
