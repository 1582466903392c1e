#include "topoplan/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace topoplan {

namespace {
constexpr double kPlaneEps = 1e-12;  // xy-projection coincidence threshold
}

void RobotModel::validate() const {
  if (!(l1 > 0.0)) throw std::invalid_argument("robot.l1: must be > 0");
  if (!(l2 > 0.0)) throw std::invalid_argument("robot.l2: must be > 0");
  if (arm_radius < 0.0) throw std::invalid_argument("robot.arm_radius: must be >= 0");
  if (base_radius < 0.0) throw std::invalid_argument("robot.base_radius: must be >= 0");
  if (base_depth < 0.0) throw std::invalid_argument("robot.base_depth: must be >= 0");
}

EePath::EePath(std::vector<double> t, std::vector<Eigen::Vector3d> points)
    : t_(std::move(t)), points_(std::move(points)) {
  if (t_.size() != points_.size())
    throw std::invalid_argument("ee_path: t/point count mismatch");
  if (t_.size() < 2) throw std::invalid_argument("ee_path: needs at least 2 samples");
  if (std::abs(t_.front()) > 1e-12)
    throw std::invalid_argument("ee_path: first sample must have t = 0");
  if (std::abs(t_.back() - 1.0) > 1e-12)
    throw std::invalid_argument("ee_path: last sample must have t = 1");
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!(t_[i] > t_[i - 1]))
      throw std::invalid_argument("ee_path: t must be strictly increasing");
  }
  t_.front() = 0.0;
  t_.back() = 1.0;
}

Eigen::Vector3d EePath::position(double t) const {
  if (t < 0.0 || t > 1.0)
    throw std::out_of_range("ee_path: parameter outside [0, 1]");
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  if (it == t_.begin()) return points_.front();
  if (it == t_.end()) return points_.back();
  const std::size_t hi = static_cast<std::size_t>(it - t_.begin());
  const std::size_t lo = hi - 1;
  const double span = t_[hi] - t_[lo];
  const double a = (t - t_[lo]) / span;
  return (1.0 - a) * points_[lo] + a * points_[hi];
}

IkResult elbow_ik(const RobotModel& robot, const Eigen::Vector2d& base,
                  const Eigen::Vector3d& ee, int w) {
  IkResult result;
  const Eigen::Vector3d shoulder(base.x(), base.y(), 0.0);
  const Eigen::Vector3d rel = ee - shoulder;
  const double rho = rel.head<2>().norm();  // horizontal offset in the plane
  const double zeta = rel.z();
  const double d = rel.norm();

  if (d > robot.l1 + robot.l2 || d < std::abs(robot.l1 - robot.l2)) {
    result.status = IkStatus::kUnreachable;
    return result;
  }
  if (rho < kPlaneEps) {
    result.status = IkStatus::kDegenerateVertical;
    return result;
  }

  // Planar 2-link IK inside the vertical plane spanned by (rho, z) axes.
  const double along = (robot.l1 * robot.l1 - robot.l2 * robot.l2 + d * d) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, robot.l1 * robot.l1 - along * along));
  const double sign = (w >= 0) ? 1.0 : -1.0;
  // Unit vectors of the plane: e = toward ee, n = e rotated +90deg. The
  // n-component of +|h| has world-z coefficient rho/d > 0, so sign=+1 is the
  // higher-elbow ("elbow up") branch.
  const double p_rho = along * (rho / d) - sign * h * (zeta / d);
  const double p_z = along * (zeta / d) + sign * h * (rho / d);

  const Eigen::Vector2d dir = rel.head<2>() / rho;
  result.status = IkStatus::kOk;
  result.elbow = shoulder + Eigen::Vector3d(dir.x() * p_rho, dir.y() * p_rho, p_z);
  return result;
}

bool reach_feasible(const RobotModel& robot, const Eigen::Vector2d& base,
                    const Eigen::Vector3d& ee) {
  const Eigen::Vector3d shoulder(base.x(), base.y(), 0.0);
  const double d = (ee - shoulder).norm();
  return d >= std::abs(robot.l1 - robot.l2) && d <= robot.l1 + robot.l2;
}

FullConfigResult reduced_to_full(const RobotModel& robot, const EePath& path,
                                 const ReducedConfig& rc, double heading) {
  FullConfigResult out;
  const Eigen::Vector3d ee = path.position(rc.t);
  const Eigen::Vector2d base(rc.x, rc.y);
  const IkResult ik = elbow_ik(robot, base, ee, rc.w);
  out.status = ik.status;
  if (!ik.ok()) return out;
  out.config.base = base;
  out.config.heading = heading;
  out.config.elbow = ik.elbow;
  out.config.ee = ee;
  return out;
}

}  // namespace topoplan
