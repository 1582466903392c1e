#include "topoplan/trajopt.hpp"

#include <algorithm>
#include <cmath>

namespace topoplan {

namespace {

double wrap_to_pi(double angle) {
  while (angle > M_PI) angle -= 2.0 * M_PI;
  while (angle <= -M_PI) angle += 2.0 * M_PI;
  return angle;
}

// Clearance between a capsule and an obstacle together with the gradients of
// the distance term with respect to the capsule endpoints.
struct ClearanceGrad {
  double value = 0.0;
  Eigen::Vector3d d_a = Eigen::Vector3d::Zero();
  Eigen::Vector3d d_b = Eigen::Vector3d::Zero();
};

// Direction of steepest increase of the box signed distance at the segment
// minimizer. Outside the box this is the unit vector toward the closest point.
// Inside, the minimum of max_i(|p_i| - h_i) along a penetrating segment
// generically sits on a two-face kink; there the correct envelope gradient is
// the slope-weighted convex combination of the tied face normals.
Eigen::Vector3d box_distance_direction(const Eigen::Vector3d& a,
                                       const Eigen::Vector3d& b, double t,
                                       const Box& box) {
  const Eigen::Vector3d p = a + t * (b - a);
  const Eigen::Vector3d c = 0.5 * (box.min + box.max);
  const Eigen::Vector3d h = 0.5 * (box.max - box.min);
  const Eigen::Vector3d rel = p - c;
  const Eigen::Vector3d q = rel.cwiseAbs() - h;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
  if ((q.array() > 0.0).any()) {
    const Eigen::Vector3d m = q.cwiseMax(0.0);
    const double norm = m.norm();
    for (int i = 0; i < 3; ++i) {
      if (q[i] > 0.0) grad[i] = (rel[i] >= 0.0 ? 1.0 : -1.0) * m[i] / norm;
    }
    return grad;
  }
  int best = 0;
  q.maxCoeff(&best);
  const double sign_best = rel[best] >= 0.0 ? 1.0 : -1.0;
  grad[best] = sign_best;
  if (t <= 1e-9 || t >= 1.0 - 1e-9) return grad;

  // Interior minimizer on the kink of the best face's own |.|: the minimum
  // value is pinned to the half-extent and the gradient vanishes.
  if (std::abs(rel[best]) <= 1e-7 * (1.0 + h[best])) return Eigen::Vector3d::Zero();

  // Otherwise the interior minimizer sits where the best face crosses a tied
  // face of opposite (or zero) t-slope; blend the face normals by the
  // envelope weights. A zero-slope partner receives the full weight.
  const double tie_eps = 1e-7 * (1.0 + std::abs(q[best]));
  const double slope_i = sign_best * (b[best] - a[best]);
  for (int f = 0; f < 3; ++f) {
    if (f == best || q[f] < q[best] - tie_eps) continue;
    const double sign_f = rel[f] >= 0.0 ? 1.0 : -1.0;
    const double slope_f = sign_f * (b[f] - a[f]);
    if (slope_i * slope_f > 0.0) continue;
    if (std::abs(slope_f - slope_i) < 1e-12) continue;
    grad.setZero();
    grad[best] = slope_f * sign_best / (slope_f - slope_i);
    grad[f] = -slope_i * sign_f / (slope_f - slope_i);
    return grad;
  }
  return grad;
}

ClearanceGrad clearance_with_grad(const Capsule& capsule, const Obstacle& obstacle) {
  ClearanceGrad out;
  double t = 0.0;
  if (const Sphere* s = std::get_if<Sphere>(&obstacle)) {
    const double dist = segment_point_distance(capsule.a, capsule.b, s->center, &t);
    out.value = dist - s->radius - capsule.radius;
    if (dist > 1e-12) {
      const Eigen::Vector3d closest = capsule.a + t * (capsule.b - capsule.a);
      const Eigen::Vector3d u = (closest - s->center) / dist;
      out.d_a = (1.0 - t) * u;
      out.d_b = t * u;
    }
    return out;
  }
  const Box& box = std::get<Box>(obstacle);
  const double sd = segment_box_signed_distance(capsule.a, capsule.b, box, &t);
  out.value = sd - capsule.radius;
  const Eigen::Vector3d u = box_distance_direction(capsule.a, capsule.b, t, box);
  out.d_a = (1.0 - t) * u;
  out.d_b = t * u;
  return out;
}

}  // namespace

void Trajectory::validate_shape() const {
  const std::size_t states = static_cast<std::size_t>(T) + 1;
  const std::size_t controls = static_cast<std::size_t>(T);
  if (T < 1 || dt <= 0.0 || base.size() != states || heading.size() != states ||
      elbow.size() != states || ee.size() != states || a.size() != states ||
      b.size() != states || v.size() != controls || omega.size() != controls ||
      delta_elbow.size() != controls)
    throw std::invalid_argument("trajectory: inconsistent array lengths");
}

double evaluate_cost(const Trajectory& traj) {
  double cost = 0.0;
  for (int k = 0; k < traj.T; ++k) {
    cost += traj.v[k] * traj.v[k] + traj.omega[k] * traj.omega[k] +
            traj.delta_elbow[k].squaredNorm();
  }
  return cost;
}

Trajectory seed_from_guess(const GuessPath& guess, const RobotModel& robot,
                           const EePath& path, int T, double dt) {
  if (guess.t.empty() || guess.base.size() != guess.t.size() ||
      guess.elbow.size() != guess.t.size())
    throw std::invalid_argument("seed_from_guess: empty or mismatched guess");
  for (std::size_t i = 1; i < guess.t.size(); ++i) {
    if (guess.t[i] < guess.t[i - 1])
      throw std::invalid_argument("seed_from_guess: t must be nondecreasing");
  }
  if (guess.t.back() - guess.t.front() < 1e-12)
    throw DegenerateGuess("seed_from_guess: all t identical");
  if (T < 2 || dt <= 0.0)
    throw std::invalid_argument("seed_from_guess: need T >= 2 and dt > 0");

  // Cumulative arc length, used to break ties inside constant-t runs.
  const std::size_t m = guess.t.size();
  std::vector<double> arc(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    arc[i] = arc[i - 1] + (guess.base[i] - guess.base[i - 1]).norm() +
             (guess.elbow[i] - guess.elbow[i - 1]).norm();
  }

  auto sample_base = [&](double tq) -> Eigen::Vector2d {
    tq = std::clamp(tq, guess.t.front(), guess.t.back());
    auto it = std::upper_bound(guess.t.begin(), guess.t.end(), tq);
    std::size_t p = (it == guess.t.begin()) ? 0 : (it - guess.t.begin() - 1);
    if (std::abs(guess.t[p] - tq) <= 1e-12) {
      // Exact hit on a knot; a constant-t run resolves to its arc midpoint.
      std::size_t p0 = p;
      while (p0 > 0 && guess.t[p0 - 1] == guess.t[p]) --p0;
      if (p0 == p) return guess.base[p];
      const double target = 0.5 * (arc[p0] + arc[p]);
      for (std::size_t j = p0; j < p; ++j) {
        if (arc[j + 1] >= target) {
          const double span = arc[j + 1] - arc[j];
          const double lam = span > 0.0 ? (target - arc[j]) / span : 0.0;
          return (1.0 - lam) * guess.base[j] + lam * guess.base[j + 1];
        }
      }
      return guess.base[p];
    }
    const std::size_t q = p + 1;
    const double lam = (tq - guess.t[p]) / (guess.t[q] - guess.t[p]);
    return (1.0 - lam) * guess.base[p] + lam * guess.base[q];
  };
  auto sample_elbow = [&](double tq) -> Eigen::Vector3d {
    tq = std::clamp(tq, guess.t.front(), guess.t.back());
    auto it = std::upper_bound(guess.t.begin(), guess.t.end(), tq);
    std::size_t p = (it == guess.t.begin()) ? 0 : (it - guess.t.begin() - 1);
    if (std::abs(guess.t[p] - tq) <= 1e-12) {
      std::size_t p0 = p;
      while (p0 > 0 && guess.t[p0 - 1] == guess.t[p]) --p0;
      if (p0 == p) return guess.elbow[p];
      const double target = 0.5 * (arc[p0] + arc[p]);
      for (std::size_t j = p0; j < p; ++j) {
        if (arc[j + 1] >= target) {
          const double span = arc[j + 1] - arc[j];
          const double lam = span > 0.0 ? (target - arc[j]) / span : 0.0;
          return (1.0 - lam) * guess.elbow[j] + lam * guess.elbow[j + 1];
        }
      }
      return guess.elbow[p];
    }
    const std::size_t q = p + 1;
    const double lam = (tq - guess.t[p]) / (guess.t[q] - guess.t[p]);
    return (1.0 - lam) * guess.elbow[p] + lam * guess.elbow[q];
  };

  Trajectory traj;
  traj.T = T;
  traj.dt = dt;
  traj.base.resize(T + 1);
  traj.heading.assign(T + 1, 0.0);
  traj.elbow.resize(T + 1);
  traj.ee.resize(T + 1);
  traj.a.assign(T + 1, 0.0);
  traj.b.assign(T + 1, 0.0);
  traj.v.assign(T, 0.0);
  traj.omega.assign(T, 0.0);
  traj.delta_elbow.assign(T, Eigen::Vector3d::Zero());

  for (int k = 0; k <= T; ++k) {
    const double tk = static_cast<double>(k) / T;
    traj.ee[k] = path.position(tk);
    Eigen::Vector2d base = sample_base(tk);
    const Eigen::Vector3d elbow_raw = sample_elbow(tk);

    // Keep the base inside the reach annulus and off the vertical axis so the
    // per-step kinematics can be solved exactly.
    Eigen::Vector2d offset = base - traj.ee[k].head<2>();
    if (offset.norm() < 1e-9) {
      offset = Eigen::Vector2d(1e-9, 0.0);
      base = traj.ee[k].head<2>() + offset;
    }
    const double z = traj.ee[k].z();
    const double d = std::sqrt(offset.squaredNorm() + z * z);
    const double d_max = robot.l1 + robot.l2;
    const double d_min = std::abs(robot.l1 - robot.l2);
    if (d > d_max || d < d_min) {
      const double d_target = std::clamp(d, d_min + 1e-9, d_max - 1e-9);
      const double rho2 = d_target * d_target - z * z;
      if (rho2 <= 0.0)
        throw DegenerateGuess("seed_from_guess: end effector out of reach");
      base = traj.ee[k].head<2>() + offset.normalized() * std::sqrt(rho2);
    }
    traj.base[k] = base;

    const IkResult up = elbow_ik(robot, base, traj.ee[k], +1);
    const IkResult down = elbow_ik(robot, base, traj.ee[k], -1);
    if (!up.ok() || !down.ok())
      throw DegenerateGuess("seed_from_guess: kinematics unsolvable at a sample");
    traj.elbow[k] = ((up.elbow - elbow_raw).norm() <= (down.elbow - elbow_raw).norm())
                        ? up.elbow
                        : down.elbow;

    const Eigen::Vector3d shoulder(base.x(), base.y(), 0.0);
    const Eigen::Vector3d r = traj.ee[k] - shoulder;
    const Eigen::Vector3d e = traj.elbow[k] - shoulder;
    const double denom = r.head<2>().squaredNorm();
    traj.a[k] = denom > 0.0 ? e.head<2>().dot(r.head<2>()) / denom : 0.0;
    traj.b[k] = e.z() - traj.a[k] * r.z();
  }

  // Headings from base displacements, carried over tiny steps and unwrapped
  // so the integrated turn rate reproduces them exactly.
  std::vector<bool> defined(T, false);
  std::vector<double> raw(T, 0.0);
  for (int k = 0; k < T; ++k) {
    const Eigen::Vector2d d = traj.base[k + 1] - traj.base[k];
    if (d.norm() >= 1e-9) {
      raw[k] = std::atan2(d.y(), d.x());
      defined[k] = true;
    }
  }
  int first_defined = -1;
  for (int k = 0; k < T; ++k) {
    if (defined[k]) {
      first_defined = k;
      break;
    }
  }
  double heading = first_defined >= 0 ? raw[first_defined] : 0.0;
  for (int k = 0; k < T; ++k) {
    if (defined[k]) heading += wrap_to_pi(raw[k] - heading);
    traj.heading[k] = heading;
  }
  traj.heading[T] = traj.heading[T - 1];

  for (int k = 0; k < T; ++k) {
    const Eigen::Vector2d d = traj.base[k + 1] - traj.base[k];
    const Eigen::Vector2d dir(std::cos(traj.heading[k]), std::sin(traj.heading[k]));
    traj.v[k] = d.dot(dir) / dt;
    traj.omega[k] = (traj.heading[k + 1] - traj.heading[k]) / dt;
    traj.delta_elbow[k] = (traj.elbow[k + 1] - traj.elbow[k]) / dt;
  }
  return traj;
}

TrajOptProblem::TrajOptProblem(const World& world, const RobotModel& robot,
                               const EePath& path, int T, double dt,
                               double clearance_margin)
    : world_(world), robot_(robot), T_(T), dt_(dt), margin_(clearance_margin) {
  if (T < 2) throw std::invalid_argument("transcribe: T must be >= 2");
  if (dt <= 0.0) throw std::invalid_argument("transcribe: dt must be > 0");
  robot_.validate();
  world_.validate();
  ee_.resize(T + 1);
  for (int k = 0; k <= T; ++k)
    ee_[k] = path.position(static_cast<double>(k) / T);
}

int TrajOptProblem::num_vars() const { return 8 * (T_ + 1) + 5 * T_; }

int TrajOptProblem::num_eq() const { return 5 * (T_ + 1) + 6 * T_; }

int TrajOptProblem::num_ineq() const {
  return 3 * (T_ + 1) * static_cast<int>(world_.obstacles.size());
}

double TrajOptProblem::objective(const Eigen::VectorXd& x,
                                 Eigen::VectorXd* grad) const {
  double f = 0.0;
  for (int k = 0; k < T_; ++k) {
    const double v = x[idx_v(k)];
    const double om = x[idx_omega(k)];
    const Eigen::Vector3d dw = x.segment<3>(idx_delta_elbow(k));
    f += v * v + om * om + dw.squaredNorm();
    if (grad) {
      (*grad)[idx_v(k)] += 2.0 * v;
      (*grad)[idx_omega(k)] += 2.0 * om;
      grad->segment<3>(idx_delta_elbow(k)) += 2.0 * dw;
    }
  }
  return f;
}

void TrajOptProblem::eval_eq(const Eigen::VectorXd& x, Eigen::VectorXd& h) const {
  h.resize(num_eq());
  const double l1sq = robot_.l1 * robot_.l1;
  const double l2sq = robot_.l2 * robot_.l2;
  for (int k = 0; k <= T_; ++k) {
    const Eigen::Vector2d base = x.segment<2>(idx_base(k));
    const Eigen::Vector3d shoulder(base.x(), base.y(), 0.0);
    const Eigen::Vector3d elbow = x.segment<3>(idx_elbow(k));
    const double a = x[idx_a(k)];
    const double b = x[idx_b(k)];
    const Eigen::Vector3d e = elbow - shoulder;
    const Eigen::Vector3d r = ee_[k] - shoulder;
    const int row = 5 * k;
    h[row + 0] = e.squaredNorm() - l1sq;
    h[row + 1] = (elbow - ee_[k]).squaredNorm() - l2sq;
    h.segment<3>(row + 2) = e - a * r - Eigen::Vector3d(0, 0, b);
  }
  const int dyn0 = 5 * (T_ + 1);
  for (int k = 0; k < T_; ++k) {
    const double theta = x[idx_heading(k)];
    const double v = x[idx_v(k)];
    const double om = x[idx_omega(k)];
    const int row = dyn0 + 6 * k;
    h[row + 0] = x[idx_base(k + 1) + 0] - x[idx_base(k) + 0] -
                 std::cos(theta) * v * dt_;
    h[row + 1] = x[idx_base(k + 1) + 1] - x[idx_base(k) + 1] -
                 std::sin(theta) * v * dt_;
    h[row + 2] = x[idx_heading(k + 1)] - theta - om * dt_;
    h.segment<3>(row + 3) = x.segment<3>(idx_elbow(k + 1)) -
                            x.segment<3>(idx_elbow(k)) -
                            dt_ * x.segment<3>(idx_delta_elbow(k));
  }
}

void TrajOptProblem::eval_ineq(const Eigen::VectorXd& x, Eigen::VectorXd& g) const {
  g.resize(num_ineq());
  const int n_obs = static_cast<int>(world_.obstacles.size());
  if (n_obs == 0) return;
  FullConfig q;
  for (int k = 0; k <= T_; ++k) {
    q.base = x.segment<2>(idx_base(k));
    q.elbow = x.segment<3>(idx_elbow(k));
    q.ee = ee_[k];
    const auto capsules = robot_capsules(robot_, q);
    for (int c = 0; c < 3; ++c) {
      for (int o = 0; o < n_obs; ++o) {
        const double clearance =
            capsule_obstacle_clearance(capsules[c], world_.obstacles[o]);
        g[(k * 3 + c) * n_obs + o] = margin_ - clearance;
      }
    }
  }
}

void TrajOptProblem::add_constraint_gradients(const Eigen::VectorXd& x,
                                              const Eigen::VectorXd& w_eq,
                                              const Eigen::VectorXd& w_ineq,
                                              Eigen::VectorXd& grad) const {
  for (int k = 0; k <= T_; ++k) {
    const int row = 5 * k;
    const Eigen::Vector2d base = x.segment<2>(idx_base(k));
    const Eigen::Vector3d shoulder(base.x(), base.y(), 0.0);
    const Eigen::Vector3d elbow = x.segment<3>(idx_elbow(k));
    const double a = x[idx_a(k)];
    const Eigen::Vector3d e = elbow - shoulder;
    const Eigen::Vector3d r = ee_[k] - shoulder;

    if (double w = w_eq[row + 0]; w != 0.0) {
      grad.segment<3>(idx_elbow(k)) += w * 2.0 * e;
      grad.segment<2>(idx_base(k)) -= w * 2.0 * e.head<2>();
    }
    if (double w = w_eq[row + 1]; w != 0.0) {
      grad.segment<3>(idx_elbow(k)) += w * 2.0 * (elbow - ee_[k]);
    }
    for (int c = 0; c < 3; ++c) {
      const double w = w_eq[row + 2 + c];
      if (w == 0.0) continue;
      grad[idx_elbow(k) + c] += w;
      if (c < 2) grad[idx_base(k) + c] += w * (a - 1.0);
      grad[idx_a(k)] -= w * r[c];
      if (c == 2) grad[idx_b(k)] -= w;
    }
  }
  const int dyn0 = 5 * (T_ + 1);
  for (int k = 0; k < T_; ++k) {
    const int row = dyn0 + 6 * k;
    const double theta = x[idx_heading(k)];
    const double v = x[idx_v(k)];
    if (double w = w_eq[row + 0]; w != 0.0) {
      grad[idx_base(k + 1) + 0] += w;
      grad[idx_base(k) + 0] -= w;
      grad[idx_heading(k)] += w * std::sin(theta) * v * dt_;
      grad[idx_v(k)] -= w * std::cos(theta) * dt_;
    }
    if (double w = w_eq[row + 1]; w != 0.0) {
      grad[idx_base(k + 1) + 1] += w;
      grad[idx_base(k) + 1] -= w;
      grad[idx_heading(k)] -= w * std::cos(theta) * v * dt_;
      grad[idx_v(k)] -= w * std::sin(theta) * dt_;
    }
    if (double w = w_eq[row + 2]; w != 0.0) {
      grad[idx_heading(k + 1)] += w;
      grad[idx_heading(k)] -= w;
      grad[idx_omega(k)] -= w * dt_;
    }
    for (int c = 0; c < 3; ++c) {
      const double w = w_eq[row + 3 + c];
      if (w == 0.0) continue;
      grad[idx_elbow(k + 1) + c] += w;
      grad[idx_elbow(k) + c] -= w;
      grad[idx_delta_elbow(k) + c] -= w * dt_;
    }
  }

  const int n_obs = static_cast<int>(world_.obstacles.size());
  if (n_obs == 0) return;
  FullConfig q;
  for (int k = 0; k <= T_; ++k) {
    const int block = k * 3 * n_obs;
    bool any = false;
    for (int i = 0; i < 3 * n_obs; ++i) any |= w_ineq[block + i] != 0.0;
    if (!any) continue;
    q.base = x.segment<2>(idx_base(k));
    q.elbow = x.segment<3>(idx_elbow(k));
    q.ee = ee_[k];
    const auto capsules = robot_capsules(robot_, q);
    for (int c = 0; c < 3; ++c) {
      for (int o = 0; o < n_obs; ++o) {
        const double w = w_ineq[block + c * n_obs + o];
        if (w == 0.0) continue;
        const ClearanceGrad cg =
            clearance_with_grad(capsules[c], world_.obstacles[o]);
        // Row value is margin - clearance, so the sign flips.
        switch (c) {
          case 0:  // base column: both endpoints track the base position
            grad.segment<2>(idx_base(k)) -= w * (cg.d_a + cg.d_b).head<2>();
            break;
          case 1:  // upperarm: shoulder follows the base, tip is the elbow
            grad.segment<2>(idx_base(k)) -= w * cg.d_a.head<2>();
            grad.segment<3>(idx_elbow(k)) -= w * cg.d_b;
            break;
          case 2:  // forearm: root is the elbow, tip is pinned to the path
            grad.segment<3>(idx_elbow(k)) -= w * cg.d_a;
            break;
        }
      }
    }
  }
}

Eigen::VectorXd TrajOptProblem::pack(const Trajectory& traj) const {
  traj.validate_shape();
  if (traj.T != T_) throw std::invalid_argument("pack: horizon mismatch");
  Eigen::VectorXd x(num_vars());
  for (int k = 0; k <= T_; ++k) {
    x.segment<2>(idx_base(k)) = traj.base[k];
    x[idx_heading(k)] = traj.heading[k];
    x.segment<3>(idx_elbow(k)) = traj.elbow[k];
    x[idx_a(k)] = traj.a[k];
    x[idx_b(k)] = traj.b[k];
  }
  for (int k = 0; k < T_; ++k) {
    x[idx_v(k)] = traj.v[k];
    x[idx_omega(k)] = traj.omega[k];
    x.segment<3>(idx_delta_elbow(k)) = traj.delta_elbow[k];
  }
  return x;
}

Trajectory TrajOptProblem::unpack(const Eigen::VectorXd& x) const {
  Trajectory traj;
  traj.T = T_;
  traj.dt = dt_;
  traj.base.resize(T_ + 1);
  traj.heading.resize(T_ + 1);
  traj.elbow.resize(T_ + 1);
  traj.ee = ee_;
  traj.a.resize(T_ + 1);
  traj.b.resize(T_ + 1);
  traj.v.resize(T_);
  traj.omega.resize(T_);
  traj.delta_elbow.resize(T_);
  for (int k = 0; k <= T_; ++k) {
    traj.base[k] = x.segment<2>(idx_base(k));
    traj.heading[k] = x[idx_heading(k)];
    traj.elbow[k] = x.segment<3>(idx_elbow(k));
    traj.a[k] = x[idx_a(k)];
    traj.b[k] = x[idx_b(k)];
  }
  for (int k = 0; k < T_; ++k) {
    traj.v[k] = x[idx_v(k)];
    traj.omega[k] = x[idx_omega(k)];
    traj.delta_elbow[k] = x.segment<3>(idx_delta_elbow(k));
  }
  return traj;
}

SolveOutcome solve(const TrajOptProblem& problem, const Trajectory& init,
                   const SolveOptions& opts) {
  Eigen::VectorXd x = problem.pack(init);
  const AuglagReport auglag = solve_auglag(problem, x, opts.auglag);
  SolveOutcome outcome;
  outcome.trajectory = problem.unpack(x);
  outcome.report.cost = evaluate_cost(outcome.trajectory);
  outcome.report.max_eq_violation = auglag.max_eq_violation;
  outcome.report.max_ineq_violation = auglag.max_ineq_violation;
  outcome.report.iterations = auglag.inner_iterations;
  outcome.report.converged = auglag.converged;
  outcome.report.message = auglag.message;
  return outcome;
}

}  // namespace topoplan
