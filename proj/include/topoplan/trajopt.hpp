#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "topoplan/auglag.hpp"
#include "topoplan/nags.hpp"
#include "topoplan/world.hpp"

namespace topoplan {

// Discretized trajectory over T timesteps of length dt. States and the
// collinearity multipliers run k = 0..T, controls k = 0..T-1; the end
// effector samples are fixed data pinned to the path at t = k/T.
struct Trajectory {
  int T = 0;
  double dt = 0.0;
  std::vector<Eigen::Vector2d> base;
  std::vector<double> heading;
  std::vector<Eigen::Vector3d> elbow;
  std::vector<Eigen::Vector3d> ee;
  std::vector<double> v;
  std::vector<double> omega;
  std::vector<Eigen::Vector3d> delta_elbow;
  std::vector<double> a;
  std::vector<double> b;

  void validate_shape() const;  // throws std::invalid_argument
};

struct SolveReport {
  double cost = 0.0;
  double max_eq_violation = 0.0;
  double max_ineq_violation = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

struct DegenerateGuess : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sum of squared controls: sum_k v^2 + omega^2 + |delta_elbow|^2.
double evaluate_cost(const Trajectory& traj);

// Resamples a guess at uniform t_k = k/T, reconstructs headings from base
// displacements, solves the arm kinematics exactly at every step, and fills
// controls by finite differences.
Trajectory seed_from_guess(const GuessPath& guess, const RobotModel& robot,
                           const EePath& path, int T, double dt);

// The transcribed NLP: objective (sum of squared controls), per-step arm
// kinematics and collinearity equalities, base/arm dynamics equalities, and
// capsule clearance inequalities with a margin.
class TrajOptProblem final : public NlpProblem {
 public:
  TrajOptProblem(const World& world, const RobotModel& robot, const EePath& path,
                 int T, double dt, double clearance_margin);

  int num_vars() const override;
  int num_eq() const override;
  int num_ineq() const override;
  double objective(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const override;
  void eval_eq(const Eigen::VectorXd& x, Eigen::VectorXd& h) const override;
  void eval_ineq(const Eigen::VectorXd& x, Eigen::VectorXd& g) const override;
  void add_constraint_gradients(const Eigen::VectorXd& x, const Eigen::VectorXd& w_eq,
                                const Eigen::VectorXd& w_ineq,
                                Eigen::VectorXd& grad) const override;

  Eigen::VectorXd pack(const Trajectory& traj) const;
  Trajectory unpack(const Eigen::VectorXd& x) const;

  int T() const { return T_; }
  double dt() const { return dt_; }
  const std::vector<Eigen::Vector3d>& ee() const { return ee_; }
  const World& world() const { return world_; }
  const RobotModel& robot() const { return robot_; }
  double clearance_margin() const { return margin_; }

  // Variable layout within the packed vector.
  int idx_base(int k) const { return 8 * k; }
  int idx_heading(int k) const { return 8 * k + 2; }
  int idx_elbow(int k) const { return 8 * k + 3; }
  int idx_a(int k) const { return 8 * k + 6; }
  int idx_b(int k) const { return 8 * k + 7; }
  int idx_v(int k) const { return 8 * (T_ + 1) + 5 * k; }
  int idx_omega(int k) const { return 8 * (T_ + 1) + 5 * k + 1; }
  int idx_delta_elbow(int k) const { return 8 * (T_ + 1) + 5 * k + 2; }

 private:
  World world_;
  RobotModel robot_;
  int T_;
  double dt_;
  double margin_;
  std::vector<Eigen::Vector3d> ee_;
};

struct SolveOutcome {
  SolveReport report;
  Trajectory trajectory;  // final iterate, also on failure
  bool ok() const { return report.converged; }
};

struct SolveOptions {
  AuglagOptions auglag;
};

// Local solve from the given initial trajectory. Deterministic; a report with
// converged == false is the expected failure mode when iteration caps hit.
SolveOutcome solve(const TrajOptProblem& problem, const Trajectory& init,
                   const SolveOptions& opts = {});

}  // namespace topoplan
