#pragma once

#include <string>

#include <Eigen/Core>

namespace topoplan {

// Smooth NLP with equality constraints h(x) = 0 and inequalities g(x) <= 0.
// Implementations provide analytic first derivatives; the accumulation form
// keeps the solver free of any Jacobian storage.
class NlpProblem {
 public:
  virtual ~NlpProblem() = default;
  virtual int num_vars() const = 0;
  virtual int num_eq() const = 0;
  virtual int num_ineq() const = 0;
  // Returns f(x); adds the objective gradient into *grad when non-null.
  virtual double objective(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const = 0;
  virtual void eval_eq(const Eigen::VectorXd& x, Eigen::VectorXd& h) const = 0;
  virtual void eval_ineq(const Eigen::VectorXd& x, Eigen::VectorXd& g) const = 0;
  // grad += sum_i w_eq[i] grad h_i + sum_j w_ineq[j] grad g_j. Zero weights
  // must be skipped cheaply.
  virtual void add_constraint_gradients(const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& w_eq,
                                        const Eigen::VectorXd& w_ineq,
                                        Eigen::VectorXd& grad) const = 0;
};

struct AuglagOptions {
  double tol_eq = 1e-4;
  double tol_ineq = 1e-4;
  double tol_stat = 1e-3;
  int max_outer = 30;
  int max_inner = 500;
  int lbfgs_memory = 15;
  double mu_init = 10.0;
  double mu_scale = 10.0;
  double mu_max = 1e9;
  double inner_tol_init = 1e-1;
  double inner_tol_shrink = 0.25;
};

struct AuglagReport {
  bool converged = false;
  double objective = 0.0;
  double max_eq_violation = 0.0;
  double max_ineq_violation = 0.0;
  double stationarity = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;  // total L-BFGS iterations
  std::string message;
};

// Classic augmented Lagrangian outer loop around an L-BFGS inner solver.
// Deterministic for fixed (problem, x, options); x is updated in place.
AuglagReport solve_auglag(const NlpProblem& problem, Eigen::VectorXd& x,
                          const AuglagOptions& options = {});

}  // namespace topoplan
