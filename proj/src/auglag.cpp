#include "topoplan/auglag.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

namespace topoplan {

namespace {

struct LbfgsMemory {
  std::deque<Eigen::VectorXd> s;
  std::deque<Eigen::VectorXd> y;
  std::deque<double> rho;
  int capacity = 15;

  void push(const Eigen::VectorXd& s_new, const Eigen::VectorXd& y_new) {
    const double sy = s_new.dot(y_new);
    if (sy <= 1e-10 * s_new.norm() * y_new.norm()) return;  // curvature guard
    s.push_back(s_new);
    y.push_back(y_new);
    rho.push_back(1.0 / sy);
    if (static_cast<int>(s.size()) > capacity) {
      s.pop_front();
      y.pop_front();
      rho.pop_front();
    }
  }

  // Two-loop recursion: direction = -H grad.
  Eigen::VectorXd direction(const Eigen::VectorXd& grad) const {
    Eigen::VectorXd q = grad;
    const int m = static_cast<int>(s.size());
    std::vector<double> alpha(m);
    for (int i = m - 1; i >= 0; --i) {
      alpha[i] = rho[i] * s[i].dot(q);
      q -= alpha[i] * y[i];
    }
    if (m > 0) {
      const double gamma = s.back().dot(y.back()) / y.back().squaredNorm();
      q *= gamma;
    }
    for (int i = 0; i < m; ++i) {
      const double beta = rho[i] * y[i].dot(q);
      q += (alpha[i] - beta) * s[i];
    }
    return -q;
  }
};

}  // namespace

AuglagReport solve_auglag(const NlpProblem& problem, Eigen::VectorXd& x,
                          const AuglagOptions& options) {
  const int n = problem.num_vars();
  const int m_eq = problem.num_eq();
  const int m_in = problem.num_ineq();

  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m_eq);
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(m_in);
  double mu = options.mu_init;

  Eigen::VectorXd h(m_eq), g(m_in);

  // Augmented Lagrangian value and gradient at fixed multipliers.
  auto eval = [&](const Eigen::VectorXd& point, Eigen::VectorXd* grad) {
    if (grad) grad->setZero(n);
    double value = problem.objective(point, grad);
    problem.eval_eq(point, h);
    problem.eval_ineq(point, g);
    Eigen::VectorXd w_eq(m_eq), w_in(m_in);
    for (int i = 0; i < m_eq; ++i) {
      value += lambda[i] * h[i] + 0.5 * mu * h[i] * h[i];
      w_eq[i] = lambda[i] + mu * h[i];
    }
    for (int j = 0; j < m_in; ++j) {
      const double active = std::max(0.0, nu[j] + mu * g[j]);
      value += (active * active - nu[j] * nu[j]) / (2.0 * mu);
      w_in[j] = active;
    }
    if (grad) problem.add_constraint_gradients(point, w_eq, w_in, *grad);
    return value;
  };

  AuglagReport report;
  Eigen::VectorXd grad(n), grad_new(n), direction(n), x_new(n);
  double inner_tol = options.inner_tol_init;
  double prev_violation = std::numeric_limits<double>::infinity();

  for (int outer = 0; outer < options.max_outer; ++outer) {
    report.outer_iterations = outer + 1;

    // Inner minimization of the augmented Lagrangian.
    LbfgsMemory memory;
    memory.capacity = options.lbfgs_memory;
    double value = eval(x, &grad);
    for (int inner = 0; inner < options.max_inner; ++inner) {
      if (grad.lpNorm<Eigen::Infinity>() <= inner_tol) break;
      ++report.inner_iterations;
      direction = memory.direction(grad);
      double slope = grad.dot(direction);
      if (slope >= 0.0) {  // not a descent direction, reset to steepest
        direction = -grad;
        slope = grad.dot(direction);
      }
      double step = 1.0;
      bool accepted = false;
      double value_new = value;
      for (int ls = 0; ls < 60; ++ls) {
        x_new = x + step * direction;
        value_new = eval(x_new, nullptr);
        if (value_new <= value + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      eval(x_new, &grad_new);
      memory.push(x_new - x, grad_new - grad);
      x.swap(x_new);
      grad.swap(grad_new);
      if (std::abs(value - value_new) <=
          1e-14 * (1.0 + std::abs(value)))
        break;
      value = value_new;
    }

    // Multiplier updates and convergence bookkeeping.
    problem.eval_eq(x, h);
    problem.eval_ineq(x, g);
    const double eq_violation = m_eq ? h.cwiseAbs().maxCoeff() : 0.0;
    const double in_violation = m_in ? g.cwiseMax(0.0).maxCoeff() : 0.0;
    lambda += mu * h;
    nu = (nu + mu * g).cwiseMax(0.0);

    // Lagrangian stationarity at the updated multipliers.
    Eigen::VectorXd stat_grad = Eigen::VectorXd::Zero(n);
    problem.objective(x, &stat_grad);
    problem.add_constraint_gradients(x, lambda, nu, stat_grad);
    const double stationarity = stat_grad.lpNorm<Eigen::Infinity>();

    report.objective = problem.objective(x, nullptr);
    report.max_eq_violation = eq_violation;
    report.max_ineq_violation = in_violation;
    report.stationarity = stationarity;

    if (eq_violation <= options.tol_eq && in_violation <= options.tol_ineq &&
        stationarity <= options.tol_stat) {
      report.converged = true;
      report.message = "converged";
      return report;
    }

    // Raise the penalty only while infeasibility is both above tolerance and
    // not shrinking fast enough; a feasible iterate needs multiplier work,
    // not more curvature.
    const double violation = std::max(eq_violation, in_violation);
    const double feas_target = 0.5 * std::min(options.tol_eq, options.tol_ineq);
    if (violation > feas_target && violation > 0.25 * prev_violation)
      mu = std::min(mu * options.mu_scale, options.mu_max);
    prev_violation = violation;
    inner_tol = std::max(inner_tol * options.inner_tol_shrink,
                         0.3 * options.tol_stat);
  }

  report.message = "iteration cap reached";
  return report;
}

}  // namespace topoplan
