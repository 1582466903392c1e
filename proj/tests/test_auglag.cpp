#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "topoplan/auglag.hpp"

using namespace topoplan;

namespace {

// min x^2 + y^2  s.t.  x + y = 1
struct CircleLine final : NlpProblem {
  int num_vars() const override { return 2; }
  int num_eq() const override { return 1; }
  int num_ineq() const override { return 0; }
  double objective(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const override {
    if (grad) *grad += 2.0 * x;
    return x.squaredNorm();
  }
  void eval_eq(const Eigen::VectorXd& x, Eigen::VectorXd& h) const override {
    h.resize(1);
    h[0] = x[0] + x[1] - 1.0;
  }
  void eval_ineq(const Eigen::VectorXd&, Eigen::VectorXd& g) const override {
    g.resize(0);
  }
  void add_constraint_gradients(const Eigen::VectorXd&, const Eigen::VectorXd& w_eq,
                                const Eigen::VectorXd&,
                                Eigen::VectorXd& grad) const override {
    grad[0] += w_eq[0];
    grad[1] += w_eq[0];
  }
};

// min (x - 2)^2  s.t.  x <= 1
struct ActiveBound : NlpProblem {
  int num_vars() const override { return 1; }
  int num_eq() const override { return 0; }
  int num_ineq() const override { return 1; }
  double objective(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const override {
    if (grad) (*grad)[0] += 2.0 * (x[0] - 2.0);
    return (x[0] - 2.0) * (x[0] - 2.0);
  }
  void eval_eq(const Eigen::VectorXd&, Eigen::VectorXd& h) const override {
    h.resize(0);
  }
  void eval_ineq(const Eigen::VectorXd& x, Eigen::VectorXd& g) const override {
    g.resize(1);
    g[0] = x[0] - 1.0;
  }
  void add_constraint_gradients(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                const Eigen::VectorXd& w_in,
                                Eigen::VectorXd& grad) const override {
    grad[0] += w_in[0];
  }
};

// min (x - 0.5)^2  s.t.  x <= 1 (inactive at the optimum)
struct InactiveBound final : ActiveBound {
  double objective(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const override {
    if (grad) (*grad)[0] += 2.0 * (x[0] - 0.5);
    return (x[0] - 0.5) * (x[0] - 0.5);
  }
};

struct Rosenbrock final : NlpProblem {
  int num_vars() const override { return 2; }
  int num_eq() const override { return 0; }
  int num_ineq() const override { return 0; }
  double objective(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const override {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    if (grad) {
      (*grad)[0] += -2.0 * a - 400.0 * x[0] * b;
      (*grad)[1] += 200.0 * b;
    }
    return a * a + 100.0 * b * b;
  }
  void eval_eq(const Eigen::VectorXd&, Eigen::VectorXd& h) const override {
    h.resize(0);
  }
  void eval_ineq(const Eigen::VectorXd&, Eigen::VectorXd& g) const override {
    g.resize(0);
  }
  void add_constraint_gradients(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                const Eigen::VectorXd&,
                                Eigen::VectorXd&) const override {}
};

}  // namespace

TEST_CASE("equality constrained quadratic") {
  CircleLine problem;
  Eigen::VectorXd x(2);
  x << 3.0, -1.0;
  const AuglagReport report = solve_auglag(problem, x);
  CHECK(report.converged);
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(x[1] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(report.max_eq_violation <= 1e-4);
}

TEST_CASE("active inequality") {
  ActiveBound problem;
  Eigen::VectorXd x(1);
  x << 0.0;
  const AuglagReport report = solve_auglag(problem, x);
  CHECK(report.converged);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(report.max_ineq_violation <= 1e-4);
}

TEST_CASE("inactive inequality") {
  InactiveBound problem;
  Eigen::VectorXd x(1);
  x << -3.0;
  const AuglagReport report = solve_auglag(problem, x);
  CHECK(report.converged);
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("rosenbrock") {
  Rosenbrock problem;
  Eigen::VectorXd x(2);
  x << -1.2, 1.0;
  AuglagOptions options;
  options.max_inner = 2000;
  const AuglagReport report = solve_auglag(problem, x, options);
  CHECK(report.converged);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("determinism: identical runs produce identical iterates") {
  CircleLine problem;
  Eigen::VectorXd x1(2), x2(2);
  x1 << 3.0, -1.0;
  x2 << 3.0, -1.0;
  solve_auglag(problem, x1);
  solve_auglag(problem, x2);
  CHECK(x1[0] == x2[0]);
  CHECK(x1[1] == x2[1]);
}
