#pragma once

#include <functional>

#include <Eigen/Dense>

namespace sequil {

using VectorFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct NewtonOptions {
  int max_iter = 60;
  double tol = 1e-13;
  double fd_step = 1e-7;
};

// Newton's method with a central-difference Jacobian, pseudo-inverse steps
// (so singular systems still move along their solution set) and residual
// backtracking. Returns true when max|F(x)| <= tol.
bool newton_solve(const VectorFn& f, int num_equations, Eigen::VectorXd& x,
                  const NewtonOptions& opts = {});

Eigen::MatrixXd numeric_jacobian(const VectorFn& f, int num_equations,
                                 const Eigen::VectorXd& x, double h);

}  // namespace sequil
