#include "sequil/solver.h"

#include <cmath>

namespace sequil {

Eigen::MatrixXd numeric_jacobian(const VectorFn& f, int num_equations,
                                 const Eigen::VectorXd& x, double h) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd jac(num_equations, n);
  Eigen::VectorXd xp = x, xm = x, fp(num_equations), fm(num_equations);
  for (int c = 0; c < n; ++c) {
    xp[c] = x[c] + h;
    xm[c] = x[c] - h;
    f(xp, fp);
    f(xm, fm);
    jac.col(c) = (fp - fm) / (2.0 * h);
    xp[c] = x[c];
    xm[c] = x[c];
  }
  return jac;
}

bool newton_solve(const VectorFn& f, int num_equations, Eigen::VectorXd& x,
                  const NewtonOptions& opts) {
  Eigen::VectorXd fx(num_equations), trial_f(num_equations);
  f(x, fx);
  double norm = fx.cwiseAbs().maxCoeff();
  for (int it = 0; it < opts.max_iter && norm > opts.tol; ++it) {
    Eigen::MatrixXd jac = numeric_jacobian(f, num_equations, x, opts.fd_step);
    Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-fx);
    if (!step.allFinite()) return false;
    double t = 1.0;
    bool accepted = false;
    for (int half = 0; half < 30; ++half, t *= 0.5) {
      Eigen::VectorXd trial = x + t * step;
      f(trial, trial_f);
      if (!trial_f.allFinite()) continue;
      const double trial_norm = trial_f.cwiseAbs().maxCoeff();
      if (trial_norm < norm) {
        x = trial;
        fx = trial_f;
        norm = trial_norm;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return norm <= opts.tol;
}

}  // namespace sequil
