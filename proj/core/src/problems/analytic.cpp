// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include "qvi/problems.hpp"

namespace qvi {

QviProblem build_analytic_moving_set() {
  QviProblem p;
  p.n = 1;
  p.m = 1;
  p.set_C = BoxSet::whole_space(1);
  p.set_K = BoxSet::nonpositive(1);
  p.x_weights = Eigen::VectorXd::Ones(1);
  p.h_weights = Eigen::VectorXd::Ones(1);

  p.eval_F = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, x[0] - 2.0).eval();
  };
  p.eval_G = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return Eigen::VectorXd::Constant(1, y[0] - 0.5 * (x[0] + 1.0)).eval();
  };
  p.apply_DyG = [](const Eigen::VectorXd&, const Eigen::VectorXd&,
                   const Eigen::VectorXd& d) { return d; };
  p.apply_DyG_adj = [](const Eigen::VectorXd&, const Eigen::VectorXd&,
                       const Eigen::VectorXd& mu) { return mu; };
  p.apply_DxG = [](const Eigen::VectorXd&, const Eigen::VectorXd&,
                   const Eigen::VectorXd& d) { return (-0.5 * d).eval(); };
  p.apply_Fprime = [](const Eigen::VectorXd&, const Eigen::VectorXd& d) { return d; };

  p.assemble_parts = [](const Eigen::VectorXd&) {
    JacobianParts parts;
    parts.f_prime.resize(1, 1);
    parts.f_prime.insert(0, 0) = 1.0;
    parts.dy_g.resize(1, 1);
    parts.dy_g.insert(0, 0) = 1.0;
    parts.dx_g.resize(1, 1);
    parts.dx_g.insert(0, 0) = -0.5;
    return parts;
  };
  return p;
}

}  // namespace qvi
