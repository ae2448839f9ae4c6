// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <memory>

#include "qvi/fd_operators.hpp"
#include "qvi/problems.hpp"

namespace qvi {

namespace {

struct GradientOps {
  Grid2D grid;
  SpMat dx, dy;
  Eigen::VectorXd f;
  double p = 2.0;
  double c0 = 0.01, c1 = 2.0;

  double psi(const Eigen::VectorXd& u) const {
    return c0 + c1 * std::abs(integrate(grid, u));
  }
  // d/du Psi(u) in direction d; the subgradient 0 is used on the kink.
  double dpsi(const Eigen::VectorXd& u, const Eigen::VectorXd& d) const {
    const double s = integrate(grid, u);
    if (s == 0.0) return 0.0;
    return c1 * (s > 0.0 ? 1.0 : -1.0) * integrate(grid, d);
  }
};

}  // namespace

QviProblem build_gradient_qvi(const GradientQviData& data) {
  detail::require(data.n >= 2, "build_gradient_qvi: n must be at least 2");
  detail::require(data.p >= 2.0, "build_gradient_qvi: p must be >= 2");
  detail::require(data.psi_c0 > 0.0, "build_gradient_qvi: psi lower bound must be positive");

  auto ops = std::make_shared<GradientOps>();
  ops->grid = Grid2D::interior(data.n);
  ops->dx = backward_difference_x(ops->grid);
  ops->dy = backward_difference_y(ops->grid);
  ops->f = Eigen::VectorXd::Constant(ops->grid.num_nodes, data.f_value);
  ops->p = data.p;
  ops->c0 = data.psi_c0;
  ops->c1 = data.psi_c1;

  const Eigen::Index nn = ops->grid.num_nodes;
  QviProblem p;
  p.n = nn;
  p.m = nn;
  p.set_C = BoxSet::whole_space(nn);
  p.set_K = BoxSet::nonpositive(nn);
  p.x_weights = ops->grid.quad_weights;
  p.h_weights = ops->grid.quad_weights;

  p.eval_F = [ops](const Eigen::VectorXd& u) {
    return (p_laplacian_apply(ops->grid, u, ops->p) - ops->f).eval();
  };
  p.apply_Fprime = [ops](const Eigen::VectorXd& u, const Eigen::VectorXd& d) {
    return (p_laplacian_jacobian(ops->grid, u, ops->p).matrix * d).eval();
  };
  p.eval_G = [ops](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    auto [gx, gy] = gradient_backward(ops->grid, y);
    const double psi2 = ops->psi(x) * ops->psi(x);
    return (gx.array().square() + gy.array().square() - psi2).matrix().eval();
  };
  p.apply_DyG = [ops](const Eigen::VectorXd&, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& d) {
    auto [gx, gy] = gradient_backward(ops->grid, y);
    auto [dxd, dyd] = gradient_backward(ops->grid, d);
    return (2.0 * (gx.array() * dxd.array() + gy.array() * dyd.array()))
        .matrix()
        .eval();
  };
  p.apply_DyG_adj = [ops](const Eigen::VectorXd&, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& mu) {
    // Uniform weights on both spaces, so the adjoint is the plain transpose.
    auto [gx, gy] = gradient_backward(ops->grid, y);
    return (2.0 * (ops->dx.transpose() * gx.cwiseProduct(mu) +
                   ops->dy.transpose() * gy.cwiseProduct(mu)))
        .eval();
  };
  p.apply_DxG = [ops, nn](const Eigen::VectorXd& x, const Eigen::VectorXd&,
                          const Eigen::VectorXd& d) {
    const double v = -2.0 * ops->psi(x) * ops->dpsi(x, d);
    return Eigen::VectorXd::Constant(nn, v).eval();
  };

  p.assemble_parts = [ops, nn](const Eigen::VectorXd& u) {
    JacobianParts parts;
    parts.f_prime = p_laplacian_jacobian(ops->grid, u, ops->p).matrix;
    auto [gx, gy] = gradient_backward(ops->grid, u);
    const Eigen::VectorXd gx2 = 2.0 * gx;
    const Eigen::VectorXd gy2 = 2.0 * gy;
    parts.dy_g = SpMat(gx2.asDiagonal() * ops->dx) + SpMat(gy2.asDiagonal() * ops->dy);
    parts.dx_g.resize(nn, nn);
    const double s = integrate(ops->grid, u);
    const double kappa =
        s == 0.0 ? 0.0 : -2.0 * ops->psi(u) * ops->c1 * (s > 0.0 ? 1.0 : -1.0);
    parts.dx_g_rank_one = {Eigen::VectorXd::Constant(nn, kappa),
                           ops->grid.quad_weights};
    return parts;
  };
  return p;
}

}  // namespace qvi
