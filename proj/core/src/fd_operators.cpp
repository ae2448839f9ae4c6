// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include "qvi/fd_operators.hpp"

#include <cmath>
#include <vector>

namespace qvi {

SparseOp laplacian_dirichlet(const Grid2D& grid) {
  detail::require(!grid.include_boundary,
                  "laplacian_dirichlet: requires an interior-only grid");
  const int n = grid.n;
  const double ih2 = 1.0 / (grid.h * grid.h);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(5) * grid.num_nodes);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Eigen::Index a = grid.id(i, j);
      trips.emplace_back(a, a, 4.0 * ih2);
      if (i > 0) trips.emplace_back(a, grid.id(i - 1, j), -ih2);
      if (i < n - 1) trips.emplace_back(a, grid.id(i + 1, j), -ih2);
      if (j > 0) trips.emplace_back(a, grid.id(i, j - 1), -ih2);
      if (j < n - 1) trips.emplace_back(a, grid.id(i, j + 1), -ih2);
    }
  }
  SparseOp op;
  op.matrix.resize(grid.num_nodes, grid.num_nodes);
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  op.symmetric = true;
  return op;
}

PoissonSolver::PoissonSolver(const SparseOp& laplacian) : dim_(laplacian.matrix.rows()) {
  detail::require(laplacian.symmetric, "PoissonSolver: operator must be symmetric");
  ldlt_ = std::make_shared<Eigen::SimplicialLDLT<SpMat>>();
  ldlt_->compute(laplacian.matrix);
  detail::require(ldlt_->info() == Eigen::Success,
                  "PoissonSolver: factorization failed");
}

Eigen::VectorXd PoissonSolver::solve(const Eigen::VectorXd& rhs) const {
  detail::require(rhs.size() == dim_, "PoissonSolver::solve: dimension mismatch");
  Eigen::VectorXd out = ldlt_->solve(rhs);
  detail::require(ldlt_->info() == Eigen::Success, "PoissonSolver::solve failed");
  return out;
}

SpMat backward_difference_x(const Grid2D& grid) {
  detail::require(!grid.include_boundary,
                  "backward_difference_x: requires an interior grid");
  const int n = grid.n;
  const double ih = 1.0 / grid.h;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(2) * grid.num_nodes);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Eigen::Index a = grid.id(i, j);
      trips.emplace_back(a, a, ih);
      if (i > 0) trips.emplace_back(a, grid.id(i - 1, j), -ih);
    }
  }
  SpMat d(grid.num_nodes, grid.num_nodes);
  d.setFromTriplets(trips.begin(), trips.end());
  return d;
}

SpMat backward_difference_y(const Grid2D& grid) {
  detail::require(!grid.include_boundary,
                  "backward_difference_y: requires an interior grid");
  const int n = grid.n;
  const double ih = 1.0 / grid.h;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(2) * grid.num_nodes);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Eigen::Index a = grid.id(i, j);
      trips.emplace_back(a, a, ih);
      if (j > 0) trips.emplace_back(a, grid.id(i, j - 1), -ih);
    }
  }
  SpMat d(grid.num_nodes, grid.num_nodes);
  d.setFromTriplets(trips.begin(), trips.end());
  return d;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gradient_backward(
    const Grid2D& grid, const Eigen::VectorXd& u) {
  detail::require(u.size() == grid.num_nodes, "gradient_backward: dimension mismatch");
  const int n = grid.n;
  const double ih = 1.0 / grid.h;
  Eigen::VectorXd gx(grid.num_nodes), gy(grid.num_nodes);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Eigen::Index a = grid.id(i, j);
      gx[a] = (u[a] - (i > 0 ? u[grid.id(i - 1, j)] : 0.0)) * ih;
      gy[a] = (u[a] - (j > 0 ? u[grid.id(i, j - 1)] : 0.0)) * ih;
    }
  }
  return {std::move(gx), std::move(gy)};
}

Eigen::VectorXd p_laplacian_apply(const Grid2D& grid, const Eigen::VectorXd& u,
                                  double p) {
  detail::require(p >= 2.0, "p_laplacian_apply: requires p >= 2");
  auto [gx, gy] = gradient_backward(grid, u);
  // s_i = ||grad u||^{p-2}; flux = s .* grad u; result = D^T flux (the h^2
  // quadrature and Riesz weights cancel on the uniform interior grid).
  Eigen::VectorXd s(grid.num_nodes);
  for (Eigen::Index i = 0; i < grid.num_nodes; ++i) {
    const double norm2 = gx[i] * gx[i] + gy[i] * gy[i];
    s[i] = p == 2.0 ? 1.0 : std::pow(norm2, (p - 2.0) / 2.0);
  }
  const Eigen::VectorXd fx = s.cwiseProduct(gx);
  const Eigen::VectorXd fy = s.cwiseProduct(gy);

  const int n = grid.n;
  const double ih = 1.0 / grid.h;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.num_nodes);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Eigen::Index a = grid.id(i, j);
      out[a] += (fx[a] + fy[a]) * ih;
      if (i > 0) out[grid.id(i - 1, j)] -= fx[a] * ih;
      if (j > 0) out[grid.id(i, j - 1)] -= fy[a] * ih;
    }
  }
  return out;
}

double p_laplacian_energy(const Grid2D& grid, const Eigen::VectorXd& u, double p) {
  detail::require(p >= 2.0, "p_laplacian_energy: requires p >= 2");
  auto [gx, gy] = gradient_backward(grid, u);
  double e = 0.0;
  for (Eigen::Index i = 0; i < grid.num_nodes; ++i) {
    e += grid.quad_weights[i] * std::pow(gx[i] * gx[i] + gy[i] * gy[i], p / 2.0);
  }
  return e / p;
}

SparseOp p_laplacian_jacobian(const Grid2D& grid, const Eigen::VectorXd& u, double p) {
  detail::require(p >= 2.0, "p_laplacian_jacobian: requires p >= 2");
  auto [gx, gy] = gradient_backward(grid, u);
  const Eigen::Index nn = grid.num_nodes;

  // Per-node 2x2 blocks b = s I + (p-2)||g||^{p-4} g g^T, assembled as
  // D^T B D with D = [Dx; Dy].
  std::vector<Eigen::Triplet<double>> btrips;
  btrips.reserve(static_cast<size_t>(4) * nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    const double norm2 = gx[i] * gx[i] + gy[i] * gy[i];
    const double s = p == 2.0 ? 1.0 : std::pow(norm2, (p - 2.0) / 2.0);
    double c = 0.0;
    if (p > 2.0 && norm2 > 0.0) c = (p - 2.0) * std::pow(norm2, (p - 4.0) / 2.0);
    btrips.emplace_back(i, i, s + c * gx[i] * gx[i]);
    btrips.emplace_back(i, nn + i, c * gx[i] * gy[i]);
    btrips.emplace_back(nn + i, i, c * gx[i] * gy[i]);
    btrips.emplace_back(nn + i, nn + i, s + c * gy[i] * gy[i]);
  }
  SpMat b(2 * nn, 2 * nn);
  b.setFromTriplets(btrips.begin(), btrips.end());

  const SpMat dx = backward_difference_x(grid);
  const SpMat dy = backward_difference_y(grid);
  SpMat d(2 * nn, nn);
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(dx.nonZeros() + dy.nonZeros()));
    for (Eigen::Index col = 0; col < dx.outerSize(); ++col) {
      for (SpMat::InnerIterator it(dx, col); it; ++it) {
        trips.emplace_back(it.row(), it.col(), it.value());
      }
      for (SpMat::InnerIterator it(dy, col); it; ++it) {
        trips.emplace_back(nn + it.row(), it.col(), it.value());
      }
    }
    d.setFromTriplets(trips.begin(), trips.end());
  }

  SparseOp op;
  op.matrix = SpMat(d.transpose() * b * d);
  op.symmetric = true;
  return op;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> trace_and_normal_derivative(
    const Grid2D& grid, const Eigen::VectorXd& u) {
  detail::require(grid.include_boundary,
                  "trace_and_normal_derivative: requires boundary grid");
  detail::require(u.size() == grid.num_nodes,
                  "trace_and_normal_derivative: dimension mismatch");
  const SpMat dn = normal_derivative_matrix(grid);
  const Eigen::Index m = static_cast<Eigen::Index>(grid.boundary_ids.size());
  Eigen::VectorXd trace(m);
  for (Eigen::Index b = 0; b < m; ++b) trace[b] = u[grid.boundary_ids[b]];
  return {std::move(trace), dn * u};
}

SpMat normal_derivative_matrix(const Grid2D& grid) {
  detail::require(grid.include_boundary,
                  "normal_derivative_matrix: requires boundary grid");
  const int n = grid.n;
  const double ih = 1.0 / grid.h;
  const Eigen::Index m = static_cast<Eigen::Index>(grid.boundary_ids.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(3) * m);
  for (Eigen::Index b = 0; b < m; ++b) {
    const auto [i, j] = grid.lattice(grid.boundary_ids[b]);
    const bool left = i == 0, right = i == n - 1, bottom = j == 0, top = j == n - 1;
    const int corners = (left || right ? 1 : 0) + (bottom || top ? 1 : 0);
    trips.emplace_back(b, grid.id(i, j), ih);
    if (corners == 2) {
      // Corner: average of the two one-sided differences along the edges.
      const int ii = left ? 1 : n - 2;
      const int jj = bottom ? 1 : n - 2;
      trips.emplace_back(b, grid.id(ii, j), -0.5 * ih);
      trips.emplace_back(b, grid.id(i, jj), -0.5 * ih);
    } else if (left || right) {
      trips.emplace_back(b, grid.id(left ? 1 : n - 2, j), -ih);
    } else {
      trips.emplace_back(b, grid.id(i, bottom ? 1 : n - 2), -ih);
    }
  }
  SpMat dn(m, grid.num_nodes);
  dn.setFromTriplets(trips.begin(), trips.end());
  return dn;
}

double integrate(const Grid2D& grid, const Eigen::VectorXd& u) {
  detail::require(u.size() == grid.num_nodes, "integrate: dimension mismatch");
  return grid.quad_weights.dot(u);
}

}  // namespace qvi
