// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <memory>
#include <utility>

#include "qvi/grid.hpp"
#include "qvi/problem.hpp"

namespace qvi {

/// Sparse operator with an explicit symmetry tag.
struct SparseOp {
  SpMat matrix;
  bool symmetric = false;
};

/// Standard 5-point Laplacian (4,-1,-1,-1,-1)/h^2 with homogeneous Dirichlet
/// boundary on an interior-only grid; symmetric positive definite.
SparseOp laplacian_dirichlet(const Grid2D& grid);

/// Solution operator of the discrete Poisson equation; the factorization is
/// computed once and reused for every solve.
class PoissonSolver {
 public:
  explicit PoissonSolver(const SparseOp& laplacian);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::Index dim() const { return dim_; }

 private:
  std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;
  Eigen::Index dim_;
};

/// Backward-difference matrices D_x, D_y on an interior grid with zero
/// Dirichlet extension (missing neighbors contribute nothing).
SpMat backward_difference_x(const Grid2D& grid);
SpMat backward_difference_y(const Grid2D& grid);

/// Backward-difference gradient ((u_ij - u_{i-1,j})/h, (u_ij - u_{i,j-1})/h).
std::pair<Eigen::VectorXd, Eigen::VectorXd> gradient_backward(
    const Grid2D& grid, const Eigen::VectorXd& u);

/// Discrete p-Laplacian built from backward-difference gradients with the
/// divergence as the negative adjoint: the Riesz gradient of the energy
/// (1/p) sum_i w_i ||grad u||_i^p. Requires p >= 2.
Eigen::VectorXd p_laplacian_apply(const Grid2D& grid, const Eigen::VectorXd& u,
                                  double p);
SparseOp p_laplacian_jacobian(const Grid2D& grid, const Eigen::VectorXd& u, double p);
double p_laplacian_energy(const Grid2D& grid, const Eigen::VectorXd& u, double p);

/// Boundary trace and first-order one-sided normal derivative on a
/// boundary-inclusive grid, both in boundary_ids order. Corner nodes use the
/// average of the two one-sided differences along their adjacent edges.
std::pair<Eigen::VectorXd, Eigen::VectorXd> trace_and_normal_derivative(
    const Grid2D& grid, const Eigen::VectorXd& u);

/// Sparse matrix realization of the normal derivative (rows follow
/// boundary_ids order).
SpMat normal_derivative_matrix(const Grid2D& grid);

/// Quadrature sum_i w_i u_i.
double integrate(const Grid2D& grid, const Eigen::VectorXd& u);

}  // namespace qvi
