// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qvi/box_set.hpp"

namespace qvi {

using SpMat = Eigen::SparseMatrix<double>;

/// Sparse pieces of the subproblem linearization at a point x, in the same
/// value-vector representation as the callbacks (F' already Riesz-scaled so
/// that <F'(x)d, e>_X is the weighted pairing).
struct JacobianParts {
  SpMat f_prime;  // n x n
  SpMat dy_g;     // m x n
  SpMat dx_g;     // m x n, sparse part (may be empty == zero)
  /// Rank-one completion of DxG: DxG = dx_g + col * row^T.
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> dx_g_rank_one;
};

/// One semismooth Newton linear system, optionally enlarged by auxiliary
/// variables (rank-one couplings, PDE states). The leading n rows/columns
/// correspond to the primal step d and already encode the natural-residual
/// masking; auxiliary equations must have zero right-hand side.
struct SemismoothSystem {
  SpMat matrix;
  Eigen::Index aux_dim = 0;
};

/// The QVI problem contract consumed by every solver component:
/// evaluation callbacks for F and G, derivative actions of G in both slots,
/// the simple set C, the constraint set K, and the inner-product weights of
/// the primal space X and the constraint space H.
///
/// All callbacks operate on plain value vectors; duals are represented by
/// their Riesz vectors with respect to the weighted inner products.
/// Callbacks must be reentrant.
struct QviProblem {
  Eigen::Index n = 0;  // primal dimension
  Eigen::Index m = 0;  // constraint dimension

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval_F;
  // eval_G(x, y): constraint map, arguments (parameter slot, variable slot)
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> eval_G;
  // apply_DyG(x, y, d): action of D_y G(x,y) on d
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                const Eigen::VectorXd&)>
      apply_DyG;
  // apply_DyG_adj(x, y, mu): adjoint action, <DyG d, mu>_H == <d, DyG* mu>_X
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                const Eigen::VectorXd&)>
      apply_DyG_adj;
  // apply_DxG(x, y, d): action of D_x G(x,y) on d
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                const Eigen::VectorXd&)>
      apply_DxG;
  // Optional action of F'(x); required by the matrix-free Newton path.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
      apply_Fprime;

  BoxSet set_C;  // dim n
  BoxSet set_K;  // dim m

  Eigen::VectorXd x_weights;  // dim n, strictly positive
  Eigen::VectorXd h_weights;  // dim m, strictly positive

  /// Optional sparse assembly of the linearization pieces at x (both G slots
  /// evaluated on the diagonal).
  std::function<JacobianParts(const Eigen::VectorXd&)> assemble_parts;

  /// Optional fully custom Newton system for problems whose linearization is
  /// dense in the primal variables but sparse in an extended one.
  /// `inactive[i] == 1` marks natural-residual components strictly inside C.
  std::function<SemismoothSystem(const Eigen::VectorXd& x, const Eigen::VectorXd& w,
                                 double rho, const std::vector<char>& inactive)>
      custom_newton_system;
};

/// Primal-dual pair; KKT satisfaction is measured, never assumed.
struct KktPoint {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;
};

struct ValidationOptions {
  int trials = 20;
  unsigned seed = 0x5eed;
  double point_scale = 1.0;      // random points drawn from [-s, s]^n
  double adjoint_tol = 1e-6;     // 1e-10 for linear G
  double fd_tol = 1e-5;
  double fd_step = 1e-4;
};

struct ValidationReport {
  double max_adjoint_rel = 0.0;
  double max_fd_rel = 0.0;
  bool ok = false;
};

/// Checks the QviProblem invariants on random data: adjointness of
/// apply_DyG / apply_DyG_adj and agreement of apply_DyG with central finite
/// differences of eval_G in the second argument.
ValidationReport validate_problem(const QviProblem& p,
                                  const ValidationOptions& opts = {});

}  // namespace qvi
