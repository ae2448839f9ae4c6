// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qvi/problem.hpp"

namespace qvi {

/// Operator of a box-constrained VI: find x in C with <T(x), y - x> >= 0
/// for all y in C. `apply_jacobian` produces the action of a generalized
/// derivative J(x); the assembly hooks are optional fast paths for the
/// Newton linear solves.
struct ViOperator {
  Eigen::Index dim = 0;
  Eigen::VectorXd weights;  // norm weights of the iterate space (empty = ones)

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
      apply_jacobian;

  /// Optional: J(x) as a sparse matrix.
  std::function<SpMat(const Eigen::VectorXd&)> assemble_jacobian;

  /// Optional: the full masked Newton system, possibly with auxiliary
  /// variables. Takes precedence over assemble_jacobian.
  std::function<SemismoothSystem(const Eigen::VectorXd&, const std::vector<char>&)>
      assemble_system;
};

struct NewtonConfig {
  double tol = 1e-8;
  int max_iterations = 100;
  double line_search_beta = 0.5;
  double line_search_sigma = 1e-4;
  double regularization_floor = 1e-10;
};

struct NewtonResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // ||Theta|| per iterate, including x0
  std::string failure;                   // nonempty on linear-solve breakdown
};

/// Natural residual Theta(x) = x - P_C(x - T(x)); zero exactly at solutions
/// of the box VI.
Eigen::VectorXd natural_residual(const ViOperator& t, const BoxSet& c,
                                 const Eigen::VectorXd& x);

/// Mask of components where x - T(x) lies strictly inside C (the projection
/// is differentiable); components on the kink count as active.
std::vector<char> natural_residual_inactive_mask(const BoxSet& c,
                                                 const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& tx);

/// Action of the Clarke element (I - Sigma_C (I - J(x))) d of the natural
/// residual, with Sigma the 0/1 mask above.
Eigen::VectorXd generalized_jacobian_action(const ViOperator& t, const BoxSet& c,
                                            const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& d);

/// Globalized semismooth Newton on the natural residual: sparse direct
/// Newton steps (diagonal regularization retry on factorization failure)
/// with backtracking on ||Theta||.
NewtonResult semismooth_newton(const ViOperator& t, const BoxSet& c,
                               Eigen::VectorXd x0, const NewtonConfig& cfg);

/// Wraps the augmented Lagrangian operator x -> L_rho(x, w) of a problem as
/// a ViOperator over C, with a Gauss-Newton generalized derivative
///   J(x) d = F'(x) d + rho DyG(x,x)* Sigma_K (DxG(x,x) + DyG(x,x)) d,
/// Sigma_K the 0/1 derivative of the shifted projection residual.
/// The problem must outlive the returned operator.
ViOperator build_alm_operator(const QviProblem& p, Eigen::VectorXd w, double rho);

}  // namespace qvi
