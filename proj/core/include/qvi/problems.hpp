// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>

#include "qvi/problem.hpp"

namespace qvi {

/// Scalar moving-set QVI with a hand-solvable KKT point:
///   F(x) = x - 2, C = R, G(x, y) = y - (x+1)/2, K = (-inf, 0],
/// unique solution x = 1 with multiplier lambda = 1.
QviProblem build_analytic_moving_set();

/// Implicit Signorini problem on the unit square (boundary-inclusive grid,
/// n points per row/column): F(u) = A u - f with A u = u - Delta u, and the
/// boundary constraint trace(u) >= h0 - <phi, dn u>.
struct SignoriniData {
  int n = 16;
  Eigen::VectorXd f;    // full grid; empty = constant -1
  Eigen::VectorXd phi;  // boundary_ids order; empty = 1, must be >= 0
  Eigen::VectorXd h0;   // boundary_ids order; empty = 1
  double f_value = -1.0;
};
QviProblem build_signorini(const SignoriniData& data);

/// QVI with pointwise gradient constraints on an interior grid:
///   F(u) = -Delta_p u - f,  G(u, v)_i = ||grad v||_i^2 - Psi(u)^2,
///   Psi(u) = c0 + c1 |int u|.
struct GradientQviData {
  int n = 16;
  double p = 2.0;     // >= 2
  double f_value = 1.0;
  double psi_c0 = 0.01;
  double psi_c1 = 2.0;
};
QviProblem build_gradient_qvi(const GradientQviData& data);

/// Four-player optimal-control GNEP on an interior grid. Player nu controls
/// u^nu in [-bound, bound]^{n^2}; the shared state y = S(u^1+..+u^4+f) must
/// satisfy y >= psi, encoded blockwise as G(u,v)_nu = S(u^nu + sum_{mu != nu}
/// v^mu + f) - psi.
struct GnepData {
  int n = 16;
  std::array<double, 4> alpha = {2.8859, 4.3374, 2.5921, 3.9481};
  double f_value = 1.0;
  double control_bound = 12.0;
  /// Alternate derivative slot convention: own player differentiated through
  /// the variable slot instead of the parameter slot.
  bool alternative_slots = false;
  /// Optional replacement of the four desired states (size 4 when set).
  std::vector<Eigen::VectorXd> y_desired_override;
};
QviProblem build_gnep(const GnepData& data);

/// Objective J_nu(u) = 1/2 ||y(u) - y_d^nu||^2 + alpha_nu/2 ||u^nu||^2 of one
/// player, in the weighted norms; used to finite-difference F in tests.
double gnep_objective(const GnepData& data, int nu, const Eigen::VectorXd& u);

/// Wraps a plain VI over C (no parametric constraints, m = 0); the outer
/// loop then reduces to a single subproblem solve.
QviProblem qvi_from_vi(
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f,
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
        f_prime_apply,
    BoxSet c, Eigen::VectorXd x_weights);

}  // namespace qvi
