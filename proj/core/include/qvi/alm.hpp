// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qvi/subproblem.hpp"

namespace qvi {

/// Parameters of the safeguarded augmented Lagrangian outer loop.
struct AlmConfig {
  double rho0 = 1.0;
  double gamma = 10.0;
  double tau = 0.1;
  BoxSet safeguard_box;  // dim m; multipliers are projected onto it
  double tol_outer = 1e-4;
  double tol_inner = 1e-6;
  int max_outer = 50;
  int max_inner = 100;
  bool warm_start = true;
  NewtonConfig newton;  // tol / max_iterations are overridden by the above
};

/// Evolving iterate of the outer loop.
struct AlmState {
  int k = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;
  Eigen::VectorXd w;
  double rho = 1.0;
  std::optional<double> v_prev;
};

/// Diagnostics of one outer iteration (the iteration that produced x^{k+1}).
struct IterationRecord {
  int k = 0;
  double rho = 0.0;       // penalty used for this subproblem
  double v_value = 0.0;   // V(x^{k+1}, w^k, rho_k)
  double feasibility = 0.0;  // dist_K(G(x^{k+1}, x^{k+1}))
  double kkt_residual = 0.0;
  double complementarity_bound = 0.0;  // r_k of the approximate-normality bound
  int inner_iterations = 0;
  double lambda_norm = 0.0;
  double wall_ms = 0.0;
};

enum class AlmStatus { Converged, MaxOuter, SubproblemFailure };

const char* to_string(AlmStatus s);

struct AlmReport {
  AlmStatus status = AlmStatus::MaxOuter;
  KktPoint final_point;
  std::vector<IterationRecord> records;
  std::string message;
};

/// Full post-update state handed to per-iteration observers.
struct AlmIterationScope {
  int k;
  double rho;
  const Eigen::VectorXd& x_new;
  const Eigen::VectorXd& lambda_new;
  const Eigen::VectorXd& w;
  double v_new;
  double r_k;
};
using AlmObserver = std::function<void(const QviProblem&, const AlmIterationScope&)>;

/// Augmented Lagrangian operator
///   L_rho(x, w) = F(x) + rho DyG(x,x)* [ z - P_K(z) ],  z = G(x,x) + w/rho.
/// For cone K the penalty vector is computed through Moreau's decomposition
/// as P_{K°}(w + rho G(x,x)), which makes it bitwise identical to the
/// multiplier update.
Eigen::VectorXd eval_aug_lagrangian(const QviProblem& p, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& w, double rho);

/// Utility V(x, w, rho) = || G(x,x) - P_K(G(x,x) + w/rho) ||_H, the joint
/// feasibility/complementarity measure driving the penalty test.
double eval_V(const QviProblem& p, const Eigen::VectorXd& x,
              const Eigen::VectorXd& w, double rho);

/// Multiplier update lambda^{k+1} = rho [ z - P_K(z) ], z = G + w/rho.
Eigen::VectorXd update_multiplier(const QviProblem& p, const Eigen::VectorXd& x_new,
                                  const Eigen::VectorXd& w, double rho);

/// Safeguard w = P_B(lambda).
Eigen::VectorXd safeguard(const Eigen::VectorXd& lambda, const BoxSet& b);

/// Penalty test: keep rho when k = 0 or v_new <= tau * v_prev, else gamma*rho.
double penalty_update(double v_new, std::optional<double> v_prev, double rho,
                      const AlmConfig& cfg, int k);

/// r_k = max(0, (<lambda,w>_H - ||lambda||_H^2) / rho), the closed-form
/// approximate-normality bound.
double complementarity_bound(const Eigen::VectorXd& lambda_new,
                             const Eigen::VectorXd& w, double rho,
                             const Eigen::VectorXd& h_weights);

/// Natural KKT residual
///   ||x - P_C(x - L(x,lambda))||_X + ||G(x,x) - P_K(G(x,x)+lambda)||_H
/// with L(x,lambda) = F(x) + DyG(x,x)* lambda; zero iff (x,lambda) is a
/// discrete KKT point.
double kkt_residual(const QviProblem& p, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& lambda);

/// Closed-form sup_{y in K} <lambda, y - g>_H for a box K. Returns nullopt
/// when some component of lambda points at an infinite bound (the supremum
/// is +inf); multipliers produced by update_multiplier never do.
std::optional<double> normality_sup(const Eigen::VectorXd& lambda,
                                    const Eigen::VectorXd& g, const BoxSet& k,
                                    const Eigen::VectorXd& h_weights);

/// The safeguarded augmented Lagrangian outer loop. Stops when both the KKT
/// residual and dist_K(G(x,x)) drop below tol_outer; each subproblem is the
/// VI over C with operator x -> L_rho(x, w^k), solved by semismooth Newton
/// to tol_inner (warm-started from x^k when configured). Accepted subproblem
/// solutions are projected onto C.
AlmReport alm_solve(const QviProblem& p, const AlmConfig& cfg,
                    const Eigen::VectorXd& x0, const Eigen::VectorXd& lambda0,
                    const AlmObserver& observer = {});

}  // namespace qvi
