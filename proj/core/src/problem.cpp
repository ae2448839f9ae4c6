// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include "qvi/problem.hpp"

#include <cmath>
#include <random>

namespace qvi {

namespace {

Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

ValidationReport validate_problem(const QviProblem& p, const ValidationOptions& opts) {
  detail::require(p.n > 0, "validate_problem: empty problem");
  ValidationReport rep;
  std::mt19937_64 rng(opts.seed);

  for (int t = 0; t < opts.trials; ++t) {
    const Eigen::VectorXd x = random_vector(rng, p.n, opts.point_scale);
    const Eigen::VectorXd y = random_vector(rng, p.n, opts.point_scale);
    const Eigen::VectorXd d = random_vector(rng, p.n, 1.0);
    if (p.m == 0) continue;
    const Eigen::VectorXd mu = random_vector(rng, p.m, 1.0);

    // Adjoint identity <DyG d, mu>_H == <d, DyG* mu>_X.
    const Eigen::VectorXd jd = p.apply_DyG(x, y, d);
    const Eigen::VectorXd jtmu = p.apply_DyG_adj(x, y, mu);
    const double lhs = inner(jd, mu, p.h_weights);
    const double rhs = inner(d, jtmu, p.x_weights);
    rep.max_adjoint_rel = std::max(rep.max_adjoint_rel, rel_err(lhs, rhs));

    // Directional finite differences of G in the second argument.
    const double eps = opts.fd_step;
    const Eigen::VectorXd gp = p.eval_G(x, y + eps * d);
    const Eigen::VectorXd gm = p.eval_G(x, y - eps * d);
    const Eigen::VectorXd fd = (gp - gm) / (2.0 * eps);
    const double scale = std::max(1.0, std::max(norm(fd, p.h_weights),
                                                norm(jd, p.h_weights)));
    rep.max_fd_rel =
        std::max(rep.max_fd_rel, norm(fd - jd, p.h_weights) / scale);
  }

  rep.ok = rep.max_adjoint_rel <= opts.adjoint_tol && rep.max_fd_rel <= opts.fd_tol;
  return rep;
}

}  // namespace qvi
