// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include "qvi/subproblem.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <cmath>

#include "qvi/alm.hpp"

namespace qvi {

namespace {

Eigen::VectorXd op_weights(const ViOperator& t) {
  return t.weights.size() == t.dim ? t.weights : Eigen::VectorXd::Ones(t.dim);
}

// Solves sys.matrix * [d; aux] = [-theta; 0]; adds reg to the diagonal and
// retries once if the factorization fails or produces non-finite values.
bool solve_extended(const SemismoothSystem& sys, const Eigen::VectorXd& theta,
                    double reg, Eigen::VectorXd& d, std::string& failure) {
  const Eigen::Index n = theta.size();
  const Eigen::Index total = sys.matrix.rows();
  detail::require(total == n + sys.aux_dim && sys.matrix.cols() == total,
                  "semismooth_newton: malformed Newton system");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(total);
  rhs.head(n) = -theta;

  for (int attempt = 0; attempt < 2; ++attempt) {
    SpMat m = sys.matrix;
    if (attempt == 1) {
      SpMat id(total, total);
      id.setIdentity();
      m += reg * id;
    }
    m.makeCompressed();
    Eigen::SparseLU<SpMat> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) continue;
    Eigen::VectorXd sol = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !sol.allFinite()) continue;
    d = sol.head(n);
    return true;
  }
  failure = "sparse factorization failed after regularization";
  return false;
}

SemismoothSystem mask_sparse_jacobian(const SpMat& j, const std::vector<char>& inactive) {
  const Eigen::Index n = j.rows();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(j.nonZeros()) + static_cast<size_t>(n));
  for (Eigen::Index col = 0; col < j.outerSize(); ++col) {
    for (SpMat::InnerIterator it(j, col); it; ++it) {
      if (inactive[static_cast<size_t>(it.row())]) {
        trips.emplace_back(it.row(), it.col(), it.value());
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!inactive[static_cast<size_t>(i)]) trips.emplace_back(i, i, 1.0);
  }
  SemismoothSystem sys;
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

bool solve_dense(const ViOperator& t, const Eigen::VectorXd& x,
                 const std::vector<char>& inactive, const Eigen::VectorXd& theta,
                 double reg, Eigen::VectorXd& d, std::string& failure) {
  const Eigen::Index n = t.dim;
  detail::require(static_cast<bool>(t.apply_jacobian),
                  "semismooth_newton: operator provides no Jacobian route");
  Eigen::MatrixXd j(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    e[c] = 1.0;
    j.col(c) = t.apply_jacobian(x, e);
    e[c] = 0.0;
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    if (!inactive[static_cast<size_t>(r)]) {
      j.row(r).setZero();
      j(r, r) = 1.0;
    }
  }
  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::MatrixXd m = j;
    if (attempt == 1) m.diagonal().array() += reg;
    Eigen::VectorXd sol = m.colPivHouseholderQr().solve(-theta);
    if (sol.allFinite()) {
      d = sol;
      return true;
    }
  }
  failure = "dense Newton solve produced non-finite step";
  return false;
}

}  // namespace

Eigen::VectorXd natural_residual(const ViOperator& t, const BoxSet& c,
                                 const Eigen::VectorXd& x) {
  detail::require(x.size() == t.dim && c.dim() == t.dim,
                  "natural_residual: dimension mismatch");
  Eigen::VectorXd tx = t.apply(x);
  check_finite(tx, "ViOperator::apply");
  return x - project_box(x - tx, c);
}

std::vector<char> natural_residual_inactive_mask(const BoxSet& c,
                                                 const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& tx) {
  std::vector<char> inactive(static_cast<size_t>(x.size()), 0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x[i] - tx[i];
    if (v > c.lower()[i] && v < c.upper()[i]) inactive[static_cast<size_t>(i)] = 1;
  }
  return inactive;
}

Eigen::VectorXd generalized_jacobian_action(const ViOperator& t, const BoxSet& c,
                                            const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& d) {
  const Eigen::VectorXd tx = t.apply(x);
  const auto inactive = natural_residual_inactive_mask(c, x, tx);
  const Eigen::VectorXd jd = t.apply_jacobian(x, d);
  Eigen::VectorXd out(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    out[i] = inactive[static_cast<size_t>(i)] ? jd[i] : d[i];
  }
  return out;
}

NewtonResult semismooth_newton(const ViOperator& t, const BoxSet& c,
                               Eigen::VectorXd x0, const NewtonConfig& cfg) {
  detail::require(x0.size() == t.dim, "semismooth_newton: x0 dimension mismatch");
  detail::require(cfg.tol > 0.0 && cfg.max_iterations > 0,
                  "semismooth_newton: invalid configuration");
  detail::require(cfg.line_search_beta > 0.0 && cfg.line_search_beta < 1.0 &&
                      cfg.line_search_sigma > 0.0 && cfg.line_search_sigma < 1.0,
                  "semismooth_newton: invalid line search parameters");
  check_finite(x0, "semismooth_newton: x0");

  const Eigen::VectorXd w = op_weights(t);
  NewtonResult res;
  res.x = std::move(x0);

  Eigen::VectorXd tx = t.apply(res.x);
  check_finite(tx, "ViOperator::apply");
  Eigen::VectorXd theta = res.x - project_box(res.x - tx, c);
  res.residual_norm = norm(theta, w);
  res.residual_history.push_back(res.residual_norm);

  for (res.iterations = 0; res.iterations < cfg.max_iterations;) {
    if (res.residual_norm <= cfg.tol) {
      res.converged = true;
      return res;
    }

    const auto inactive = natural_residual_inactive_mask(c, res.x, tx);
    Eigen::VectorXd d;
    bool ok;
    if (t.assemble_system) {
      const SemismoothSystem sys = t.assemble_system(res.x, inactive);
      ok = solve_extended(sys, theta, cfg.regularization_floor, d, res.failure);
    } else if (t.assemble_jacobian) {
      const SemismoothSystem sys = mask_sparse_jacobian(t.assemble_jacobian(res.x), inactive);
      ok = solve_extended(sys, theta, cfg.regularization_floor, d, res.failure);
    } else {
      ok = solve_dense(t, res.x, inactive, theta, cfg.regularization_floor, d,
                       res.failure);
    }
    if (!ok) return res;

    // Backtracking on ||Theta||: first t = beta^j with
    // ||Theta(x + t d)|| <= (1 - sigma t) ||Theta(x)||.
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd x_trial = res.x + step * d;
      Eigen::VectorXd tx_trial = t.apply(x_trial);
      if (tx_trial.allFinite()) {
        Eigen::VectorXd theta_trial = x_trial - project_box(x_trial - tx_trial, c);
        const double r_trial = norm(theta_trial, w);
        if (r_trial <= (1.0 - cfg.line_search_sigma * step) * res.residual_norm) {
          res.x = x_trial;
          tx = std::move(tx_trial);
          theta = std::move(theta_trial);
          res.residual_norm = r_trial;
          accepted = true;
          break;
        }
      }
      step *= cfg.line_search_beta;
    }
    ++res.iterations;
    if (!accepted) {
      res.failure = "line search failed";
      return res;
    }
    res.residual_history.push_back(res.residual_norm);
  }

  res.converged = res.residual_norm <= cfg.tol;
  return res;
}

ViOperator build_alm_operator(const QviProblem& p, Eigen::VectorXd w, double rho) {
  detail::require(rho > 0.0, "build_alm_operator: rho must be positive");
  detail::require(w.size() == p.m, "build_alm_operator: multiplier dimension mismatch");
  const QviProblem* pp = &p;

  ViOperator t;
  t.dim = p.n;
  t.weights = p.x_weights;

  t.apply = [pp, w, rho](const Eigen::VectorXd& x) {
    return eval_aug_lagrangian(*pp, x, w, rho);
  };

  // Sigma_K: generalized derivative of z - P_K(z) at z = G(x,x) + w/rho,
  // 1 strictly outside the bounds and 0 elsewhere (boundary counts inside).
  auto sigma_k = [pp, w, rho](const Eigen::VectorXd& x) {
    Eigen::VectorXd g = pp->eval_G(x, x);
    check_finite(g, "eval_G");
    Eigen::VectorXd sigma = Eigen::VectorXd::Zero(pp->m);
    const auto& k = pp->set_K;
    for (Eigen::Index i = 0; i < pp->m; ++i) {
      const double z = g[i] + w[i] / rho;
      if (z < k.lower()[i] || z > k.upper()[i]) sigma[i] = 1.0;
    }
    return sigma;
  };

  if (p.apply_Fprime) {
    t.apply_jacobian = [pp, w, rho, sigma_k](const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& d) {
      Eigen::VectorXd out = pp->apply_Fprime(x, d);
      if (pp->m > 0) {
        const Eigen::VectorXd sigma = sigma_k(x);
        Eigen::VectorXd v = pp->apply_DxG(x, x, d) + pp->apply_DyG(x, x, d);
        v.array() *= sigma.array();
        out += rho * pp->apply_DyG_adj(x, x, v);
      }
      return out;
    };
  }

  if (p.custom_newton_system) {
    t.assemble_system = [pp, w, rho](const Eigen::VectorXd& x,
                                     const std::vector<char>& inactive) {
      return pp->custom_newton_system(x, w, rho, inactive);
    };
  } else if (p.assemble_parts) {
    t.assemble_system = [pp, w, rho, sigma_k](const Eigen::VectorXd& x,
                                              const std::vector<char>& inactive) {
      const JacobianParts parts = pp->assemble_parts(x);
      const Eigen::Index n = pp->n;
      SpMat j = parts.f_prime;
      Eigen::VectorXd rank_one_col;  // aux column u with J += u * r^T
      Eigen::VectorXd rank_one_row;
      bool has_rank_one = false;
      if (pp->m > 0) {
        const Eigen::VectorXd sigma = sigma_k(x);
        // Columns of DyG^T scaled by the H-weights and the active mask, rows
        // un-scaled by the X-weights: P = W_X^{-1} DyG^T W_H Sigma.
        const Eigen::VectorXd colscale =
            (pp->h_weights.array() * sigma.array()).matrix();
        const Eigen::VectorXd rowscale = pp->x_weights.cwiseInverse();
        SpMat pmat = SpMat(parts.dy_g.transpose()) * colscale.asDiagonal();
        pmat = rowscale.asDiagonal() * pmat;
        SpMat a_sum = parts.dy_g;
        if (parts.dx_g.nonZeros() > 0) a_sum = a_sum + parts.dx_g;
        j = j + SpMat(rho * (pmat * a_sum));
        if (parts.dx_g_rank_one) {
          rank_one_col = rho * (pmat * parts.dx_g_rank_one->first);
          rank_one_row = parts.dx_g_rank_one->second;
          has_rank_one = (rank_one_col.array() != 0.0).any() &&
                         (rank_one_row.array() != 0.0).any();
        }
      }

      SemismoothSystem sys;
      sys.aux_dim = has_rank_one ? 1 : 0;
      const Eigen::Index total = n + sys.aux_dim;
      std::vector<Eigen::Triplet<double>> trips;
      trips.reserve(static_cast<size_t>(j.nonZeros() + 3 * n));
      for (Eigen::Index col = 0; col < j.outerSize(); ++col) {
        for (SpMat::InnerIterator it(j, col); it; ++it) {
          if (inactive[static_cast<size_t>(it.row())]) {
            trips.emplace_back(it.row(), it.col(), it.value());
          }
        }
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!inactive[static_cast<size_t>(i)]) trips.emplace_back(i, i, 1.0);
      }
      if (has_rank_one) {
        // Auxiliary unknown s = r^T d closes the rank-one coupling u s.
        for (Eigen::Index i = 0; i < n; ++i) {
          if (inactive[static_cast<size_t>(i)] && rank_one_col[i] != 0.0) {
            trips.emplace_back(i, n, rank_one_col[i]);
          }
          if (rank_one_row[i] != 0.0) trips.emplace_back(n, i, rank_one_row[i]);
        }
        trips.emplace_back(n, n, -1.0);
      }
      sys.matrix.resize(total, total);
      sys.matrix.setFromTriplets(trips.begin(), trips.end());
      return sys;
    };
  }

  return t;
}

}  // namespace qvi
