// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include "qvi/alm.hpp"

#include <cassert>
#include <chrono>
#include <cmath>

namespace qvi {

namespace {

void check_config(const QviProblem& p, const AlmConfig& cfg) {
  detail::require(cfg.rho0 > 0.0, "AlmConfig: rho0 must be positive");
  detail::require(cfg.gamma > 1.0, "AlmConfig: gamma must exceed 1");
  detail::require(cfg.tau > 0.0 && cfg.tau < 1.0, "AlmConfig: tau in (0,1)");
  detail::require(cfg.tol_outer > 0.0 && cfg.tol_inner > 0.0,
                  "AlmConfig: tolerances must be positive");
  detail::require(cfg.max_outer > 0 && cfg.max_inner > 0,
                  "AlmConfig: iteration budgets must be positive");
  detail::require(cfg.safeguard_box.dim() == p.m,
                  "AlmConfig: safeguard box dimension mismatch");
}

// Shared penalty vector s = rho * (z - P_K(z)), z = G(x,x) + w/rho. Both the
// augmented Lagrangian and the multiplier update are built from this one
// function, which makes the identity L_rho(x^{k+1}, w^k) = L(x^{k+1}, lambda^{k+1})
// hold bitwise. For cone K, Moreau's decomposition gives the shortcut
// s = P_{K°}(w + rho G).
Eigen::VectorXd penalty_vector(const QviProblem& p, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& w, double rho,
                               Eigen::VectorXd* g_out = nullptr) {
  detail::require(rho > 0.0, "penalty_vector: rho must be positive");
  detail::require(w.size() == p.m, "penalty_vector: multiplier dimension mismatch");
  Eigen::VectorXd g = p.eval_G(x, x);
  check_finite(g, "eval_G");
  Eigen::VectorXd s;
  if (p.set_K.is_cone()) {
    s = project_polar_cone(w + rho * g, p.set_K);
  } else {
    const Eigen::VectorXd z = g + w / rho;
    s = rho * (z - project_box(z, p.set_K));
  }
  if (g_out) *g_out = std::move(g);
  return s;
}

}  // namespace

const char* to_string(AlmStatus s) {
  switch (s) {
    case AlmStatus::Converged:
      return "Converged";
    case AlmStatus::MaxOuter:
      return "MaxOuter";
    case AlmStatus::SubproblemFailure:
      return "SubproblemFailure";
  }
  return "?";
}

Eigen::VectorXd eval_aug_lagrangian(const QviProblem& p, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& w, double rho) {
  Eigen::VectorXd f = p.eval_F(x);
  check_finite(f, "eval_F");
  if (p.m == 0) return f;
  const Eigen::VectorXd s = penalty_vector(p, x, w, rho);
  Eigen::VectorXd out = f + p.apply_DyG_adj(x, x, s);
  check_finite(out, "eval_aug_lagrangian");
  return out;
}

double eval_V(const QviProblem& p, const Eigen::VectorXd& x,
              const Eigen::VectorXd& w, double rho) {
  detail::require(rho > 0.0, "eval_V: rho must be positive");
  if (p.m == 0) return 0.0;
  Eigen::VectorXd g = p.eval_G(x, x);
  check_finite(g, "eval_G");
  const Eigen::VectorXd z = g + w / rho;
  return norm(g - project_box(z, p.set_K), p.h_weights);
}

Eigen::VectorXd update_multiplier(const QviProblem& p, const Eigen::VectorXd& x_new,
                                  const Eigen::VectorXd& w, double rho) {
  return penalty_vector(p, x_new, w, rho);
}

Eigen::VectorXd safeguard(const Eigen::VectorXd& lambda, const BoxSet& b) {
  return project_box(lambda, b);
}

double penalty_update(double v_new, std::optional<double> v_prev, double rho,
                      const AlmConfig& cfg, int k) {
  detail::require(rho > 0.0 && v_new >= 0.0, "penalty_update: invalid arguments");
  if (k == 0) return rho;
  detail::require(v_prev.has_value(), "penalty_update: v_prev unset with k > 0");
  return v_new <= cfg.tau * (*v_prev) ? rho : cfg.gamma * rho;
}

double complementarity_bound(const Eigen::VectorXd& lambda_new,
                             const Eigen::VectorXd& w, double rho,
                             const Eigen::VectorXd& h_weights) {
  detail::require(rho > 0.0, "complementarity_bound: rho must be positive");
  const double val =
      (inner(lambda_new, w, h_weights) - inner(lambda_new, lambda_new, h_weights)) / rho;
  return std::max(0.0, val);
}

double kkt_residual(const QviProblem& p, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& lambda) {
  detail::require(x.size() == p.n && lambda.size() == p.m,
                  "kkt_residual: dimension mismatch");
  Eigen::VectorXd l = p.eval_F(x);
  check_finite(l, "eval_F");
  double comp = 0.0;
  if (p.m > 0) {
    l += p.apply_DyG_adj(x, x, lambda);
    check_finite(l, "apply_DyG_adj");
    Eigen::VectorXd g = p.eval_G(x, x);
    check_finite(g, "eval_G");
    comp = norm(g - project_box(g + lambda, p.set_K), p.h_weights);
  }
  const double stat = norm(x - project_box(x - l, p.set_C), p.x_weights);
  return stat + comp;
}

std::optional<double> normality_sup(const Eigen::VectorXd& lambda,
                                    const Eigen::VectorXd& g, const BoxSet& k,
                                    const Eigen::VectorXd& h_weights) {
  detail::require(lambda.size() == k.dim() && g.size() == k.dim(),
                  "normality_sup: dimension mismatch");
  double sup = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > 0.0) {
      if (!std::isfinite(k.upper()[i])) return std::nullopt;
      sup += h_weights[i] * lambda[i] * (k.upper()[i] - g[i]);
    } else if (lambda[i] < 0.0) {
      if (!std::isfinite(k.lower()[i])) return std::nullopt;
      sup += h_weights[i] * lambda[i] * (k.lower()[i] - g[i]);
    }
  }
  return sup;
}

AlmReport alm_solve(const QviProblem& p, const AlmConfig& cfg,
                    const Eigen::VectorXd& x0, const Eigen::VectorXd& lambda0,
                    const AlmObserver& observer) {
  using clock = std::chrono::steady_clock;
  check_config(p, cfg);
  detail::require(x0.size() == p.n && lambda0.size() == p.m,
                  "alm_solve: initial point dimension mismatch");

  AlmState st;
  st.x = project_box(x0, p.set_C);
  st.lambda = lambda0;
  st.rho = cfg.rho0;

  NewtonConfig ncfg = cfg.newton;
  ncfg.tol = cfg.tol_inner;
  ncfg.max_iterations = cfg.max_inner;

  AlmReport report;
  const Eigen::VectorXd cold_start = st.x;

  for (st.k = 0;; ++st.k) {
    const double kkt = kkt_residual(p, st.x, st.lambda);
    const double feas =
        p.m > 0 ? dist_to_box(p.eval_G(st.x, st.x), p.set_K, p.h_weights) : 0.0;
    const bool v_ok = report.records.empty() ||
                      report.records.back().v_value <= cfg.tol_outer;
    if (kkt <= cfg.tol_outer && feas <= cfg.tol_outer && v_ok) {
      report.status = AlmStatus::Converged;
      break;
    }
    if (st.k >= cfg.max_outer) {
      report.status = AlmStatus::MaxOuter;
      report.message = "outer iteration budget exhausted";
      break;
    }

    const auto t0 = clock::now();
    st.w = safeguard(st.lambda, cfg.safeguard_box);

    const ViOperator op = build_alm_operator(p, st.w, st.rho);
    const Eigen::VectorXd start = cfg.warm_start ? st.x : cold_start;
    NewtonResult sub = semismooth_newton(op, p.set_C, start, ncfg);
    if (!sub.converged) {
      report.status = AlmStatus::SubproblemFailure;
      report.message = "inner solver stalled at ||Theta|| = " +
                       std::to_string(sub.residual_norm) +
                       (sub.failure.empty() ? "" : " (" + sub.failure + ")");
      break;
    }

    const Eigen::VectorXd x_new = project_box(sub.x, p.set_C);
    const Eigen::VectorXd lambda_new = update_multiplier(p, x_new, st.w, st.rho);
    const double v_new = eval_V(p, x_new, st.w, st.rho);
    const double r_k = complementarity_bound(lambda_new, st.w, st.rho, p.h_weights);

#ifndef NDEBUG
    if (p.m > 0) {
      // L_rho(x^{k+1}, w^k) == L(x^{k+1}, lambda^{k+1})
      const Eigen::VectorXd lhs = eval_aug_lagrangian(p, x_new, st.w, st.rho);
      const Eigen::VectorXd rhs =
          p.eval_F(x_new) + p.apply_DyG_adj(x_new, x_new, lambda_new);
      const double scale = std::max(1.0, norm(lhs, p.x_weights));
      assert(norm(lhs - rhs, p.x_weights) <= 1e-12 * scale);
    }
#endif

    IterationRecord rec;
    rec.k = st.k;
    rec.rho = st.rho;
    rec.v_value = v_new;
    rec.feasibility = dist_to_box(p.eval_G(x_new, x_new), p.set_K, p.h_weights);
    rec.kkt_residual = kkt_residual(p, x_new, lambda_new);
    rec.complementarity_bound = r_k;
    rec.inner_iterations = sub.iterations;
    rec.lambda_norm = norm(lambda_new, p.h_weights);
    rec.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    report.records.push_back(rec);

    if (observer) {
      observer(p, AlmIterationScope{st.k, st.rho, x_new, lambda_new, st.w, v_new, r_k});
    }

    st.rho = penalty_update(v_new, st.v_prev, st.rho, cfg, st.k);
    st.v_prev = v_new;
    st.x = x_new;
    st.lambda = lambda_new;
  }

  report.final_point = KktPoint{st.x, st.lambda};
  return report;
}

}  // namespace qvi
