// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qvi/alm.hpp"
#include "qvi/problems.hpp"

using namespace qvi;

namespace {

// Scalar problem F(x) = x - 2, G(x, y) = y, adjustable K.
QviProblem scalar_problem(BoxSet k) {
  QviProblem p;
  p.n = 1;
  p.m = 1;
  p.set_C = BoxSet::whole_space(1);
  p.set_K = std::move(k);
  p.x_weights = Eigen::VectorXd::Ones(1);
  p.h_weights = Eigen::VectorXd::Ones(1);
  p.eval_F = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, x[0] - 2.0).eval();
  };
  p.eval_G = [](const Eigen::VectorXd&, const Eigen::VectorXd& y) { return y; };
  auto id3 = [](const Eigen::VectorXd&, const Eigen::VectorXd&,
                const Eigen::VectorXd& d) { return d; };
  p.apply_DyG = id3;
  p.apply_DyG_adj = id3;
  p.apply_DxG = [](const Eigen::VectorXd&, const Eigen::VectorXd&,
                   const Eigen::VectorXd& d) { return (0.0 * d).eval(); };
  p.apply_Fprime = [](const Eigen::VectorXd&, const Eigen::VectorXd& d) { return d; };
  return p;
}

AlmConfig default_cfg(const QviProblem& p) {
  AlmConfig cfg;
  cfg.safeguard_box = BoxSet::bounded(p.m, -1e6, 1e6);
  return cfg;
}

Eigen::VectorXd rand_vec(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("augmented Lagrangian operator") {
  // Constraint strictly interior with w = 0 leaves F untouched.
  QviProblem interior = scalar_problem(BoxSet::nonpositive(1));
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, -0.7);
  CHECK(eval_aug_lagrangian(interior, x, Eigen::VectorXd::Zero(1), 5.0) ==
        interior.eval_F(x));

  // K = (-inf, 1], x = 2, w = 0, rho = 10: (2-2) + 10*(2-1) = 10.
  QviProblem shifted = scalar_problem(
      BoxSet(Eigen::VectorXd::Constant(1, -std::numeric_limits<double>::infinity()),
             Eigen::VectorXd::Ones(1)));
  const Eigen::VectorXd l = eval_aug_lagrangian(
      shifted, Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd::Zero(1), 10.0);
  CHECK(l[0] == doctest::Approx(10.0).epsilon(1e-14));

  // Cone case reduces to the polar-cone projection, bitwise.
  QviProblem cone = build_analytic_moving_set();
  const Eigen::VectorXd xc = Eigen::VectorXd::Constant(1, 1.8);
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(1, 0.4);
  const double rho = 3.0;
  const Eigen::VectorXd g = cone.eval_G(xc, xc);
  const Eigen::VectorXd expected =
      cone.eval_F(xc) +
      cone.apply_DyG_adj(xc, xc, project_polar_cone((w + rho * g).eval(), cone.set_K));
  CHECK(eval_aug_lagrangian(cone, xc, w, rho) == expected);
}

TEST_CASE("utility function V") {
  QviProblem interior = scalar_problem(BoxSet::nonpositive(1));
  CHECK(eval_V(interior, Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Zero(1),
               2.0) == 0.0);

  // g = 1, K = (-inf,0], w = 0, rho = 1 -> |1 - P(1)| = 1.
  QviProblem p = scalar_problem(BoxSet::nonpositive(1));
  CHECK(eval_V(p, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1), 1.0) ==
        doctest::Approx(1.0));

  // g = -0.5, K = [0,inf), w = 1, rho = 2: z = 0, |g - 0| = 0.5.
  QviProblem q = scalar_problem(BoxSet::nonnegative(1));
  CHECK(eval_V(q, Eigen::VectorXd::Constant(1, -0.5), Eigen::VectorXd::Ones(1), 2.0) ==
        doctest::Approx(0.5));
}

TEST_CASE("multiplier update") {
  QviProblem interior = scalar_problem(BoxSet::nonpositive(1));
  CHECK(update_multiplier(interior, Eigen::VectorXd::Constant(1, -3.0),
                          Eigen::VectorXd::Zero(1), 7.0)[0] == 0.0);

  // g = -0.2, K = [0,inf), w = 0, rho = 10 -> -2.
  QviProblem q = scalar_problem(BoxSet::nonnegative(1));
  CHECK(update_multiplier(q, Eigen::VectorXd::Constant(1, -0.2),
                          Eigen::VectorXd::Zero(1), 10.0)[0] == doctest::Approx(-2.0));

  // g = 2, K = (-inf,1], w = 3, rho = 1: z = 5, P = 1 -> 4.
  QviProblem s = scalar_problem(
      BoxSet(Eigen::VectorXd::Constant(1, -std::numeric_limits<double>::infinity()),
             Eigen::VectorXd::Ones(1)));
  CHECK(update_multiplier(s, Eigen::VectorXd::Constant(1, 2.0),
                          Eigen::VectorXd::Constant(1, 3.0), 1.0)[0] ==
        doctest::Approx(4.0));

  // Cone polarity is exact.
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const Eigen::VectorXd x = rand_vec(rng, 1, -4.0, 4.0);
    const Eigen::VectorXd w = rand_vec(rng, 1, -2.0, 2.0);
    const Eigen::VectorXd lam = update_multiplier(q, x, w, 2.5);
    CHECK(project_polar_cone(lam, q.set_K) == lam);
  }
}

TEST_CASE("safeguard") {
  const BoxSet b = BoxSet::bounded(1, -1e6, 1e6);
  CHECK(safeguard(Eigen::VectorXd::Constant(1, 12.0), b)[0] == 12.0);
  CHECK(safeguard(Eigen::VectorXd::Constant(1, 2e6), b)[0] == 1e6);
  CHECK(safeguard(Eigen::VectorXd::Zero(1), b)[0] == 0.0);
}

TEST_CASE("penalty update") {
  AlmConfig cfg;
  cfg.tau = 0.1;
  cfg.gamma = 10.0;
  CHECK(penalty_update(123.0, std::nullopt, 1.0, cfg, 0) == 1.0);
  CHECK(penalty_update(0.05, 1.0, 1.0, cfg, 3) == 1.0);
  CHECK(penalty_update(0.5, 1.0, 1.0, cfg, 3) == 10.0);
  CHECK_THROWS_AS(penalty_update(0.5, std::nullopt, 1.0, cfg, 1), ContractViolation);
}

TEST_CASE("complementarity bound") {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(1);
  CHECK(complementarity_bound(Eigen::VectorXd::Zero(1), ones, 2.0, ones) == 0.0);
  CHECK(complementarity_bound(ones, ones, 2.0, ones) == 0.0);
  CHECK(complementarity_bound(ones, Eigen::VectorXd::Constant(1, 3.0), 1.0, ones) ==
        doctest::Approx(2.0));
}

TEST_CASE("KKT residual") {
  const QviProblem p = build_analytic_moving_set();
  CHECK(kkt_residual(p, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)) <= 1e-12);

  // Unconstrained zero of F with a strictly interior constraint value.
  QviProblem far = scalar_problem(
      BoxSet(Eigen::VectorXd::Constant(1, -std::numeric_limits<double>::infinity()),
             Eigen::VectorXd::Constant(1, 10.0)));
  CHECK(kkt_residual(far, Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd::Zero(1)) ==
        0.0);

  // Stationarity holds at x = 2 with lambda = 0 (F(2) = 0), so the residual
  // is the violated-constraint term alone: |G(2,2) - P_K(G(2,2))| = 0.5.
  CHECK(kkt_residual(p, Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd::Zero(1)) ==
        doctest::Approx(0.5));
}

TEST_CASE("normality supremum") {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(2);
  const BoxSet k = BoxSet::nonnegative(2);
  // lambda <= 0: sup = <lambda, 0 - g>.
  const Eigen::VectorXd lam = (Eigen::VectorXd(2) << -1.0, -2.0).finished();
  const Eigen::VectorXd g = (Eigen::VectorXd(2) << 0.5, -0.25).finished();
  const auto sup = normality_sup(lam, g, k, ones);
  REQUIRE(sup.has_value());
  CHECK(*sup == doctest::Approx(-1.0 * -0.5 + -2.0 * 0.25));
  // Positive lambda against an infinite upper bound has no finite supremum.
  CHECK_FALSE(normality_sup(ones, g, k, ones).has_value());
}

TEST_CASE("natural residual") {
  ViOperator t;
  t.dim = 1;
  t.apply = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, x[0] - 2.0).eval();
  };
  CHECK(natural_residual(t, BoxSet::whole_space(1), Eigen::VectorXd::Zero(1))[0] ==
        -2.0);
  CHECK(natural_residual(t, BoxSet::bounded(1, 0, 1), Eigen::VectorXd::Ones(1))[0] ==
        0.0);
  CHECK(natural_residual(t, BoxSet::bounded(1, 0, 1), Eigen::VectorXd::Zero(1))[0] ==
        -1.0);
}

TEST_CASE("generalized Jacobian action") {
  // J = I: the masked action is the identity regardless of the active set.
  ViOperator ident;
  ident.dim = 2;
  ident.apply = [](const Eigen::VectorXd& x) { return (0.2 * x).eval(); };
  ident.apply_jacobian = [](const Eigen::VectorXd&, const Eigen::VectorXd& d) {
    return (0.2 * d).eval();
  };
  const Eigen::VectorXd d = (Eigen::VectorXd(2) << 3.0, -4.0).finished();

  // All components strictly inside: action = J d.
  Eigen::VectorXd x_in = Eigen::VectorXd::Zero(2);
  CHECK(generalized_jacobian_action(ident, BoxSet::bounded(2, -1, 1), x_in, d) ==
        (0.2 * d).eval());

  // All components outside: action = d.
  Eigen::VectorXd x_out = Eigen::VectorXd::Constant(2, 9.0);
  CHECK(generalized_jacobian_action(ident, BoxSet::bounded(2, -1, 1), x_out, d) == d);

  // Mixed: first row Jacobian, second row identity.
  ViOperator mixed;
  mixed.dim = 2;
  mixed.apply = [](const Eigen::VectorXd& x) {
    return Eigen::Vector2d(0.0, x[1] - 9.0).eval();
  };
  mixed.apply_jacobian = [](const Eigen::VectorXd&, const Eigen::VectorXd& dd) {
    return dd;
  };
  const Eigen::VectorXd out =
      generalized_jacobian_action(mixed, BoxSet::bounded(2, -1, 1),
                                  Eigen::VectorXd::Zero(2), d);
  CHECK(out[0] == d[0]);
  CHECK(out[1] == d[1]);
}

TEST_CASE("semismooth Newton on scalar problems") {
  ViOperator t;
  t.dim = 1;
  t.apply = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, x[0] - 2.0).eval();
  };
  t.apply_jacobian = [](const Eigen::VectorXd&, const Eigen::VectorXd& d) { return d; };

  NewtonConfig cfg;
  cfg.tol = 1e-12;

  // Affine over the whole space: one exact step.
  NewtonResult free = semismooth_newton(t, BoxSet::whole_space(1),
                                        Eigen::VectorXd::Zero(1), cfg);
  CHECK(free.converged);
  CHECK(free.iterations == 1);
  CHECK(free.x[0] == doctest::Approx(2.0));

  // Box VI solution at the upper bound.
  NewtonResult boxed = semismooth_newton(t, BoxSet::bounded(1, 0, 1),
                                         Eigen::VectorXd::Zero(1), cfg);
  CHECK(boxed.converged);
  CHECK(boxed.residual_norm <= 1e-12);
  CHECK(boxed.x[0] == doctest::Approx(1.0));

  // Subproblem of the analytic moving-set QVI at rho = 1, w = 0: zero of
  // (x - 2) + max(0, (x-1)/2), i.e. x - 2 + (x-1)/2 = 0 on the active
  // branch, solved by x = 5/3.
  const QviProblem p = build_analytic_moving_set();
  const ViOperator alm_op = build_alm_operator(p, Eigen::VectorXd::Zero(1), 1.0);
  NewtonResult sub =
      semismooth_newton(alm_op, p.set_C, Eigen::VectorXd::Zero(1), cfg);
  CHECK(sub.converged);
  CHECK(sub.x[0] == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("semismooth Newton on random strongly monotone affine box VIs") {
  std::mt19937_64 rng(17);
  NewtonConfig cfg;
  cfg.tol = 1e-10;
  cfg.max_iterations = 50;
  const Eigen::VectorXd weights_unset;
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 49);
    Eigen::MatrixXd m = Eigen::MatrixXd::NullaryExpr(n, n, [&]() {
      return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    });
    Eigen::MatrixXd a = m * m.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd b = rand_vec(rng, n, -2.0, 2.0);
    const BoxSet c = BoxSet::bounded(n, -1.0, 1.0);

    ViOperator t;
    t.dim = n;
    t.apply = [a, b](const Eigen::VectorXd& x) { return (a * x - b).eval(); };
    t.apply_jacobian = [a](const Eigen::VectorXd&, const Eigen::VectorXd& d) {
      return (a * d).eval();
    };
    if (trial % 2 == 0) {
      // Exercise the sparse masked-Jacobian path as well.
      t.assemble_jacobian = [a](const Eigen::VectorXd&) {
        return SpMat(a.sparseView());
      };
    }

    const Eigen::VectorXd x0 = rand_vec(rng, n, -3.0, 3.0);
    const NewtonResult res = semismooth_newton(t, c, x0, cfg);
    REQUIRE(res.converged);
    CHECK(res.residual_norm <= 1e-10);
    CHECK(res.iterations <= 50);

    // Residual history never increases past the line-search bound.
    for (size_t i = 1; i < res.residual_history.size(); ++i) {
      CHECK(res.residual_history[i] <= res.residual_history[i - 1] * (1.0 + 1e-12));
    }

    // Theta = 0 certifies discrete VI optimality: <T(x), y - x> >= 0 on C.
    const Eigen::VectorXd tx = t.apply(res.x);
    for (int s = 0; s < 5; ++s) {
      const Eigen::VectorXd y = project_box(rand_vec(rng, n, -1.5, 1.5), c);
      CHECK(tx.dot(y - res.x) >= -1e-8);
    }
  }
}

TEST_CASE("ALM operator Jacobian matches finite differences off the kinks") {
  const QviProblem p = build_analytic_moving_set();
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const double rho = std::uniform_real_distribution<double>(0.5, 20.0)(rng);
    const Eigen::VectorXd w = rand_vec(rng, 1, -1.0, 1.0).cwiseMax(0.0);
    const ViOperator op = build_alm_operator(p, w, rho);
    Eigen::VectorXd x = rand_vec(rng, 1, -3.0, 3.0);
    // Stay away from the projection kink z = 0.
    const double z = p.eval_G(x, x)[0] + w[0] / rho;
    if (std::abs(z) < 1e-3) continue;
    const Eigen::VectorXd d = rand_vec(rng, 1, -1.0, 1.0);
    const double eps = 1e-6;
    const Eigen::VectorXd fd =
        (op.apply(x + eps * d) - op.apply(x - eps * d)) / (2.0 * eps);
    const Eigen::VectorXd jd = op.apply_jacobian(x, d);
    CHECK((fd - jd).norm() <= 1e-4 * std::max(1.0, jd.norm()));
  }
}

TEST_CASE("alm_solve on the analytic moving-set QVI") {
  const QviProblem p = build_analytic_moving_set();
  AlmConfig cfg = default_cfg(p);
  cfg.tol_outer = 1e-8;
  cfg.tol_inner = 1e-10;

  double worst_identity = 0.0;
  double worst_normality = 0.0;
  bool v_dominates = true;
  AlmObserver obs = [&](const QviProblem& prob, const AlmIterationScope& sc) {
    const Eigen::VectorXd lhs = eval_aug_lagrangian(prob, sc.x_new, sc.w, sc.rho);
    const Eigen::VectorXd rhs =
        prob.eval_F(sc.x_new) + prob.apply_DyG_adj(sc.x_new, sc.x_new, sc.lambda_new);
    worst_identity = std::max(
        worst_identity, norm(lhs - rhs, prob.x_weights) /
                            std::max(1.0, norm(lhs, prob.x_weights)));
    const Eigen::VectorXd g = prob.eval_G(sc.x_new, sc.x_new);
    const auto sup = normality_sup(sc.lambda_new, g, prob.set_K, prob.h_weights);
    REQUIRE(sup.has_value());
    worst_normality = std::max(worst_normality, *sup - sc.r_k);
    if (sc.v_new < dist_to_box(g, prob.set_K, prob.h_weights) - 1e-14) {
      v_dominates = false;
    }
    // Cone polarity, exact.
    CHECK(project_polar_cone(sc.lambda_new, prob.set_K) == sc.lambda_new);
  };

  const AlmReport rep = alm_solve(p, cfg, Eigen::VectorXd::Zero(1),
                                  Eigen::VectorXd::Zero(1), obs);
  REQUIRE(rep.status == AlmStatus::Converged);
  CHECK(std::abs(rep.final_point.x[0] - 1.0) <= 1e-6);
  CHECK(std::abs(rep.final_point.lambda[0] - 1.0) <= 1e-6);
  CHECK(rep.records.size() <= 15);
  CHECK(kkt_residual(p, rep.final_point.x, rep.final_point.lambda) <= 1e-8);

  CHECK(worst_identity <= 1e-12);
  CHECK(worst_normality <= 1e-10);
  CHECK(v_dominates);

  // rho is nondecreasing and moves by factors of gamma only.
  for (size_t i = 1; i < rep.records.size(); ++i) {
    const double prev = rep.records[i - 1].rho;
    const double cur = rep.records[i].rho;
    CHECK((cur == prev || cur == cfg.gamma * prev));
  }
  // Converged implies the last record meets the tolerance.
  CHECK(rep.records.back().kkt_residual <= cfg.tol_outer);
  CHECK(rep.records.back().v_value <= cfg.tol_outer);
}

TEST_CASE("alm_solve on plain VIs (m = 0)") {
  // F(x) = x - b over R^n: solution b after one outer iteration.
  const Eigen::VectorXd b = (Eigen::VectorXd(3) << 1.0, -2.0, 0.5).finished();
  QviProblem p = qvi_from_vi(
      [b](const Eigen::VectorXd& x) { return (x - b).eval(); },
      [](const Eigen::VectorXd&, const Eigen::VectorXd& d) { return d; },
      BoxSet::whole_space(3), Eigen::VectorXd::Ones(3));
  AlmConfig cfg = default_cfg(p);
  AlmReport rep = alm_solve(p, cfg, Eigen::VectorXd::Zero(3), Eigen::VectorXd(0));
  REQUIRE(rep.status == AlmStatus::Converged);
  CHECK(rep.records.size() == 1);
  CHECK((rep.final_point.x - b).norm() <= 1e-6);

  // F(x) = x over C = [1,2]: solution at the lower bound.
  QviProblem q = qvi_from_vi(
      [](const Eigen::VectorXd& x) { return x; },
      [](const Eigen::VectorXd&, const Eigen::VectorXd& d) { return d; },
      BoxSet::bounded(1, 1.0, 2.0), Eigen::VectorXd::Ones(1));
  AlmReport rep2 = alm_solve(q, cfg, Eigen::VectorXd::Zero(1), Eigen::VectorXd(0));
  REQUIRE(rep2.status == AlmStatus::Converged);
  CHECK(rep2.records.size() == 1);
  CHECK(rep2.final_point.x[0] == doctest::Approx(1.0));

  // m = 0 forces V = 0 and a constant penalty.
  for (const auto& r : rep.records) {
    CHECK(r.v_value == 0.0);
    CHECK(r.rho == cfg.rho0);
  }
}

TEST_CASE("alm_solve failure paths") {
  const QviProblem p = build_analytic_moving_set();
  AlmConfig cfg = default_cfg(p);
  cfg.max_inner = 1;
  cfg.tol_inner = 1e-14;
  const AlmReport rep =
      alm_solve(p, cfg, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1));
  CHECK(rep.status == AlmStatus::SubproblemFailure);

  AlmConfig tight = default_cfg(p);
  tight.max_outer = 1;
  tight.tol_outer = 1e-12;
  tight.tol_inner = 1e-13;
  const AlmReport rep2 =
      alm_solve(p, tight, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1));
  CHECK(rep2.status == AlmStatus::MaxOuter);

  // Non-finite callback output surfaces as EvaluationError with the index.
  QviProblem bad = build_analytic_moving_set();
  bad.eval_F = [](const Eigen::VectorXd&) {
    return Eigen::VectorXd::Constant(1, std::nan("")).eval();
  };
  AlmConfig bcfg = default_cfg(bad);
  CHECK_THROWS_AS(
      alm_solve(bad, bcfg, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)),
      EvaluationError);
}
