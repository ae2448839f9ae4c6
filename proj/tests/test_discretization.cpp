// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qvi/fd_operators.hpp"
#include "qvi/grid.hpp"

using namespace qvi;

namespace {

Eigen::VectorXd rand_vec(std::mt19937_64& rng, Eigen::Index n, double s = 1.0) {
  std::uniform_real_distribution<double> dist(-s, s);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

Eigen::VectorXd sample(const Grid2D& g, double (*f)(double, double)) {
  Eigen::VectorXd u(g.num_nodes);
  for (Eigen::Index a = 0; a < g.num_nodes; ++a) {
    const auto [i, j] = g.lattice(a);
    u[a] = f(g.x_of(i), g.y_of(j));
  }
  return u;
}

}  // namespace

TEST_CASE("grid index maps and quadrature") {
  for (const Grid2D& g : {Grid2D::interior(5), Grid2D::with_boundary(6)}) {
    for (Eigen::Index a = 0; a < g.num_nodes; ++a) {
      const auto [i, j] = g.lattice(a);
      CHECK(g.id(i, j) == a);
    }
    CHECK((g.quad_weights.array() > 0.0).all());
  }
  CHECK(Grid2D::interior(4).boundary_ids.empty());
  CHECK(Grid2D::with_boundary(6).boundary_ids.size() == 4 * 5);
  CHECK(Grid2D::interior(4).h == doctest::Approx(0.2));
  CHECK(Grid2D::with_boundary(6).h == doctest::Approx(0.2));
}

TEST_CASE("Dirichlet Laplacian") {
  // n = 1: h = 1/2, single entry 4/h^2 = 16.
  const SparseOp l1 = laplacian_dirichlet(Grid2D::interior(1));
  CHECK(l1.matrix.coeff(0, 0) == doctest::Approx(16.0));
  CHECK(l1.symmetric);

  // Interior rows away from the boundary annihilate constants.
  const Grid2D g = Grid2D::interior(7);
  const SparseOp l = laplacian_dirichlet(g);
  const Eigen::VectorXd lu = l.matrix * Eigen::VectorXd::Ones(g.num_nodes);
  for (int j = 1; j < 6; ++j) {
    for (int i = 1; i < 6; ++i) {
      CHECK(std::abs(lu[g.id(i, j)]) <= 1e-10);
    }
  }

  CHECK_THROWS_AS(laplacian_dirichlet(Grid2D::with_boundary(4)), ContractViolation);
}

TEST_CASE("smallest Laplacian eigenvalue approaches 2 pi^2") {
  const Grid2D g = Grid2D::interior(64);
  const SparseOp l = laplacian_dirichlet(g);
  const PoissonSolver solver(l);
  std::mt19937_64 rng(5);
  Eigen::VectorXd v = rand_vec(rng, g.num_nodes);
  v.normalize();
  for (int it = 0; it < 60; ++it) {
    v = solver.solve(v);
    v.normalize();
  }
  const double lambda_min = v.dot(l.matrix * v);
  const double exact = 2.0 * std::numbers::pi * std::numbers::pi;
  CHECK(std::abs(lambda_min - exact) / exact <= 0.02);
}

TEST_CASE("Poisson solve") {
  const Grid2D g = Grid2D::interior(64);
  const PoissonSolver solver(laplacian_dirichlet(g));

  CHECK(solver.solve(Eigen::VectorXd::Zero(g.num_nodes)).norm() == 0.0);

  // Eigenfunction relation S rhs = rhs / (2 pi^2), within 2%.
  const Eigen::VectorXd rhs = sample(g, [](double x, double y) {
    return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
  });
  const Eigen::VectorXd s = solver.solve(rhs);
  const double ratio = s.dot(rhs) / rhs.dot(rhs);
  const double expected = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi);
  CHECK(std::abs(ratio - expected) / expected <= 0.02);

  // Self-adjointness in the weighted inner product.
  std::mt19937_64 rng(9);
  const Eigen::VectorXd a = rand_vec(rng, g.num_nodes);
  const Eigen::VectorXd b = rand_vec(rng, g.num_nodes);
  const double lhs = inner(solver.solve(a), b, g.quad_weights);
  const double rhsv = inner(a, solver.solve(b), g.quad_weights);
  CHECK(std::abs(lhs - rhsv) <= 1e-10 * std::max(1.0, std::abs(lhs)));

  // Composition with the Laplacian is the identity.
  const Eigen::VectorXd u = rand_vec(rng, g.num_nodes);
  CHECK((solver.solve(laplacian_dirichlet(g).matrix * u) - u).norm() <=
        1e-9 * u.norm());
}

TEST_CASE("backward gradient") {
  const Grid2D g = Grid2D::interior(8);

  // Constants differentiate to zero away from the zero-extension edge.
  auto [cgx, cgy] = gradient_backward(g, Eigen::VectorXd::Ones(g.num_nodes));
  for (int j = 1; j < 8; ++j) {
    for (int i = 1; i < 8; ++i) {
      CHECK(cgx[g.id(i, j)] == 0.0);
      CHECK(cgy[g.id(i, j)] == 0.0);
    }
  }

  // u = x has unit x-derivative everywhere (the left boundary value is 0).
  auto [xgx, xgy] = gradient_backward(g, sample(g, [](double x, double) { return x; }));
  for (Eigen::Index a = 0; a < g.num_nodes; ++a) {
    CHECK(xgx[a] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(xgy[a]) <= 1e-12);
  }

  // Exact linearity.
  std::mt19937_64 rng(13);
  const Eigen::VectorXd u = rand_vec(rng, g.num_nodes);
  const Eigen::VectorXd v = rand_vec(rng, g.num_nodes);
  auto [gu, _1] = gradient_backward(g, u);
  auto [gv, _2] = gradient_backward(g, v);
  auto [gw, _3] = gradient_backward(g, (2.5 * u + v).eval());
  CHECK((gw - (2.5 * gu + gv)).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("p-Laplacian") {
  const Grid2D g = Grid2D::interior(8);
  std::mt19937_64 rng(21);
  const Eigen::VectorXd u = rand_vec(rng, g.num_nodes);

  // p = 2 coincides with the adjoint-of-gradient composition on all inputs.
  const SpMat dx = backward_difference_x(g);
  const SpMat dy = backward_difference_y(g);
  const Eigen::VectorXd lap2 =
      dx.transpose() * (dx * u) + dy.transpose() * (dy * u);
  CHECK((p_laplacian_apply(g, u, 2.0) - lap2).lpNorm<Eigen::Infinity>() <= 1e-12);

  CHECK(p_laplacian_apply(g, Eigen::VectorXd::Zero(g.num_nodes), 3.0).norm() == 0.0);
  CHECK_THROWS_AS(p_laplacian_apply(g, u, 1.5), ContractViolation);

  for (const double p : {2.0, 3.0, 4.0}) {
    // The operator is the exact Riesz gradient of the discrete energy.
    const Eigen::VectorXd d = rand_vec(rng, g.num_nodes);
    const double eps = 1e-6;
    const double fd = (p_laplacian_energy(g, u + eps * d, p) -
                       p_laplacian_energy(g, u - eps * d, p)) /
                      (2.0 * eps);
    const double directional = inner(p_laplacian_apply(g, u, p), d, g.quad_weights);
    CHECK(std::abs(fd - directional) <= 1e-5 * std::max(1.0, std::abs(directional)));

    // Assembled Jacobian vs directional finite differences of the apply.
    const SparseOp jac = p_laplacian_jacobian(g, u, p);
    const Eigen::VectorXd fd_dir = (p_laplacian_apply(g, (u + eps * d).eval(), p) -
                                    p_laplacian_apply(g, (u - eps * d).eval(), p)) /
                                   (2.0 * eps);
    const Eigen::VectorXd jd = jac.matrix * d;
    CHECK((fd_dir - jd).norm() <= 1e-5 * std::max(1.0, jd.norm()));
  }

  // At p = 2 the operator is linear, so the assembled matrix reproduces the
  // matrix-free apply exactly.
  const Eigen::VectorXd v = rand_vec(rng, g.num_nodes);
  CHECK((p_laplacian_jacobian(g, u, 2.0).matrix * v - p_laplacian_apply(g, v, 2.0))
            .lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("trace and normal derivative") {
  const Grid2D g = Grid2D::with_boundary(9);

  auto [tc, dc] = trace_and_normal_derivative(g, Eigen::VectorXd::Ones(g.num_nodes));
  CHECK(dc.lpNorm<Eigen::Infinity>() <= 1e-14);
  CHECK((tc.array() == 1.0).all());

  const Eigen::VectorXd ux = sample(g, [](double x, double) { return x; });
  auto [tx, dx] = trace_and_normal_derivative(g, ux);
  for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(g.boundary_ids.size()); ++b) {
    const auto [i, j] = g.lattice(g.boundary_ids[static_cast<size_t>(b)]);
    const bool corner = (i == 0 || i == g.n - 1) && (j == 0 || j == g.n - 1);
    if (corner) continue;
    if (i == g.n - 1) CHECK(dx[b] == doctest::Approx(1.0));
    if (i == 0) CHECK(dx[b] == doctest::Approx(-1.0));
    if (i > 0 && i < g.n - 1) CHECK(std::abs(dx[b]) <= 1e-12);
  }

  // Exact linearity in u.
  std::mt19937_64 rng(31);
  const Eigen::VectorXd u = rand_vec(rng, g.num_nodes);
  const Eigen::VectorXd v = rand_vec(rng, g.num_nodes);
  auto [t1, d1] = trace_and_normal_derivative(g, u);
  auto [t2, d2] = trace_and_normal_derivative(g, v);
  auto [t3, d3] = trace_and_normal_derivative(g, (3.0 * u - v).eval());
  CHECK((d3 - (3.0 * d1 - d2)).lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK((t3 - (3.0 * t1 - t2)).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("quadrature") {
  const Grid2D g = Grid2D::interior(10);
  const double nh = g.n * g.h;
  CHECK(integrate(g, Eigen::VectorXd::Ones(g.num_nodes)) ==
        doctest::Approx(nh * nh).epsilon(1e-12));
  CHECK(integrate(g, Eigen::VectorXd::Zero(g.num_nodes)) == 0.0);

  std::mt19937_64 rng(37);
  const Eigen::VectorXd u = rand_vec(rng, g.num_nodes);
  const Eigen::VectorXd v = rand_vec(rng, g.num_nodes);
  CHECK(integrate(g, (2.0 * u + v).eval()) ==
        doctest::Approx(2.0 * integrate(g, u) + integrate(g, v)).epsilon(1e-12));
}
