// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include <memory>
#include <vector>

#include "qvi/fd_operators.hpp"
#include "qvi/problems.hpp"

namespace qvi {

namespace {

// Shared immutable state of one Signorini instance.
struct SignoriniOps {
  Grid2D grid;
  SpMat a;           // energy Hessian of 1/2 int (u^2 + |grad u|^2), all nodes free
  Eigen::VectorXd load;     // trapezoidal mass times f
  Eigen::VectorXd winv;     // inverse X-weights
  SpMat trace;              // m x N boundary restriction
  Eigen::VectorXd g_vec;    // gradient of u -> <phi, dn u>
  Eigen::VectorXd h0;
  Eigen::Index m;
};

// Trapezoidal node weights for the area quadrature: h^2 interior, h^2/2 on
// edges, h^2/4 at corners.
Eigen::VectorXd trapezoid_mass(const Grid2D& g) {
  Eigen::VectorXd m(g.num_nodes);
  const double h2 = g.h * g.h;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const int edges = (i == 0 || i == g.n - 1 ? 1 : 0) + (j == 0 || j == g.n - 1 ? 1 : 0);
      m[g.id(i, j)] = h2 / (1 << edges);
    }
  }
  return m;
}

// Hessian of the discrete H^1 energy 1/2 int (u^2 + |grad u|^2) with natural
// boundary rows: lumped trapezoidal mass plus edge-based stiffness (edges
// lying on the boundary carry half weight).
SpMat h1_energy_hessian(const Grid2D& g, const Eigen::VectorXd& mass) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(6) * g.num_nodes);
  for (Eigen::Index a = 0; a < g.num_nodes; ++a) trips.emplace_back(a, a, mass[a]);
  auto add_edge = [&](Eigen::Index a, Eigen::Index b, double w) {
    trips.emplace_back(a, a, w);
    trips.emplace_back(b, b, w);
    trips.emplace_back(a, b, -w);
    trips.emplace_back(b, a, -w);
  };
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i + 1 < g.n; ++i) {
      add_edge(g.id(i, j), g.id(i + 1, j), (j == 0 || j == g.n - 1) ? 0.5 : 1.0);
    }
  }
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j + 1 < g.n; ++j) {
      add_edge(g.id(i, j), g.id(i, j + 1), (i == 0 || i == g.n - 1) ? 0.5 : 1.0);
    }
  }
  SpMat a(g.num_nodes, g.num_nodes);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

}  // namespace

QviProblem build_signorini(const SignoriniData& data) {
  detail::require(data.n >= 3, "build_signorini: n must be at least 3");
  auto ops = std::make_shared<SignoriniOps>();
  ops->grid = Grid2D::with_boundary(data.n);
  const Grid2D& g = ops->grid;
  ops->m = static_cast<Eigen::Index>(g.boundary_ids.size());

  Eigen::VectorXd f = data.f;
  if (f.size() == 0) f = Eigen::VectorXd::Constant(g.num_nodes, data.f_value);
  detail::require(f.size() == g.num_nodes, "build_signorini: bad f dimension");
  Eigen::VectorXd phi = data.phi.size() ? data.phi : Eigen::VectorXd::Ones(ops->m);
  ops->h0 = data.h0.size() ? data.h0 : Eigen::VectorXd::Ones(ops->m);
  detail::require(phi.size() == ops->m && ops->h0.size() == ops->m,
                  "build_signorini: bad boundary data dimension");
  detail::require((phi.array() >= 0.0).all(), "build_signorini: phi must be >= 0");

  const Eigen::VectorXd mass = trapezoid_mass(g);
  ops->a = h1_energy_hessian(g, mass);
  ops->load = mass.cwiseProduct(f);
  ops->winv = g.quad_weights.cwiseInverse();

  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(ops->m));
    for (Eigen::Index b = 0; b < ops->m; ++b) {
      trips.emplace_back(b, g.boundary_ids[static_cast<size_t>(b)], 1.0);
    }
    ops->trace.resize(ops->m, g.num_nodes);
    ops->trace.setFromTriplets(trips.begin(), trips.end());
  }

  // c(u) = sum_b h phi_b (dn u)_b is linear; G(u, v) = trace(v) - h0 + c(u) 1.
  const SpMat dn = normal_derivative_matrix(g);
  ops->g_vec = dn.transpose() * (g.h * phi).eval();

  QviProblem p;
  p.n = g.num_nodes;
  p.m = ops->m;
  p.set_C = BoxSet::whole_space(p.n);
  p.set_K = BoxSet::nonnegative(p.m);
  p.x_weights = g.quad_weights;
  p.h_weights = Eigen::VectorXd::Constant(p.m, g.h);

  p.eval_F = [ops](const Eigen::VectorXd& u) {
    return (ops->winv.array() * (ops->a * u - ops->load).array()).matrix().eval();
  };
  p.apply_Fprime = [ops](const Eigen::VectorXd&, const Eigen::VectorXd& d) {
    return (ops->winv.array() * (ops->a * d).array()).matrix().eval();
  };
  p.eval_G = [ops](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double c = ops->g_vec.dot(x);
    return (ops->trace * y - ops->h0 + Eigen::VectorXd::Constant(ops->m, c)).eval();
  };
  p.apply_DyG = [ops](const Eigen::VectorXd&, const Eigen::VectorXd&,
                      const Eigen::VectorXd& d) { return (ops->trace * d).eval(); };
  p.apply_DyG_adj = [ops, hw = p.h_weights](const Eigen::VectorXd&,
                                            const Eigen::VectorXd&,
                                            const Eigen::VectorXd& mu) {
    return (ops->winv.array() *
            (ops->trace.transpose() * hw.cwiseProduct(mu)).array())
        .matrix()
        .eval();
  };
  p.apply_DxG = [ops](const Eigen::VectorXd&, const Eigen::VectorXd&,
                      const Eigen::VectorXd& d) {
    return Eigen::VectorXd::Constant(ops->m, ops->g_vec.dot(d)).eval();
  };

  p.assemble_parts = [ops](const Eigen::VectorXd&) {
    JacobianParts parts;
    parts.f_prime = SpMat(ops->winv.asDiagonal() * ops->a);
    parts.dy_g = ops->trace;
    parts.dx_g.resize(ops->m, ops->grid.num_nodes);
    parts.dx_g_rank_one = {Eigen::VectorXd::Ones(ops->m), ops->g_vec};
    return parts;
  };
  return p;
}

}  // namespace qvi
