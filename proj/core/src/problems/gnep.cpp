// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "qvi/fd_operators.hpp"
#include "qvi/problems.hpp"

namespace qvi {

namespace {

constexpr int kPlayers = 4;

struct GnepOps {
  Grid2D grid;
  std::shared_ptr<PoissonSolver> solver;
  SpMat laplacian;
  Eigen::VectorXd f;
  Eigen::VectorXd psi;
  std::array<Eigen::VectorXd, kPlayers> y_d;
  std::array<Eigen::VectorXd, kPlayers> s_y_d;  // cached S(y_d^nu)
  std::array<double, kPlayers> alpha;
  bool alt_slots = false;

  Eigen::Index ng() const { return grid.num_nodes; }
  auto block(const Eigen::VectorXd& v, int nu) const {
    return v.segment(nu * ng(), ng());
  }
  Eigen::VectorXd sum_blocks(const Eigen::VectorXd& v) const {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(ng());
    for (int nu = 0; nu < kPlayers; ++nu) s += block(v, nu);
    return s;
  }
};

Eigen::VectorXd sample_psi(const Grid2D& g) {
  Eigen::VectorXd psi(g.num_nodes);
  for (Eigen::Index a = 0; a < g.num_nodes; ++a) {
    const auto [i, j] = g.lattice(a);
    const double x1 = g.x_of(i), x2 = g.y_of(j);
    const double r = std::sqrt((x1 - 0.5) * (x1 - 0.5) + (x2 - 0.5) * (x2 - 0.5));
    psi[a] = std::cos(5.0 * r) + 0.1;
  }
  return psi;
}

Eigen::VectorXd sample_xi(const Grid2D& g, double z1, double z2) {
  Eigen::VectorXd xi(g.num_nodes);
  for (Eigen::Index a = 0; a < g.num_nodes; ++a) {
    const auto [i, j] = g.lattice(a);
    const double x1 = g.x_of(i), x2 = g.y_of(j);
    const double box = std::max(std::abs(x1 - z1), std::abs(x2 - z2));
    xi[a] = 1e3 * std::max(0.0, 1.0 - 4.0 * box);
  }
  return xi;
}

std::shared_ptr<GnepOps> make_ops(const GnepData& data) {
  auto ops = std::make_shared<GnepOps>();
  ops->grid = Grid2D::interior(data.n);
  const SparseOp lap = laplacian_dirichlet(ops->grid);
  ops->laplacian = lap.matrix;
  ops->solver = std::make_shared<PoissonSolver>(lap);
  ops->f = Eigen::VectorXd::Constant(ops->ng(), data.f_value);
  ops->psi = sample_psi(ops->grid);
  ops->alpha = data.alpha;
  ops->alt_slots = data.alternative_slots;

  if (!data.y_desired_override.empty()) {
    detail::require(data.y_desired_override.size() == kPlayers,
                    "build_gnep: y_desired_override must hold 4 states");
    for (int nu = 0; nu < kPlayers; ++nu) {
      detail::require(data.y_desired_override[nu].size() == ops->ng(),
                      "build_gnep: bad y_desired dimension");
      ops->y_d[nu] = data.y_desired_override[nu];
    }
  } else {
    const std::array<double, kPlayers> z1 = {0.25, 0.75, 0.25, 0.75};
    const std::array<double, kPlayers> z2 = {0.25, 0.25, 0.75, 0.75};
    std::array<Eigen::VectorXd, kPlayers> xi;
    for (int nu = 0; nu < kPlayers; ++nu) xi[nu] = sample_xi(ops->grid, z1[nu], z2[nu]);
    for (int nu = 0; nu < kPlayers; ++nu) ops->y_d[nu] = xi[nu] - xi[kPlayers - 1 - nu];
  }
  for (int nu = 0; nu < kPlayers; ++nu) ops->s_y_d[nu] = ops->solver->solve(ops->y_d[nu]);
  return ops;
}

}  // namespace

QviProblem build_gnep(const GnepData& data) {
  detail::require(data.n >= 2, "build_gnep: n must be at least 2");
  for (double a : data.alpha) {
    detail::require(a > 0.0, "build_gnep: alpha must be positive");
  }
  auto ops = make_ops(data);
  const Eigen::Index ng = ops->ng();
  const Eigen::Index dim = kPlayers * ng;

  QviProblem p;
  p.n = dim;
  p.m = dim;
  p.set_C = BoxSet::bounded(dim, -data.control_bound, data.control_bound);
  p.set_K = BoxSet::nonnegative(dim);
  p.x_weights = Eigen::VectorXd::Constant(dim, ops->grid.h * ops->grid.h);
  p.h_weights = p.x_weights;

  p.eval_F = [ops, ng](const Eigen::VectorXd& u) {
    const Eigen::VectorXd y = ops->solver->solve(ops->sum_blocks(u) + ops->f);
    const Eigen::VectorXd sy = ops->solver->solve(y);
    Eigen::VectorXd out(kPlayers * ng);
    for (int nu = 0; nu < kPlayers; ++nu) {
      out.segment(nu * ng, ng) =
          ops->alpha[nu] * ops->block(u, nu) + sy - ops->s_y_d[nu];
    }
    return out;
  };
  p.apply_Fprime = [ops, ng](const Eigen::VectorXd&, const Eigen::VectorXd& d) {
    const Eigen::VectorXd t = ops->solver->solve(ops->sum_blocks(d));
    const Eigen::VectorXd s = ops->solver->solve(t);
    Eigen::VectorXd out(kPlayers * ng);
    for (int nu = 0; nu < kPlayers; ++nu) {
      out.segment(nu * ng, ng) = ops->alpha[nu] * ops->block(d, nu) + s;
    }
    return out;
  };

  p.eval_G = [ops, ng](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    Eigen::VectorXd out(kPlayers * ng);
    const Eigen::VectorXd ysum = ops->sum_blocks(y);
    for (int nu = 0; nu < kPlayers; ++nu) {
      // Standard slots: own player from the parameter slot x, opponents from
      // the variable slot y; the alternative convention swaps them.
      const Eigen::VectorXd src =
          ops->alt_slots
              ? ops->sum_blocks(x) - ops->block(x, nu) + ops->block(y, nu)
              : ysum - ops->block(y, nu) + ops->block(x, nu);
      out.segment(nu * ng, ng) = ops->solver->solve(src + ops->f) - ops->psi;
    }
    return out;
  };

  p.apply_DyG = [ops, ng](const Eigen::VectorXd&, const Eigen::VectorXd&,
                          const Eigen::VectorXd& d) {
    Eigen::VectorXd out(kPlayers * ng);
    if (ops->alt_slots) {
      for (int nu = 0; nu < kPlayers; ++nu) {
        out.segment(nu * ng, ng) = ops->solver->solve(ops->block(d, nu));
      }
    } else {
      const Eigen::VectorXd all = ops->solver->solve(ops->sum_blocks(d));
      for (int nu = 0; nu < kPlayers; ++nu) {
        out.segment(nu * ng, ng) = all - ops->solver->solve(ops->block(d, nu));
      }
    }
    return out;
  };
  p.apply_DyG_adj = [ops, ng](const Eigen::VectorXd&, const Eigen::VectorXd&,
                              const Eigen::VectorXd& mu) {
    // S is self-adjoint in the uniform inner product, so the adjoint reuses
    // the same solves blockwise.
    Eigen::VectorXd out(kPlayers * ng);
    std::array<Eigen::VectorXd, kPlayers> smu;
    for (int nu = 0; nu < kPlayers; ++nu) smu[nu] = ops->solver->solve(ops->block(mu, nu));
    if (ops->alt_slots) {
      for (int nu = 0; nu < kPlayers; ++nu) out.segment(nu * ng, ng) = smu[nu];
    } else {
      Eigen::VectorXd total = Eigen::VectorXd::Zero(ng);
      for (int nu = 0; nu < kPlayers; ++nu) total += smu[nu];
      for (int nu = 0; nu < kPlayers; ++nu) {
        out.segment(nu * ng, ng) = total - smu[nu];
      }
    }
    return out;
  };
  p.apply_DxG = [ops, ng](const Eigen::VectorXd&, const Eigen::VectorXd&,
                          const Eigen::VectorXd& d) {
    Eigen::VectorXd out(kPlayers * ng);
    if (ops->alt_slots) {
      const Eigen::VectorXd all = ops->solver->solve(ops->sum_blocks(d));
      for (int nu = 0; nu < kPlayers; ++nu) {
        out.segment(nu * ng, ng) = all - ops->solver->solve(ops->block(d, nu));
      }
    } else {
      for (int nu = 0; nu < kPlayers; ++nu) {
        out.segment(nu * ng, ng) = ops->solver->solve(ops->block(d, nu));
      }
    }
    return out;
  };

  // The linearization is dense through S = L^{-1}; the Newton system stays
  // sparse in the extended variables (d, t, s, q^0..q^3) with
  //   L t = sum_nu d^nu,  L s = t,  L q^kappa = sigma^kappa .* t,
  //   alpha_nu d^nu + s + rho sum_{kappa != nu} q^kappa = rhs_nu.
  p.custom_newton_system = [ops, ng, k_set = p.set_K](
                               const Eigen::VectorXd& x, const Eigen::VectorXd& w,
                               double rho, const std::vector<char>& inactive) {
    const Eigen::Index dim = kPlayers * ng;
    const Eigen::VectorXd y = ops->solver->solve(ops->sum_blocks(x) + ops->f);
    std::array<Eigen::VectorXd, kPlayers> sigma;
    for (int nu = 0; nu < kPlayers; ++nu) {
      sigma[nu] = Eigen::VectorXd::Zero(ng);
      for (Eigen::Index i = 0; i < ng; ++i) {
        const Eigen::Index row = nu * ng + i;
        const double z = (y[i] - ops->psi[i]) + w[row] / rho;
        if (z < k_set.lower()[row] || z > k_set.upper()[row]) sigma[nu][i] = 1.0;
      }
    }

    const Eigen::Index t_base = dim;
    const Eigen::Index s_base = dim + ng;
    const Eigen::Index q_base = dim + 2 * ng;
    const Eigen::Index total = dim + (2 + kPlayers) * ng;

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(40) * static_cast<size_t>(ng));

    for (int nu = 0; nu < kPlayers; ++nu) {
      for (Eigen::Index i = 0; i < ng; ++i) {
        const Eigen::Index row = nu * ng + i;
        if (!inactive[static_cast<size_t>(row)]) {
          trips.emplace_back(row, row, 1.0);
          continue;
        }
        trips.emplace_back(row, row, ops->alpha[nu]);
        trips.emplace_back(row, s_base + i, 1.0);
        for (int kappa = 0; kappa < kPlayers; ++kappa) {
          const bool couples = ops->alt_slots ? (kappa == nu) : (kappa != nu);
          if (couples) trips.emplace_back(row, q_base + kappa * ng + i, rho);
        }
      }
    }
    auto add_laplacian_rows = [&](Eigen::Index base) {
      for (Eigen::Index col = 0; col < ops->laplacian.outerSize(); ++col) {
        for (SpMat::InnerIterator it(ops->laplacian, col); it; ++it) {
          trips.emplace_back(base + it.row(), base + it.col(), it.value());
        }
      }
    };
    // L t - sum_nu d^nu = 0
    add_laplacian_rows(t_base);
    for (int nu = 0; nu < kPlayers; ++nu) {
      for (Eigen::Index i = 0; i < ng; ++i) {
        trips.emplace_back(t_base + i, nu * ng + i, -1.0);
      }
    }
    // L s - t = 0
    add_laplacian_rows(s_base);
    for (Eigen::Index i = 0; i < ng; ++i) {
      trips.emplace_back(s_base + i, t_base + i, -1.0);
    }
    // L q^kappa - sigma^kappa .* t = 0
    for (int kappa = 0; kappa < kPlayers; ++kappa) {
      add_laplacian_rows(q_base + kappa * ng);
      for (Eigen::Index i = 0; i < ng; ++i) {
        if (sigma[kappa][i] != 0.0) {
          trips.emplace_back(q_base + kappa * ng + i, t_base + i, -sigma[kappa][i]);
        }
      }
    }

    SemismoothSystem sys;
    sys.aux_dim = total - dim;
    sys.matrix.resize(total, total);
    sys.matrix.setFromTriplets(trips.begin(), trips.end());
    return sys;
  };

  return p;
}

double gnep_objective(const GnepData& data, int nu, const Eigen::VectorXd& u) {
  detail::require(nu >= 0 && nu < kPlayers, "gnep_objective: bad player index");
  auto ops = make_ops(data);
  const Eigen::Index ng = ops->ng();
  detail::require(u.size() == kPlayers * ng, "gnep_objective: dimension mismatch");
  const Eigen::VectorXd w = ops->grid.quad_weights;
  const Eigen::VectorXd y = ops->solver->solve(ops->sum_blocks(u) + ops->f);
  const Eigen::VectorXd dy = y - ops->y_d[nu];
  const Eigen::VectorXd un = ops->block(u, nu);
  return 0.5 * inner(dy, dy, w) + 0.5 * data.alpha[static_cast<size_t>(nu)] * inner(un, un, w);
}

}  // namespace qvi
