// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include "qvi/grid.hpp"

namespace qvi {

Grid2D Grid2D::interior(int n) {
  detail::require(n >= 1, "Grid2D::interior: n must be positive");
  Grid2D g;
  g.n = n;
  g.include_boundary = false;
  g.h = 1.0 / (n + 1);
  g.num_nodes = static_cast<Eigen::Index>(n) * n;
  g.quad_weights = Eigen::VectorXd::Constant(g.num_nodes, g.h * g.h);
  return g;
}

Grid2D Grid2D::with_boundary(int n) {
  detail::require(n >= 2, "Grid2D::with_boundary: n must be at least 2");
  Grid2D g;
  g.n = n;
  g.include_boundary = true;
  g.h = 1.0 / (n - 1);
  g.num_nodes = static_cast<Eigen::Index>(n) * n;
  g.quad_weights = Eigen::VectorXd::Constant(g.num_nodes, g.h * g.h);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (g.on_boundary(i, j)) {
        const Eigen::Index node = g.id(i, j);
        g.boundary_ids.push_back(node);
        g.quad_weights[node] = g.h;
      }
    }
  }
  return g;
}

}  // namespace qvi
