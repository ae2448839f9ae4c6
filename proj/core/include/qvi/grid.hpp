// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "qvi/vec.hpp"

namespace qvi {

/// Uniform grid on the unit square with n points per row/column.
/// Interior grids sample (ih, jh), h = 1/(n+1), i,j = 1..n; boundary grids
/// sample (ih, jh), h = 1/(n-1), i,j = 0..n-1. Node ids are row-major in the
/// lattice coordinates (i, j).
struct Grid2D {
  int n = 0;
  bool include_boundary = false;
  double h = 0.0;
  Eigen::Index num_nodes = 0;
  std::vector<Eigen::Index> boundary_ids;  // empty iff !include_boundary
  Eigen::VectorXd quad_weights;            // h^2 interior nodes, h boundary nodes

  static Grid2D interior(int n);
  static Grid2D with_boundary(int n);

  Eigen::Index id(int i, int j) const { return static_cast<Eigen::Index>(j) * n + i; }
  std::pair<int, int> lattice(Eigen::Index node) const {
    return {static_cast<int>(node % n), static_cast<int>(node / n)};
  }
  double x_of(int i) const { return include_boundary ? i * h : (i + 1) * h; }
  double y_of(int j) const { return x_of(j); }
  bool on_boundary(int i, int j) const {
    return include_boundary && (i == 0 || j == 0 || i == n - 1 || j == n - 1);
  }
};

}  // namespace qvi
