// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include "qvi/vec.hpp"

namespace qvi {

/// Closed convex box { z : lower <= z <= upper } with per-component bounds.
/// Unbounded components carry genuine IEEE infinities, never large finite
/// stand-ins; projection and polar-cone logic branch on finiteness.
class BoxSet {
 public:
  BoxSet() = default;
  BoxSet(Eigen::VectorXd lower, Eigen::VectorXd upper);

  static BoxSet whole_space(Eigen::Index n);
  static BoxSet nonnegative(Eigen::Index n);  // [0, inf)^n
  static BoxSet nonpositive(Eigen::Index n);  // (-inf, 0]^n
  static BoxSet bounded(Eigen::Index n, double lo, double hi);

  Eigen::Index dim() const { return lower_.size(); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

  /// True when every finite bound equals zero, i.e. the box is a cone.
  bool is_cone() const;

  bool contains(const Eigen::VectorXd& z, double tol = 0.0) const;

 private:
  Eigen::VectorXd lower_, upper_;
};

/// Componentwise clamp of z onto [lower, upper].
Eigen::VectorXd project_box(const Eigen::VectorXd& z, const BoxSet& s);
Vec project_box(const Vec& z, const BoxSet& s);

/// Weighted distance ||g - P_K(g)||_H to a box.
double dist_to_box(const Eigen::VectorXd& g, const BoxSet& k,
                   const Eigen::VectorXd& weights);
double dist_to_box(const Vec& g, const BoxSet& k);

/// Projection onto the polar cone of a box cone K. Requires k.is_cone().
Eigen::VectorXd project_polar_cone(const Eigen::VectorXd& z, const BoxSet& k);
Vec project_polar_cone(const Vec& z, const BoxSet& k);

}  // namespace qvi
