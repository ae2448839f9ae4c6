// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include "qvi/box_set.hpp"

#include <cmath>
#include <limits>

namespace qvi {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

BoxSet::BoxSet(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  detail::require(lower_.size() == upper_.size(), "BoxSet: bound size mismatch");
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    detail::require(!std::isnan(lower_[i]) && !std::isnan(upper_[i]),
                    "BoxSet: NaN bound");
    detail::require(lower_[i] <= upper_[i], "BoxSet: empty component interval");
  }
}

BoxSet BoxSet::whole_space(Eigen::Index n) {
  return BoxSet(Eigen::VectorXd::Constant(n, -kInf), Eigen::VectorXd::Constant(n, kInf));
}

BoxSet BoxSet::nonnegative(Eigen::Index n) {
  return BoxSet(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Constant(n, kInf));
}

BoxSet BoxSet::nonpositive(Eigen::Index n) {
  return BoxSet(Eigen::VectorXd::Constant(n, -kInf), Eigen::VectorXd::Zero(n));
}

BoxSet BoxSet::bounded(Eigen::Index n, double lo, double hi) {
  return BoxSet(Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi));
}

bool BoxSet::is_cone() const {
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (std::isfinite(lower_[i]) && lower_[i] != 0.0) return false;
    if (std::isfinite(upper_[i]) && upper_[i] != 0.0) return false;
  }
  return true;
}

bool BoxSet::contains(const Eigen::VectorXd& z, double tol) const {
  detail::require(z.size() == dim(), "BoxSet::contains: dimension mismatch");
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (z[i] < lower_[i] - tol || z[i] > upper_[i] + tol) return false;
  }
  return true;
}

Eigen::VectorXd project_box(const Eigen::VectorXd& z, const BoxSet& s) {
  detail::require(z.size() == s.dim(), "project_box: dimension mismatch");
  return z.cwiseMax(s.lower()).cwiseMin(s.upper());
}

Vec project_box(const Vec& z, const BoxSet& s) {
  return Vec(project_box(z.values, s), z.weights);
}

double dist_to_box(const Eigen::VectorXd& g, const BoxSet& k,
                   const Eigen::VectorXd& weights) {
  return norm(g - project_box(g, k), weights);
}

double dist_to_box(const Vec& g, const BoxSet& k) {
  return dist_to_box(g.values, k, g.weights);
}

Eigen::VectorXd project_polar_cone(const Eigen::VectorXd& z, const BoxSet& k) {
  detail::require(z.size() == k.dim(), "project_polar_cone: dimension mismatch");
  detail::require(k.is_cone(), "project_polar_cone: set is not a cone");
  Eigen::VectorXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const bool lo_finite = std::isfinite(k.lower()[i]);
    const bool hi_finite = std::isfinite(k.upper()[i]);
    if (lo_finite && hi_finite) {
      out[i] = z[i];  // K_i = {0}, polar is the whole line
    } else if (lo_finite) {
      out[i] = std::min(z[i], 0.0);  // K_i = [0, inf), polar (-inf, 0]
    } else if (hi_finite) {
      out[i] = std::max(z[i], 0.0);  // K_i = (-inf, 0], polar [0, inf)
    } else {
      out[i] = 0.0;  // K_i = R, polar {0}
    }
  }
  return out;
}

Vec project_polar_cone(const Vec& z, const BoxSet& k) {
  return Vec(project_polar_cone(z.values, k), z.weights);
}

}  // namespace qvi
