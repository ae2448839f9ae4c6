// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include "qvi/vec.hpp"

#include <cmath>

namespace qvi {

void check_finite(const Eigen::VectorXd& v, const char* context) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw EvaluationError(std::string(context) + ": non-finite value at component " +
                                std::to_string(i),
                            i);
    }
  }
}

Vec::Vec(Eigen::VectorXd v, Eigen::VectorXd w)
    : values(std::move(v)), weights(std::move(w)) {
  detail::require(values.size() == weights.size(), "Vec: entries/weights size mismatch");
  detail::require((weights.array() > 0.0).all(), "Vec: weights must be strictly positive");
  check_finite(values, "Vec");
}

Vec Vec::plain(Eigen::VectorXd v) {
  Eigen::VectorXd w = Eigen::VectorXd::Ones(v.size());
  return Vec(std::move(v), std::move(w));
}

double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
             const Eigen::VectorXd& w) {
  detail::require(a.size() == b.size() && a.size() == w.size(),
                  "inner: dimension mismatch");
  return (w.array() * a.array() * b.array()).sum();
}

double inner(const Vec& a, const Vec& b) {
  detail::require(a.size() == b.size(), "inner: dimension mismatch");
  detail::require(a.weights == b.weights, "inner: vectors from different spaces");
  return inner(a.values, b.values, a.weights);
}

double norm(const Eigen::VectorXd& a, const Eigen::VectorXd& w) {
  return std::sqrt(inner(a, a, w));
}

double norm(const Vec& a) { return norm(a.values, a.weights); }

}  // namespace qvi
