// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace qvi {

/// Thrown when an operation is called with arguments violating its contract
/// (dimension mismatch, invalid parameter, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a callback produces a non-finite value; carries the index of
/// the first offending component.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, Eigen::Index component)
      : std::runtime_error(what), component_(component) {}
  Eigen::Index component() const noexcept { return component_; }

 private:
  Eigen::Index component_;
};

namespace detail {
inline void require(bool cond, const char* msg) {
  if (!cond) throw ContractViolation(msg);
}
}  // namespace detail

/// Throws EvaluationError naming the first non-finite entry of v.
void check_finite(const Eigen::VectorXd& v, const char* context);

/// Element of a weighted Euclidean space: entries paired with the strictly
/// positive quadrature weights of the discrete L2 inner product they live in.
struct Vec {
  Eigen::VectorXd values;
  Eigen::VectorXd weights;

  Vec() = default;
  Vec(Eigen::VectorXd v, Eigen::VectorXd w);

  Eigen::Index size() const { return values.size(); }

  /// Vector with all-ones weights.
  static Vec plain(Eigen::VectorXd v);
};

/// Weighted inner product sum_i w_i a_i b_i.
double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
             const Eigen::VectorXd& w);
double inner(const Vec& a, const Vec& b);

double norm(const Eigen::VectorXd& a, const Eigen::VectorXd& w);
double norm(const Vec& a);

}  // namespace qvi
