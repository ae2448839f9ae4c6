// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include "qvi/problems.hpp"

namespace qvi {

QviProblem qvi_from_vi(
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f,
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
        f_prime_apply,
    BoxSet c, Eigen::VectorXd x_weights) {
  detail::require(c.dim() == x_weights.size(), "qvi_from_vi: dimension mismatch");
  QviProblem p;
  p.n = c.dim();
  p.m = 0;
  p.set_C = std::move(c);
  p.set_K = BoxSet::whole_space(0);
  p.x_weights = std::move(x_weights);
  p.h_weights = Eigen::VectorXd(0);
  p.eval_F = std::move(f);
  p.apply_Fprime = std::move(f_prime_apply);
  auto empty_g = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
    return Eigen::VectorXd(0);
  };
  p.eval_G = empty_g;
  auto empty_dir = [](const Eigen::VectorXd&, const Eigen::VectorXd&,
                      const Eigen::VectorXd&) { return Eigen::VectorXd(0); };
  p.apply_DyG = empty_dir;
  p.apply_DxG = empty_dir;
  p.apply_DyG_adj = [n = p.n](const Eigen::VectorXd&, const Eigen::VectorXd&,
                              const Eigen::VectorXd&) {
    return Eigen::VectorXd::Zero(n).eval();
  };
  return p;
}

}  // namespace qvi
