#ifndef CODEAGG_OBJECTIVE_HPP
#define CODEAGG_OBJECTIVE_HPP

#include <Eigen/Dense>
#include <optional>

#include "codeagg/discrepancy.hpp"

namespace codeagg {

// Configuration of the regularized log-sum-exp objective
//
//   f(w) = 1/(tau N) sum_i log sum_k exp{ tau (shift_ik + w' phi_i^{k,y_i}) }
//          + lambda/2 ||w||^2
//
// with shift_ik = 1 - delta(y_i, k) when cost_augmented, else 0. The plain
// objective f0 is tau = 1, cost_augmented = false. The 1/N factor is applied
// consistently to value, gradient and Hessian so the three are derivatives
// of one function.
struct ObjectiveConfig {
  double lambda = 1e-4;
  double tau = 1.0;
  bool cost_augmented = false;
};

struct ObjectiveEval {
  double value = 0.0;
  Eigen::VectorXd gradient;
  std::optional<Eigen::MatrixXd> hessian;
};

ObjectiveEval eval_objective(const Eigen::VectorXd& w, const PhiTensor& phi,
                             const ObjectiveConfig& cfg, bool want_hessian);

// Total KL divergence between the 1-of-K oracle and the softmax model:
// sum_i log sum_k exp{w' phi_i^{k,y_i}}. Equals N times the unregularized
// mean negative log-likelihood.
double kl_total(const Eigen::VectorXd& w, const PhiTensor& phi);

}  // namespace codeagg

#endif
