#include "codeagg/objective.hpp"

#include <cmath>

#include "codeagg/errors.hpp"

namespace codeagg {

namespace {

void check_config(const ObjectiveConfig& cfg) {
  if (!(cfg.lambda > 0.0)) {
    throw Error("invalid-config", "lambda must be positive");
  }
  if (!(cfg.tau >= 1.0)) {
    throw Error("invalid-config", "tau must be >= 1");
  }
}

}  // namespace

ObjectiveEval eval_objective(const Eigen::VectorXd& w, const PhiTensor& phi,
                             const ObjectiveConfig& cfg, bool want_hessian) {
  check_config(cfg);
  const int N = phi.num_examples();
  const int K = phi.num_classes();
  const int M = phi.num_classifiers();
  if (N == 0) throw Error("shape-error", "phi tensor is empty");
  if (w.size() != M) {
    throw Error("shape-error", "w has length " + std::to_string(w.size()) +
                                   ", expected M = " + std::to_string(M));
  }

  const double tau = cfg.tau;
  double data_value = 0.0;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(M);
  Eigen::MatrixXd hess;
  if (want_hessian) hess = Eigen::MatrixXd::Zero(M, M);

  Eigen::VectorXd xi(K);       // tau (shift + Psi_i w)
  Eigen::VectorXd softmax(K);  // exp(xi - max) / sum
  for (int i = 0; i < N; ++i) {
    const Eigen::MatrixXd& psi = phi.slice(i);
    xi.noalias() = psi * w;
    if (cfg.cost_augmented) {
      xi.array() += 1.0;
      xi(phi.label(i) - 1) -= 1.0;
    }
    xi *= tau;

    const double xmax = xi.maxCoeff();
    softmax = (xi.array() - xmax).exp();
    const double total = softmax.sum();
    softmax /= total;
    data_value += (xmax + std::log(total)) / tau;

    grad.noalias() += psi.transpose() * softmax;
    if (want_hessian) {
      const Eigen::VectorXd mean_phi = psi.transpose() * softmax;
      hess.noalias() += tau * (psi.transpose() * softmax.asDiagonal() * psi -
                               mean_phi * mean_phi.transpose());
    }
  }

  ObjectiveEval eval;
  eval.value = data_value / N + 0.5 * cfg.lambda * w.squaredNorm();
  eval.gradient = grad / N + cfg.lambda * w;
  if (want_hessian) {
    hess /= N;
    hess.diagonal().array() += cfg.lambda;
    eval.hessian = std::move(hess);
  }

  if (!std::isfinite(eval.value) || !eval.gradient.allFinite() ||
      (eval.hessian && !eval.hessian->allFinite())) {
    throw Error("numeric-overflow", "non-finite objective evaluation");
  }
  return eval;
}

double kl_total(const Eigen::VectorXd& w, const PhiTensor& phi) {
  const int N = phi.num_examples();
  if (N == 0) throw Error("shape-error", "phi tensor is empty");
  if (w.size() != phi.num_classifiers()) {
    throw Error("shape-error", "w length does not match M");
  }
  double total = 0.0;
  for (int i = 0; i < N; ++i) {
    const Eigen::VectorXd xi = phi.slice(i) * w;
    const double xmax = xi.maxCoeff();
    total += xmax + std::log((xi.array() - xmax).exp().sum());
  }
  if (!std::isfinite(total)) {
    throw Error("numeric-overflow", "non-finite KL evaluation");
  }
  return total;
}

}  // namespace codeagg
