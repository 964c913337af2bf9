#include "codeagg/decode.hpp"

#include "codeagg/errors.hpp"

namespace codeagg {

ClassPosterior posterior(const Eigen::VectorXd& w, const CodeMatrix& code,
                         const Eigen::VectorXd& q, LossKind kind) {
  const int K = code.num_classes();
  Eigen::VectorXd discrepancies(K);
  for (int k = 1; k <= K; ++k) {
    discrepancies(k - 1) = rho(code, k, q, w, kind);
  }
  const double lowest = discrepancies.minCoeff();
  ClassPosterior p;
  p.probs = (-(discrepancies.array() - lowest)).exp();
  p.probs /= p.probs.sum();
  return p;
}

int predict(const ClassPosterior& p) {
  if (p.probs.size() == 0) {
    throw Error("shape-error", "empty posterior");
  }
  int best = 1;
  for (Eigen::Index k = 1; k < p.probs.size(); ++k) {
    if (p.probs(k) > p.probs(best - 1)) best = static_cast<int>(k) + 1;
  }
  return best;
}

ClassPosterior loss_based_posterior(const CodeMatrix& code,
                                    const Eigen::VectorXd& q) {
  const Eigen::VectorXd uniform =
      Eigen::VectorXd::Constant(code.num_classifiers(),
                                1.0 / code.num_classifiers());
  return posterior(uniform, code, q, LossKind::Exponential);
}

EvalMetrics metrics(const std::vector<int>& true_labels,
                    const std::vector<ClassPosterior>& posteriors) {
  if (true_labels.size() != posteriors.size() || posteriors.empty()) {
    throw Error("shape-error", "labels and posteriors must align and be nonempty");
  }
  const int K = static_cast<int>(posteriors.front().probs.size());
  const int N = static_cast<int>(posteriors.size());

  EvalMetrics out;
  out.confusion = Eigen::MatrixXi::Zero(K, K);
  double brier = 0.0;
  int correct = 0;
  for (int i = 0; i < N; ++i) {
    const int yi = true_labels[i];
    if (yi < 1 || yi > K) {
      throw Error("invalid-label",
                  "label " + std::to_string(yi) + " out of range 1..K");
    }
    if (posteriors[i].probs.size() != K) {
      throw Error("shape-error", "posterior length mismatch");
    }
    const int pred = predict(posteriors[i]);
    out.confusion(yi - 1, pred - 1) += 1;
    correct += pred == yi;

    Eigen::VectorXd target = Eigen::VectorXd::Zero(K);
    target(yi - 1) = 1.0;
    brier += (target - posteriors[i].probs).squaredNorm();
  }
  out.accuracy = static_cast<double>(correct) / N;
  out.mse = brier / N;
  return out;
}

}  // namespace codeagg
