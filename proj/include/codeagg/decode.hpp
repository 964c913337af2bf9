#ifndef CODEAGG_DECODE_HPP
#define CODEAGG_DECODE_HPP

#include <Eigen/Dense>
#include <vector>

#include "codeagg/discrepancy.hpp"

namespace codeagg {

// Class membership probabilities for one example; entries sum to 1.
struct ClassPosterior {
  Eigen::VectorXd probs;
};

// Softmax over negative discrepancies: p_k proportional to exp(-rho(c_k)).
// Computed with max-subtraction, so the argmax of the posterior always
// equals the argmin of rho.
ClassPosterior posterior(const Eigen::VectorXd& w, const CodeMatrix& code,
                         const Eigen::VectorXd& q, LossKind kind);

// 1-based label with the largest posterior; ties go to the lowest label.
int predict(const ClassPosterior& p);

// Classic loss-based decoding as a special case: uniform weights 1/M with
// the exponential loss.
ClassPosterior loss_based_posterior(const CodeMatrix& code,
                                    const Eigen::VectorXd& q);

struct EvalMetrics {
  double accuracy = 0.0;
  double mse = 0.0;               // mean Brier score
  Eigen::MatrixXi confusion;      // rows = true label, cols = predicted
};

EvalMetrics metrics(const std::vector<int>& true_labels,
                    const std::vector<ClassPosterior>& posteriors);

}  // namespace codeagg

#endif
