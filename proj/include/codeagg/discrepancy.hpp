#ifndef CODEAGG_DISCREPANCY_HPP
#define CODEAGG_DISCREPANCY_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "codeagg/encoding.hpp"

namespace codeagg {

// Probabilities are clipped into [kProbEps, 1 - kProbEps] before any log.
inline constexpr double kProbEps = 1e-12;

enum class LossKind { CrossEntropy, Exponential };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

double clip_probability(double q);

// Per-classifier loss d(C, q) between a code entry and a probability
// estimate.
//   CrossEntropy: Pos -> -log q, Neg -> -log(1-q), DontCare -> 0
//   Exponential:  Pos -> exp(-(q-1/2)), Neg -> exp(q-1/2), DontCare -> 1
// The exponential DontCare value is 1, not 0: the signed code value is 0
// there and exp(0) = 1.
double loss(CodeEntry entry, double q, LossKind kind);

// N x M matrix of binary probability estimates, one row per example.
// Values must lie in [0, 1] on input and are stored clipped to the open
// interval.
class ProbMatrix {
 public:
  explicit ProbMatrix(Eigen::MatrixXd values);

  int num_examples() const { return static_cast<int>(values_.rows()); }
  int num_classifiers() const { return static_cast<int>(values_.cols()); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  double at(int example, int classifier) const {
    return values_(example, classifier);
  }
  Eigen::VectorXd example(int i) const { return values_.row(i).transpose(); }

 private:
  Eigen::MatrixXd values_;
};

// Weighted discrepancy between the codeword of `label` and the probability
// estimates q: rho = sum_j w_j * loss(C[j, label], q_j).
double rho(const CodeMatrix& code, int label, const Eigen::VectorXd& q,
           const Eigen::VectorXd& w, LossKind kind);

// Discrepancy-difference features. slice(i) is the K x M matrix whose row k
// holds phi_i^{k, y_i}: entry l = d(C[l, y_i], Q[l, i]) - d(C[l, k], Q[l, i]).
// The row at k = y_i is identically zero.
class PhiTensor {
 public:
  PhiTensor(int num_classes, int num_classifiers,
            std::vector<Eigen::MatrixXd> slices, std::vector<int> labels);

  int num_examples() const { return static_cast<int>(slices_.size()); }
  int num_classes() const noexcept { return num_classes_; }
  int num_classifiers() const noexcept { return num_classifiers_; }
  const Eigen::MatrixXd& slice(int example) const { return slices_[example]; }
  int label(int example) const { return labels_[example]; }
  const std::vector<int>& labels() const noexcept { return labels_; }

 private:
  int num_classes_;
  int num_classifiers_;
  std::vector<Eigen::MatrixXd> slices_;
  std::vector<int> labels_;
};

PhiTensor compute_phi(const CodeMatrix& code, const ProbMatrix& q,
                      const std::vector<int>& labels, LossKind kind);

// General difference vector phi_i^{j,k} (entry l = d(C[l,k],.) - d(C[l,j],.))
// for one example's probability estimates; exposed as a derived computation.
Eigen::VectorXd phi_pair(const CodeMatrix& code, const Eigen::VectorXd& q,
                         int label_j, int label_k, LossKind kind);

}  // namespace codeagg

#endif
