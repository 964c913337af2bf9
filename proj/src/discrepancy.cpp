#include "codeagg/discrepancy.hpp"

#include <algorithm>
#include <cmath>

#include "codeagg/errors.hpp"

namespace codeagg {

std::string to_string(LossKind kind) {
  return kind == LossKind::CrossEntropy ? "xent" : "exp";
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "xent") return LossKind::CrossEntropy;
  if (name == "exp") return LossKind::Exponential;
  throw Error("invalid-loss", "unknown loss kind '" + name + "'");
}

double clip_probability(double q) {
  return std::clamp(q, kProbEps, 1.0 - kProbEps);
}

double loss(CodeEntry entry, double q, LossKind kind) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error("invalid-probability",
                "probability " + std::to_string(q) + " outside [0, 1]");
  }
  q = clip_probability(q);
  if (kind == LossKind::CrossEntropy) {
    switch (entry) {
      case CodeEntry::Pos: return -std::log(q);
      case CodeEntry::Neg: return -std::log(1.0 - q);
      case CodeEntry::DontCare: return 0.0;
    }
  } else {
    switch (entry) {
      case CodeEntry::Pos: return std::exp(-(q - 0.5));
      case CodeEntry::Neg: return std::exp(q - 0.5);
      case CodeEntry::DontCare: return 1.0;
    }
  }
  throw Error("invalid-entry", "unknown code entry value");
}

ProbMatrix::ProbMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  for (Eigen::Index i = 0; i < values_.rows(); ++i) {
    for (Eigen::Index j = 0; j < values_.cols(); ++j) {
      const double q = values_(i, j);
      if (!(q >= 0.0 && q <= 1.0)) {
        throw Error("invalid-probability",
                    "Q(" + std::to_string(i) + "," + std::to_string(j) +
                        ") = " + std::to_string(q) + " outside [0, 1]");
      }
      values_(i, j) = clip_probability(q);
    }
  }
}

double rho(const CodeMatrix& code, int label, const Eigen::VectorXd& q,
           const Eigen::VectorXd& w, LossKind kind) {
  const int M = code.num_classifiers();
  if (q.size() != M || w.size() != M) {
    throw Error("shape-error", "q and w must have length M");
  }
  if (label < 1 || label > code.num_classes()) {
    throw Error("invalid-label", "label out of range 1..K");
  }
  if ((w.array() < 0.0).any()) {
    throw Error("invalid-weights", "aggregation weights must be nonnegative");
  }
  double acc = 0.0;
  for (int j = 0; j < M; ++j) {
    acc += w(j) * loss(code.at(j, label), q(j), kind);
  }
  return acc;
}

PhiTensor::PhiTensor(int num_classes, int num_classifiers,
                     std::vector<Eigen::MatrixXd> slices,
                     std::vector<int> labels)
    : num_classes_(num_classes),
      num_classifiers_(num_classifiers),
      slices_(std::move(slices)),
      labels_(std::move(labels)) {
  if (slices_.size() != labels_.size()) {
    throw Error("shape-error", "one label per example required");
  }
  for (std::size_t i = 0; i < slices_.size(); ++i) {
    if (slices_[i].rows() != num_classes_ || slices_[i].cols() != num_classifiers_) {
      throw Error("shape-error", "slice " + std::to_string(i) + " is not K x M");
    }
    if (labels_[i] < 1 || labels_[i] > num_classes_) {
      throw Error("invalid-label", "label out of range 1..K");
    }
    if (!slices_[i].row(labels_[i] - 1).isZero(0.0)) {
      throw Error("invalid-phi", "true-class row of slice " + std::to_string(i) +
                                     " must be identically zero");
    }
  }
}

PhiTensor compute_phi(const CodeMatrix& code, const ProbMatrix& q,
                      const std::vector<int>& labels, LossKind kind) {
  const int N = q.num_examples();
  const int M = code.num_classifiers();
  const int K = code.num_classes();
  if (q.num_classifiers() != M) {
    throw Error("shape-error", "Q has " + std::to_string(q.num_classifiers()) +
                                   " columns, code matrix has M = " +
                                   std::to_string(M));
  }
  if (static_cast<int>(labels.size()) != N) {
    throw Error("shape-error", "label count does not match Q rows");
  }

  std::vector<Eigen::MatrixXd> slices;
  slices.reserve(N);
  Eigen::MatrixXd losses(K, M);  // per-example d(C[l,k], Q[l,i]) scratch
  for (int i = 0; i < N; ++i) {
    const int yi = labels[i];
    if (yi < 1 || yi > K) {
      throw Error("invalid-label",
                  "label " + std::to_string(yi) + " out of range 1..K");
    }
    for (int l = 0; l < M; ++l) {
      const double qi = q.at(i, l);
      for (int k = 1; k <= K; ++k) {
        losses(k - 1, l) = loss(code.at(l, k), qi, kind);
      }
    }
    Eigen::MatrixXd slice(K, M);
    const Eigen::RowVectorXd true_row = losses.row(yi - 1);
    for (int k = 0; k < K; ++k) {
      slice.row(k) = true_row - losses.row(k);
    }
    slice.row(yi - 1).setZero();
    slices.push_back(std::move(slice));
  }
  return PhiTensor(K, M, std::move(slices), labels);
}

Eigen::VectorXd phi_pair(const CodeMatrix& code, const Eigen::VectorXd& q,
                         int label_j, int label_k, LossKind kind) {
  const int M = code.num_classifiers();
  const int K = code.num_classes();
  if (q.size() != M) {
    throw Error("shape-error", "q must have length M");
  }
  if (label_j < 1 || label_j > K || label_k < 1 || label_k > K) {
    throw Error("invalid-label", "label out of range 1..K");
  }
  Eigen::VectorXd out(M);
  for (int l = 0; l < M; ++l) {
    out(l) = loss(code.at(l, label_k), q(l), kind) -
             loss(code.at(l, label_j), q(l), kind);
  }
  return out;
}

}  // namespace codeagg
