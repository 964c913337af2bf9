#ifndef CODEAGG_BASE_HPP
#define CODEAGG_BASE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "codeagg/discrepancy.hpp"
#include "codeagg/encoding.hpp"

namespace codeagg {

struct Dataset {
  Eigen::MatrixXd features;  // N x D
  std::vector<int> labels;   // 1..K
  int num_classes = 0;
};

// Throws unless features are finite, labels lie in 1..K and every class
// occurs at least once.
void validate_dataset(const Dataset& data);

// L2-regularized logistic binary classifier; the intercept is not
// penalized.
struct BinaryModel {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  double reg = 0.0;

  double prob(const Eigen::VectorXd& x) const;
};

struct BinaryTraining {
  std::vector<BinaryModel> models;  // one per code-matrix row
  ProbMatrix q;                     // held-in probabilities, N x M
};

// Fits one binary problem per code-matrix row by deterministic Newton
// iteration (to gradient norm 1e-8). Row j trains on the examples whose
// class has a defined entry in row j; DontCare examples are excluded from
// the fit but still scored into Q. The seed is accepted for interface
// stability; the fit itself is deterministic.
BinaryTraining train_binary_problems(const Dataset& data, const CodeMatrix& code,
                                     double reg, std::uint64_t seed = 0);

// Probabilities of every trained model on a feature matrix (rows are
// examples).
ProbMatrix binary_probabilities(const std::vector<BinaryModel>& models,
                                const Eigen::MatrixXd& features);

// Reads a Q matrix from CSV (one row per example, M columns, optional
// header). Values must lie in [0, 1]; they are stored clipped to the open
// interval. expected_m > 0 enforces the column count.
ProbMatrix ingest_q(std::istream& in, int expected_m);
ProbMatrix ingest_q_file(const std::string& path, int expected_m);

}  // namespace codeagg

#endif
