#include "codeagg/base.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "codeagg/errors.hpp"
#include "codeagg/io.hpp"

namespace codeagg {

void validate_dataset(const Dataset& data) {
  const int N = static_cast<int>(data.features.rows());
  if (data.num_classes < 2) {
    throw Error("invalid-class-count", "dataset needs at least 2 classes");
  }
  if (static_cast<int>(data.labels.size()) != N || N == 0) {
    throw Error("shape-error", "feature rows and labels must align");
  }
  if (!data.features.allFinite()) {
    throw Error("invalid-feature", "non-finite feature value");
  }
  std::vector<bool> seen(data.num_classes, false);
  for (int label : data.labels) {
    if (label < 1 || label > data.num_classes) {
      throw Error("invalid-label",
                  "label " + std::to_string(label) + " out of range 1..K");
    }
    seen[label - 1] = true;
  }
  for (int k = 0; k < data.num_classes; ++k) {
    if (!seen[k]) {
      throw Error("invalid-label",
                  "class " + std::to_string(k + 1) + " has no examples");
    }
  }
}

double BinaryModel::prob(const Eigen::VectorXd& x) const {
  const double t = coefficients.dot(x) + intercept;
  // Evaluate the stable branch to avoid exp overflow either way.
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

namespace {

// Newton fit of l2-penalized logistic regression on +-1 targets:
//   minimize (1/n) sum log(1 + exp(-t_i (theta'x_i + b))) + (reg/2)||theta||^2
BinaryModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& targets,
                         double reg) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());

  Eigen::VectorXd params = Eigen::VectorXd::Zero(d + 1);  // [theta; b]
  Eigen::MatrixXd xext(n, d + 1);
  xext.leftCols(d) = x;
  xext.col(d).setOnes();

  const auto objective = [&](const Eigen::VectorXd& p) {
    const Eigen::VectorXd margins = targets.cwiseProduct(xext * p);
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
      const double mi = margins(i);
      // log(1 + exp(-m)) without overflow
      value += mi > 0.0 ? std::log1p(std::exp(-mi)) : -mi + std::log1p(std::exp(mi));
    }
    return value / n + 0.5 * reg * p.head(d).squaredNorm();
  };

  for (int iter = 0; iter < 100; ++iter) {
    const Eigen::VectorXd scores = xext * params;
    Eigen::VectorXd sigma(n);  // sigmoid(-t_i score_i)
    for (int i = 0; i < n; ++i) {
      const double m = targets(i) * scores(i);
      sigma(i) = m >= 0.0 ? std::exp(-m) / (1.0 + std::exp(-m))
                          : 1.0 / (1.0 + std::exp(m));
    }
    Eigen::VectorXd grad = -(xext.transpose() * targets.cwiseProduct(sigma)) / n;
    grad.head(d) += reg * params.head(d);
    if (grad.norm() <= 1e-8) break;

    const Eigen::VectorXd weights = sigma.array() * (1.0 - sigma.array());
    Eigen::MatrixXd hess =
        xext.transpose() * weights.asDiagonal() * xext / n;
    hess.diagonal().head(d).array() += reg;
    hess.diagonal().array() += 1e-12;  // keep factorizable when separable

    const Eigen::VectorXd direction = hess.ldlt().solve(-grad);
    double step = 1.0;
    const double f0 = objective(params);
    const double slope = grad.dot(direction);
    while (step > 1e-12 &&
           objective(params + step * direction) > f0 + 1e-4 * step * slope) {
      step *= 0.5;
    }
    params += step * direction;
  }

  BinaryModel model;
  model.coefficients = params.head(d);
  model.intercept = params(d);
  model.reg = reg;
  return model;
}

}  // namespace

BinaryTraining train_binary_problems(const Dataset& data, const CodeMatrix& code,
                                     double reg, std::uint64_t /*seed*/) {
  // Local preconditions only; a class absent from the data surfaces below as
  // a degenerate binary problem on the rows that need it.
  if (data.features.rows() == 0 ||
      data.features.rows() != static_cast<Eigen::Index>(data.labels.size())) {
    throw Error("shape-error", "feature rows and labels must align");
  }
  if (!data.features.allFinite()) {
    throw Error("invalid-feature", "non-finite feature value");
  }
  for (int label : data.labels) {
    if (label < 1 || label > data.num_classes) {
      throw Error("invalid-label",
                  "label " + std::to_string(label) + " out of range 1..K");
    }
  }
  if (!(reg > 0.0)) throw Error("invalid-config", "reg must be positive");
  if (code.num_classes() != data.num_classes) {
    throw Error("shape-error", "code matrix K does not match dataset classes");
  }

  const int N = static_cast<int>(data.features.rows());
  const int M = code.num_classifiers();

  std::vector<BinaryModel> models;
  models.reserve(M);
  for (int j = 0; j < M; ++j) {
    std::vector<int> rows;
    std::vector<double> targets;
    bool has_pos = false, has_neg = false;
    for (int i = 0; i < N; ++i) {
      const CodeEntry e = code.at(j, data.labels[i]);
      if (e == CodeEntry::DontCare) continue;
      rows.push_back(i);
      const bool positive = e == CodeEntry::Pos;
      targets.push_back(positive ? 1.0 : -1.0);
      has_pos |= positive;
      has_neg |= !positive;
    }
    if (!has_pos || !has_neg) {
      throw Error("degenerate-binary-problem",
                  "row " + std::to_string(j) + " has a single-class subset");
    }
    Eigen::MatrixXd sub(rows.size(), data.features.cols());
    Eigen::VectorXd t(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      sub.row(r) = data.features.row(rows[r]);
      t(r) = targets[r];
    }
    models.push_back(fit_logistic(sub, t, reg));
  }

  return BinaryTraining{models, binary_probabilities(models, data.features)};
}

ProbMatrix binary_probabilities(const std::vector<BinaryModel>& models,
                                const Eigen::MatrixXd& features) {
  const int N = static_cast<int>(features.rows());
  const int M = static_cast<int>(models.size());
  Eigen::MatrixXd q(N, M);
  for (int j = 0; j < M; ++j) {
    for (int i = 0; i < N; ++i) {
      q(i, j) = models[j].prob(features.row(i).transpose());
    }
  }
  return ProbMatrix(std::move(q));
}

ProbMatrix ingest_q(std::istream& in, int expected_m) {
  const std::vector<std::vector<double>> rows = parse_numeric_csv(in);
  if (rows.empty()) throw Error("parse-failure", "empty Q matrix");
  const int m = static_cast<int>(rows.front().size());
  if (expected_m > 0 && m != expected_m) {
    throw Error("dimension-mismatch",
                "Q has " + std::to_string(m) + " columns, expected " +
                    std::to_string(expected_m));
  }
  Eigen::MatrixXd values(rows.size(), m);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != m) {
      throw Error("parse-failure",
                  "row " + std::to_string(i + 1) + " has a ragged column count");
    }
    for (int j = 0; j < m; ++j) values(i, j) = rows[i][j];
  }
  return ProbMatrix(std::move(values));  // range-checks and clips
}

ProbMatrix ingest_q_file(const std::string& path, int expected_m) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot open '" + path + "'");
  return ingest_q(in, expected_m);
}

}  // namespace codeagg
