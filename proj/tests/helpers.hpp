#ifndef CODEAGG_TEST_HELPERS_HPP
#define CODEAGG_TEST_HELPERS_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "codeagg/discrepancy.hpp"
#include "codeagg/encoding.hpp"
#include "codeagg/errors.hpp"
#include "codeagg/rng.hpp"

namespace codeagg::test {

// True iff fn() throws a codeagg::Error carrying the given code.
template <typename Fn>
bool throws_code(Fn&& fn, const std::string& code) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  } catch (...) {
    return false;
  }
  return false;
}

// Synthetic phi tensor with Gaussian entries and the true-class row zeroed;
// exercises the objective/solver math without a code-matrix pipeline.
inline PhiTensor random_phi(Rng& rng, int n, int k, int m, double scale = 1.0) {
  std::vector<Eigen::MatrixXd> slices;
  std::vector<int> labels;
  slices.reserve(n);
  labels.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd slice(k, m);
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < m; ++c) slice(r, c) = scale * rng.normal();
    }
    const int label = static_cast<int>(rng.below(k)) + 1;
    slice.row(label - 1).setZero();
    labels.push_back(label);
    slices.push_back(std::move(slice));
  }
  return PhiTensor(k, m, std::move(slices), std::move(labels));
}

// Random probability estimates over a real code matrix, with labels.
struct PipelineInstance {
  CodeMatrix code;
  ProbMatrix q;
  std::vector<int> labels;
};

inline PipelineInstance random_pipeline(Rng& rng, const CodeMatrix& code, int n,
                                        double lo = 0.05, double hi = 0.95) {
  Eigen::MatrixXd q(n, code.num_classifiers());
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    labels[i] = static_cast<int>(rng.below(code.num_classes())) + 1;
    for (int j = 0; j < code.num_classifiers(); ++j) {
      q(i, j) = rng.uniform(lo, hi);
    }
  }
  return PipelineInstance{code, ProbMatrix(std::move(q)), std::move(labels)};
}

inline Eigen::VectorXd random_nonneg_weights(Rng& rng, int m, double hi = 3.0) {
  Eigen::VectorXd w(m);
  for (int j = 0; j < m; ++j) w(j) = rng.uniform(0.0, hi);
  return w;
}

// Central finite differences of a scalar function.
inline Eigen::VectorXd fd_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& w, double h = 1e-5) {
  Eigen::VectorXd grad(w.size());
  Eigen::VectorXd probe = w;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    probe(j) = w(j) + h;
    const double above = f(probe);
    probe(j) = w(j) - h;
    const double below = f(probe);
    probe(j) = w(j);
    grad(j) = (above - below) / (2.0 * h);
  }
  return grad;
}

// Central finite differences of a vector-valued gradient.
inline Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g,
    const Eigen::VectorXd& w, double h = 1e-5) {
  Eigen::MatrixXd jac(w.size(), w.size());
  Eigen::VectorXd probe = w;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    probe(j) = w(j) + h;
    const Eigen::VectorXd above = g(probe);
    probe(j) = w(j) - h;
    const Eigen::VectorXd below = g(probe);
    probe(j) = w(j);
    jac.col(j) = (above - below) / (2.0 * h);
  }
  return jac;
}

inline Eigen::MatrixXd random_spd(Rng& rng, int m, double ridge = 0.5) {
  Eigen::MatrixXd b(m, m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) b(r, c) = rng.normal();
  }
  Eigen::MatrixXd a = b * b.transpose();
  a.diagonal().array() += ridge * m;
  return a;
}

}  // namespace codeagg::test

#endif
