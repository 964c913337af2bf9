#include "codeagg/margin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "codeagg/errors.hpp"

namespace codeagg {

namespace {

// Scores (1 - delta(y_i, k)) + w' phi_i^{k, y_i} for one example; the hinge
// is their maximum and the margin is 1 minus the maximum over k != y_i.
Eigen::VectorXd hinge_scores(const Eigen::VectorXd& w, const PhiTensor& phi,
                             int example) {
  Eigen::VectorXd scores = phi.slice(example) * w;
  scores.array() += 1.0;
  scores(phi.label(example) - 1) -= 1.0;
  return scores;
}

}  // namespace

MarginReport hinge_and_margin(const Eigen::VectorXd& w, const PhiTensor& phi,
                              double lambda) {
  const int N = phi.num_examples();
  if (w.size() != phi.num_classifiers()) {
    throw Error("shape-error", "w length does not match M");
  }
  MarginReport report;
  report.margins.resize(N);
  report.hinge_values.resize(N);
  double hinge_sum = 0.0;
  for (int i = 0; i < N; ++i) {
    const Eigen::VectorXd projections = phi.slice(i) * w;  // w' phi_i^{k,y_i}
    const int yi = phi.label(i);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= phi.num_classes(); ++k) {
      if (k != yi) worst = std::max(worst, projections(k - 1));
    }
    // w' phi_i^{k,y_i} = rho(c_{y_i}) - rho(c_k), so the smallest wrong-class
    // rho difference is the negated maximum projection.
    report.margins(i) = -worst;
    report.hinge_values(i) = std::max(0.0, 1.0 + worst);
    hinge_sum += report.hinge_values(i);
  }
  report.objective = hinge_sum / N + 0.5 * lambda * w.squaredNorm();
  return report;
}

Eigen::VectorXd subgradient_solve(const PhiTensor& phi, double lambda,
                                  double step0, int iters) {
  if (!(lambda > 0.0)) throw Error("invalid-config", "lambda must be positive");
  const int N = phi.num_examples();
  const int M = phi.num_classifiers();

  Eigen::VectorXd w = Eigen::VectorXd::Constant(M, 1.0 / M);
  Eigen::VectorXd best_w = w;
  double best_value = hinge_and_margin(w, phi, lambda).objective;

  Eigen::VectorXd subgrad(M);
  for (int t = 1; t <= iters; ++t) {
    subgrad.setZero();
    for (int i = 0; i < N; ++i) {
      const Eigen::VectorXd scores = hinge_scores(w, phi, i);
      int argmax = 0;
      for (int k = 1; k < phi.num_classes(); ++k) {
        if (scores(k) > scores(argmax)) argmax = k;
      }
      subgrad += phi.slice(i).row(argmax).transpose();
    }
    subgrad /= N;
    subgrad += lambda * w;

    w -= (step0 / std::sqrt(static_cast<double>(t))) * subgrad;
    w = w.cwiseMax(0.0);

    const double value = hinge_and_margin(w, phi, lambda).objective;
    if (value < best_value) {
      best_value = value;
      best_w = w;
    }
  }
  return best_w;
}

const std::vector<double>& default_tau_schedule() {
  static const std::vector<double> schedule{1, 2, 4, 8, 16, 32, 64};
  return schedule;
}

TauAnnealReport tau_annealed_solve(const PhiTensor& phi, double lambda,
                                   const std::vector<double>& tau_schedule,
                                   const SolverOptions& opts,
                                   bool cost_augmented) {
  if (tau_schedule.empty() || tau_schedule.front() != 1.0) {
    throw Error("invalid-config", "tau schedule must start at 1");
  }
  if (!std::is_sorted(tau_schedule.begin(), tau_schedule.end())) {
    throw Error("invalid-config", "tau schedule must be increasing");
  }

  TauAnnealReport report;
  Eigen::VectorXd warm_w, warm_z;
  for (double tau : tau_schedule) {
    ObjectiveConfig cfg;
    cfg.lambda = lambda;
    cfg.tau = tau;
    cfg.cost_augmented = cost_augmented;
    SolveReport stage = warm_w.size() == 0
                            ? solve_objective(phi, cfg, opts)
                            : solve_objective(phi, cfg, opts, &warm_w, &warm_z);
    warm_w = stage.w_star;
    warm_z = stage.z_star;
    report.stages.push_back(std::move(stage));
  }
  report.w = warm_w;
  return report;
}

double sandwich_gap(const Eigen::VectorXd& w, const PhiTensor& phi, double tau) {
  if (!(tau >= 1.0)) throw Error("invalid-config", "tau must be >= 1");
  double worst_gap = 0.0;
  for (int i = 0; i < phi.num_examples(); ++i) {
    const Eigen::VectorXd scores = hinge_scores(w, phi, i);
    const double hinge = scores.maxCoeff();
    const double smoothed =
        hinge + std::log((tau * (scores.array() - hinge)).exp().sum()) / tau;
    worst_gap = std::max(worst_gap, smoothed - hinge);
  }
  return worst_gap;
}

BoundReport generalization_bound(const Eigen::VectorXd& w, const PhiTensor& phi,
                                 double B, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error("invalid-bound-parameter", "epsilon must lie in (0, 1)");
  }
  if (w.norm() > B * (1.0 + 1e-12)) {
    throw Error("invalid-bound-parameter", "||w||_2 exceeds the bound B");
  }
  const int N = phi.num_examples();

  const MarginReport margins = hinge_and_margin(w, phi, 0.0);
  double ramp_sum = 0.0;
  for (int i = 0; i < N; ++i) {
    ramp_sum += std::min(1.0, std::max(0.0, 1.0 - margins.margins(i)));
  }

  double norm_sum = 0.0;
  for (int i = 0; i < N; ++i) {
    const Eigen::MatrixXd& slice = phi.slice(i);
    const int yi = phi.label(i);
    double smallest = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= phi.num_classes(); ++k) {
      if (k == yi) continue;
      smallest = std::min(smallest, slice.row(k - 1).squaredNorm());
    }
    norm_sum += smallest;
  }

  BoundReport report;
  report.B = B;
  report.empirical_loss = ramp_sum / N;
  report.complexity_term = 2.0 * B / N * std::sqrt(norm_sum);
  report.confidence_term = std::sqrt(9.0 * std::log(2.0 / epsilon) / (2.0 * N));
  report.total = report.empirical_loss + report.complexity_term +
                 report.confidence_term;
  return report;
}

}  // namespace codeagg
