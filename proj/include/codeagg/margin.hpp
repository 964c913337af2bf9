#ifndef CODEAGG_MARGIN_HPP
#define CODEAGG_MARGIN_HPP

#include <Eigen/Dense>
#include <vector>

#include "codeagg/pdip.hpp"

namespace codeagg {

// Margins, multiclass hinge values and the large-margin objective f_LM.
// margin_i = min_{k != y_i} rho(c_k) - rho(c_{y_i}); the example is
// classified correctly iff the margin is positive, and
// hinge_i = max(0, 1 - margin_i).
struct MarginReport {
  Eigen::VectorXd margins;
  Eigen::VectorXd hinge_values;
  double objective = 0.0;  // mean hinge + (lambda/2) ||w||^2
};

MarginReport hinge_and_margin(const Eigen::VectorXd& w, const PhiTensor& phi,
                              double lambda);

// Projected subgradient descent on f_LM with diminishing steps
// step0 / sqrt(t); returns the best-objective iterate. Hinge argmax ties
// break to the lowest class index.
Eigen::VectorXd subgradient_solve(const PhiTensor& phi, double lambda,
                                  double step0 = 1.0, int iters = 5000);

struct TauAnnealReport {
  Eigen::VectorXd w;
  std::vector<SolveReport> stages;  // one interior-point report per tau
};

// Powers of two from 1 to 64.
const std::vector<double>& default_tau_schedule();

// Successive interior-point solves of f_tau along an increasing tau
// schedule, each stage warm-started from the previous optimum (primal and
// dual). The schedule must start at tau = 1.
TauAnnealReport tau_annealed_solve(
    const PhiTensor& phi, double lambda,
    const std::vector<double>& tau_schedule = default_tau_schedule(),
    const SolverOptions& opts = {}, bool cost_augmented = true);

// Largest per-example gap between the tau-smoothed hinge l_tau and the
// hinge h. Lies in [0, log K / tau].
double sandwich_gap(const Eigen::VectorXd& w, const PhiTensor& phi, double tau);

// Data-dependent generalization bound: empirical ramp loss, a Rademacher
// complexity term from the phi feature norms, and a confidence term.
struct BoundReport {
  double B = 0.0;
  double empirical_loss = 0.0;
  double complexity_term = 0.0;
  double confidence_term = 0.0;
  double total = 0.0;
};

BoundReport generalization_bound(const Eigen::VectorXd& w, const PhiTensor& phi,
                                 double B, double epsilon);

}  // namespace codeagg

#endif
