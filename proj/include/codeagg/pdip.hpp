#ifndef CODEAGG_PDIP_HPP
#define CODEAGG_PDIP_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "codeagg/objective.hpp"

namespace codeagg {

struct SolverOptions {
  double alpha = 0.01;     // sufficient-decrease constant, in (0, 0.5)
  double beta = 0.5;       // backtracking shrink factor, in (0, 1)
  double s_min = 0.5;      // step threshold for the barrier update
  double eps_fea = 1e-4;   // residual tolerance
  double eps_gap = 1e-4;   // surrogate duality-gap tolerance
  int max_iters = 200;
  double pcg_tol = 1e-10;  // relative residual target for PCG
  int pcg_max = 0;         // 0 means 10 * M
};

// Primal-dual iterate. w stays strictly positive, z nonnegative.
struct SolverState {
  Eigen::VectorXd w;
  Eigen::VectorXd z;
  double mu = 0.0;
  double residual_norm = 0.0;
  double gap = 0.0;  // surrogate duality gap z'w
  int iter = 0;
};

struct SolveReport {
  Eigen::VectorXd w_star;
  Eigen::VectorXd z_star;
  int iterations = 0;
  double final_residual = 0.0;
  double final_gap = 0.0;
  std::vector<double> objective_trace;  // objective at the initial point and
                                        // at every accepted iterate
  bool converged = false;
  std::string failure;  // empty, "line-search-failure" or "max-iterations"
};

// Perturbed-KKT residual: top block grad - z, bottom block z.*w - mu.
struct Residual {
  Eigen::VectorXd vec;  // stacked 2M entries
  double norm = 0.0;
};

Residual residual(const Eigen::VectorXd& w, const Eigen::VectorXd& z,
                  double mu, const Eigen::VectorXd& gradient);

struct PcgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  bool converged = false;
  double relative_residual = 0.0;
};

// Conjugate gradient with Jacobi (diagonal) preconditioning; the
// preconditioner is taken from the diagonal of the system matrix itself.
PcgResult pcg_solve(const Eigen::MatrixXd& system, const Eigen::VectorXd& rhs,
                    double tol, int max_iters);

struct NewtonStep {
  Eigen::VectorXd dw;
  Eigen::VectorXd dz;
  int pcg_iterations = 0;
  bool used_dense_fallback = false;
};

// Reduced Newton system (H + diag(z./w)) dw = -(grad - mu ./ w) solved by
// PCG, with a dense factorization fallback; dz recovered by elimination.
NewtonStep newton_step(const Eigen::VectorXd& w, const Eigen::VectorXd& z,
                       double mu, const ObjectiveEval& eval,
                       const SolverOptions& opts);

// Largest s in (0, 1] keeping z + s*dz >= 0.
double max_dual_step(const Eigen::VectorXd& z, const Eigen::VectorXd& dz);

using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LineSearchResult {
  double step = 0.0;
  bool success = false;
  Residual accepted;  // residual at the accepted trial point
};

// Backtracking from s = 0.99 * s_max, shrinking by beta until the trial
// keeps w strictly positive and the residual norm drops by the (1 - alpha s)
// factor. current_residual_norm < 0 means "recompute it here".
LineSearchResult line_search(const Eigen::VectorXd& w, const Eigen::VectorXd& z,
                             const Eigen::VectorXd& dw, const Eigen::VectorXd& dz,
                             double mu, const SolverOptions& opts,
                             const GradientFn& gradient_at,
                             double current_residual_norm = -1.0);

// Adaptive barrier update: gap / (2M) after a sufficiently long step, else
// unchanged.
double update_mu(double gap, double step, int m, double mu,
                 const SolverOptions& opts);

// Minimize the configured objective over the nonnegative orthant. Starts
// from w = 1/M and z = 1 (or the supplied warm start; passing the previous
// solve's w_star/z_star keeps the start near the central path), with
// mu = w'z / (2M); stops once the residual norm and the surrogate gap are
// both under tolerance.
SolveReport solve_objective(const PhiTensor& phi, const ObjectiveConfig& cfg,
                            const SolverOptions& opts = {},
                            const Eigen::VectorXd* warm_start_w = nullptr,
                            const Eigen::VectorXd* warm_start_z = nullptr);

// Plain aggregation program: f0 with the given regularization strength.
SolveReport solve(const PhiTensor& phi, double lambda,
                  const SolverOptions& opts = {});

}  // namespace codeagg

#endif
