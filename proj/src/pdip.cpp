#include "codeagg/pdip.hpp"

#include <algorithm>
#include <cmath>

#include "codeagg/errors.hpp"

namespace codeagg {

namespace {

constexpr double kStepFloor = 1e-12;

void check_options(const SolverOptions& opts) {
  if (!(opts.alpha > 0.0 && opts.alpha < 0.5) ||
      !(opts.beta > 0.0 && opts.beta < 1.0) || !(opts.eps_fea > 0.0) ||
      !(opts.eps_gap > 0.0) || !(opts.pcg_tol > 0.0) || opts.max_iters < 1) {
    throw Error("invalid-config", "solver options out of range");
  }
}

}  // namespace

Residual residual(const Eigen::VectorXd& w, const Eigen::VectorXd& z,
                  double mu, const Eigen::VectorXd& gradient) {
  const Eigen::Index m = w.size();
  if (z.size() != m || gradient.size() != m) {
    throw Error("shape-error", "residual blocks must share length M");
  }
  Residual r;
  r.vec.resize(2 * m);
  r.vec.head(m) = gradient - z;
  r.vec.tail(m) = z.cwiseProduct(w).array() - mu;
  r.norm = r.vec.norm();
  return r;
}

PcgResult pcg_solve(const Eigen::MatrixXd& system, const Eigen::VectorXd& rhs,
                    double tol, int max_iters) {
  const Eigen::Index m = rhs.size();
  PcgResult res;
  res.x = Eigen::VectorXd::Zero(m);

  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    res.converged = true;
    return res;
  }

  const Eigen::VectorXd inv_diag = system.diagonal().cwiseInverse();
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd d = inv_diag.cwiseProduct(r);
  double delta = r.dot(d);
  Eigen::VectorXd q(m);

  for (int it = 0; it < max_iters; ++it) {
    q.noalias() = system * d;
    const double dq = d.dot(q);
    if (dq <= 0.0) break;  // lost positive definiteness numerically
    const double step = delta / dq;
    res.x += step * d;
    r -= step * q;
    res.iterations = it + 1;
    if (r.norm() <= tol * rhs_norm) {
      res.converged = true;
      break;
    }
    const Eigen::VectorXd s = inv_diag.cwiseProduct(r);
    const double delta_new = r.dot(s);
    d = s + (delta_new / delta) * d;
    delta = delta_new;
  }
  res.relative_residual = r.norm() / rhs_norm;
  if (res.relative_residual <= tol) res.converged = true;
  return res;
}

NewtonStep newton_step(const Eigen::VectorXd& w, const Eigen::VectorXd& z,
                       double mu, const ObjectiveEval& eval,
                       const SolverOptions& opts) {
  const Eigen::Index m = w.size();
  if (!eval.hessian) {
    throw Error("invalid-config", "newton_step needs a Hessian evaluation");
  }
  if ((w.array() <= 0.0).any()) {
    throw Error("solver-breakdown", "primal iterate left the interior");
  }

  Eigen::MatrixXd system = *eval.hessian;
  system.diagonal() += z.cwiseQuotient(w);
  const Eigen::VectorXd g = eval.gradient - mu * w.cwiseInverse();

  const int pcg_cap = opts.pcg_max > 0 ? opts.pcg_max : 10 * static_cast<int>(m);
  PcgResult pcg = pcg_solve(system, -g, opts.pcg_tol, pcg_cap);

  NewtonStep step;
  step.pcg_iterations = pcg.iterations;
  if (pcg.converged) {
    step.dw = std::move(pcg.x);
  } else {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
    if (ldlt.info() != Eigen::Success) {
      throw Error("solver-breakdown", "reduced Newton system is singular");
    }
    step.dw = ldlt.solve(-g);
    if (!step.dw.allFinite()) {
      throw Error("solver-breakdown", "dense fallback produced non-finite step");
    }
    step.used_dense_fallback = true;
  }

  // dz = -diag(w)^-1 (z .* dw + z .* w - mu)
  step.dz = -(z.cwiseProduct(step.dw) + z.cwiseProduct(w)).cwiseQuotient(w);
  step.dz.array() += mu * w.cwiseInverse().array();
  return step;
}

double max_dual_step(const Eigen::VectorXd& z, const Eigen::VectorXd& dz) {
  double s_max = 1.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    if (dz(j) < 0.0) s_max = std::min(s_max, -z(j) / dz(j));
  }
  return s_max;
}

LineSearchResult line_search(const Eigen::VectorXd& w, const Eigen::VectorXd& z,
                             const Eigen::VectorXd& dw, const Eigen::VectorXd& dz,
                             double mu, const SolverOptions& opts,
                             const GradientFn& gradient_at,
                             double current_residual_norm) {
  if (current_residual_norm < 0.0) {
    current_residual_norm = residual(w, z, mu, gradient_at(w)).norm;
  }

  LineSearchResult result;
  double s = 0.99 * max_dual_step(z, dz);
  while (s >= kStepFloor) {
    const Eigen::VectorXd w_trial = w + s * dw;
    if ((w_trial.array() > 0.0).all()) {
      const Eigen::VectorXd z_trial = z + s * dz;
      Residual r = residual(w_trial, z_trial, mu, gradient_at(w_trial));
      if (r.norm <= (1.0 - opts.alpha * s) * current_residual_norm) {
        result.step = s;
        result.success = true;
        result.accepted = std::move(r);
        return result;
      }
    }
    s *= opts.beta;
  }
  return result;  // step underflow
}

double update_mu(double gap, double step, int m, double mu,
                 const SolverOptions& opts) {
  return step >= opts.s_min ? gap / (2.0 * m) : mu;
}

SolveReport solve_objective(const PhiTensor& phi, const ObjectiveConfig& cfg,
                            const SolverOptions& opts,
                            const Eigen::VectorXd* warm_start_w,
                            const Eigen::VectorXd* warm_start_z) {
  check_options(opts);
  const int m = phi.num_classifiers();

  SolverState state;
  if (warm_start_w) {
    if (warm_start_w->size() != m || (warm_start_w->array() <= 0.0).any()) {
      throw Error("invalid-config", "warm start w must be strictly positive length M");
    }
    state.w = *warm_start_w;
  } else {
    state.w = Eigen::VectorXd::Constant(m, 1.0 / m);
  }
  if (warm_start_z) {
    if (warm_start_z->size() != m || (warm_start_z->array() < 0.0).any()) {
      throw Error("invalid-config", "warm start z must be nonnegative length M");
    }
    state.z = *warm_start_z;
  } else {
    state.z = Eigen::VectorXd::Ones(m);
  }
  state.mu = state.w.dot(state.z) / (2.0 * m);

  const GradientFn gradient_at = [&](const Eigen::VectorXd& w_trial) {
    return eval_objective(w_trial, phi, cfg, false).gradient;
  };

  SolveReport report;
  ObjectiveEval eval = eval_objective(state.w, phi, cfg, true);
  report.objective_trace.push_back(eval.value);

  double prev_step = 1.0;  // first barrier update behaves like a full step
  for (state.iter = 1; state.iter <= opts.max_iters; ++state.iter) {
    state.gap = state.z.dot(state.w);
    state.mu = update_mu(state.gap, prev_step, m, state.mu, opts);

    state.residual_norm = residual(state.w, state.z, state.mu, eval.gradient).norm;
    const NewtonStep step = newton_step(state.w, state.z, state.mu, eval, opts);
    const LineSearchResult ls =
        line_search(state.w, state.z, step.dw, step.dz, state.mu, opts,
                    gradient_at, state.residual_norm);
    if (!ls.success) {
      report.failure = "line-search-failure";
      break;
    }

    state.w += ls.step * step.dw;
    state.z += ls.step * step.dz;
    prev_step = ls.step;
    if ((state.w.array() <= 0.0).any() || (state.z.array() < 0.0).any()) {
      throw Error("solver-breakdown", "iterate left the feasible cone");
    }

    eval = eval_objective(state.w, phi, cfg, true);
    report.objective_trace.push_back(eval.value);
    state.gap = state.z.dot(state.w);
    state.residual_norm = ls.accepted.norm;
    report.iterations = state.iter;
    if (state.residual_norm <= opts.eps_fea && state.gap <= opts.eps_gap) {
      report.converged = true;
      break;
    }
  }

  if (!report.converged && report.failure.empty()) {
    report.failure = "max-iterations";
  }
  report.w_star = state.w;
  report.z_star = state.z;
  report.final_residual = state.residual_norm;
  report.final_gap = state.gap;
  return report;
}

SolveReport solve(const PhiTensor& phi, double lambda,
                  const SolverOptions& opts) {
  ObjectiveConfig cfg;
  cfg.lambda = lambda;
  cfg.tau = 1.0;
  cfg.cost_augmented = false;
  return solve_objective(phi, cfg, opts, nullptr);
}

}  // namespace codeagg
