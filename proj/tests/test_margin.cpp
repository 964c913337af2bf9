#include <cmath>

#include "codeagg/decode.hpp"
#include "codeagg/margin.hpp"
#include "codeagg/synthgen.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace codeagg;

namespace {

// One-example phi tensor whose single wrong class sits at margin nu:
// projections w' phi = -nu for the wrong class with w = (1).
PhiTensor margin_instance(double nu, int k = 3) {
  Eigen::MatrixXd slice = Eigen::MatrixXd::Zero(k, 1);
  slice(1, 0) = -nu;  // class 2 is the nearest wrong class
  for (int c = 2; c < k; ++c) slice(c, 0) = -nu - 1.0 - c;
  return PhiTensor(k, 1, {slice}, {1});
}

}  // namespace

TEST_SUITE("margin") {

TEST_CASE("zero weights give unit hinge and zero margin") {
  Rng rng(71);
  const PhiTensor phi = test::random_phi(rng, 12, 4, 3);
  const MarginReport r =
      hinge_and_margin(Eigen::VectorXd::Zero(3), phi, 0.1);
  for (int i = 0; i < 12; ++i) {
    CHECK(r.margins(i) == 0.0);
    CHECK(r.hinge_values(i) == 1.0);
  }
  CHECK(r.objective == doctest::Approx(1.0));
}

TEST_CASE("hinge regimes match the margin") {
  Eigen::VectorXd w(1);
  w << 1.0;
  const MarginReport comfortable = hinge_and_margin(w, margin_instance(1.5), 0.0);
  CHECK(comfortable.margins(0) == doctest::Approx(1.5));
  CHECK(comfortable.hinge_values(0) == 0.0);

  const MarginReport tight = hinge_and_margin(w, margin_instance(0.3), 0.0);
  CHECK(tight.margins(0) == doctest::Approx(0.3));
  CHECK(tight.hinge_values(0) == doctest::Approx(0.7));

  const MarginReport wrong = hinge_and_margin(w, margin_instance(-0.4), 0.0);
  CHECK(wrong.margins(0) == doctest::Approx(-0.4));
  CHECK(wrong.hinge_values(0) == doctest::Approx(1.4));
  CHECK(wrong.hinge_values(0) >= 1.0);
}

TEST_CASE("hinge dominates ramp dominates 0-1 loss") {
  Rng rng(73);
  for (int rep = 0; rep < 200; ++rep) {
    const PhiTensor phi = test::random_phi(rng, 6, 4, 3);
    const Eigen::VectorXd w = test::random_nonneg_weights(rng, 3);
    const MarginReport r = hinge_and_margin(w, phi, 0.1);
    for (int i = 0; i < 6; ++i) {
      const double nu = r.margins(i);
      const double ramp = std::min(1.0, std::max(0.0, 1.0 - nu));
      const double zero_one = nu <= 0.0 ? 1.0 : 0.0;
      CHECK(r.hinge_values(i) >= ramp - 1e-12);
      CHECK(ramp >= zero_one - 1e-12);
    }
  }
}

TEST_CASE("margins agree with explicit rho differences") {
  Rng rng(79);
  const CodeMatrix code = gen_allpairs(3);
  const auto inst = test::random_pipeline(rng, code, 25);
  const PhiTensor phi =
      compute_phi(code, inst.q, inst.labels, LossKind::CrossEntropy);
  const Eigen::VectorXd w = test::random_nonneg_weights(rng, 3);
  const MarginReport r = hinge_and_margin(w, phi, 0.1);
  for (int i = 0; i < 25; ++i) {
    const Eigen::VectorXd q = inst.q.example(i);
    const double rho_true =
        rho(code, inst.labels[i], q, w, LossKind::CrossEntropy);
    double smallest = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 3; ++k) {
      if (k == inst.labels[i]) continue;
      smallest = std::min(
          smallest, rho(code, k, q, w, LossKind::CrossEntropy) - rho_true);
    }
    CHECK(r.margins(i) == doctest::Approx(smallest).epsilon(1e-10));
  }
}

TEST_CASE("sandwich gap lies in [0, log K / tau]") {
  Rng rng(83);
  for (int k : {3, 5, 10}) {
    for (double tau : {1.0, 4.0, 16.0, 64.0}) {
      for (int rep = 0; rep < 25; ++rep) {
        const PhiTensor phi = test::random_phi(rng, 8, k, 4);
        const Eigen::VectorXd w = test::random_nonneg_weights(rng, 4);
        const double gap = sandwich_gap(w, phi, tau);
        CHECK(gap >= -1e-12);
        CHECK(gap <= std::log(double(k)) / tau + 1e-12);
      }
    }
  }
}

TEST_CASE("f_tau approaches f_LM within log K / tau") {
  Rng rng(89);
  for (int rep = 0; rep < 50; ++rep) {
    const int k = 3 + static_cast<int>(rng.below(3));
    const PhiTensor phi = test::random_phi(rng, 10, k, 4);
    const Eigen::VectorXd w = test::random_nonneg_weights(rng, 4);
    const double tau = std::pow(2.0, double(rng.below(7)));
    ObjectiveConfig cfg;
    cfg.lambda = 0.05;
    cfg.tau = tau;
    cfg.cost_augmented = true;
    const double f_tau = eval_objective(w, phi, cfg, false).value;
    const double f_lm = hinge_and_margin(w, phi, cfg.lambda).objective;
    CHECK(f_tau - f_lm >= -1e-10);
    CHECK(f_tau - f_lm <= std::log(double(k)) / tau + 1e-10);
  }
}

TEST_CASE("subgradient iterates stay in the nonnegative orthant") {
  Rng rng(97);
  const PhiTensor phi = test::random_phi(rng, 20, 3, 4);
  const Eigen::VectorXd w = subgradient_solve(phi, 0.01, 1.0, 300);
  CHECK((w.array() >= 0.0).all());
}

TEST_CASE("huge regularization flattens the subgradient solution") {
  Rng rng(101);
  const PhiTensor phi = test::random_phi(rng, 20, 3, 4);
  const Eigen::VectorXd w = subgradient_solve(phi, 1e6, 1.0, 500);
  CHECK(w.lpNorm<Eigen::Infinity>() < 1e-2);
}

TEST_CASE("subgradient and annealed solutions agree on the benchmark") {
  const ThreeClassData d = gen_three_class(2);
  const PhiTensor phi =
      compute_phi(d.code, d.q, d.labels, LossKind::CrossEntropy);
  const double lambda = 1e-2;

  const Eigen::VectorXd w_sg = subgradient_solve(phi, lambda, 1.0, 5000);
  const TauAnnealReport annealed =
      tau_annealed_solve(phi, lambda, {1, 2, 4, 8, 16, 32, 64});

  const double f_sg = hinge_and_margin(w_sg, phi, lambda).objective;
  const double f_an = hinge_and_margin(annealed.w, phi, lambda).objective;
  CHECK(std::abs(f_sg - f_an) <= 0.05 * std::max(f_sg, f_an));
  CHECK((annealed.w.array() >= 0.0).all());
}

TEST_CASE("annealed objective lands within the smoothing gap") {
  const ThreeClassData d = gen_three_class(6);
  const PhiTensor phi =
      compute_phi(d.code, d.q, d.labels, LossKind::CrossEntropy);
  const double lambda = 1e-3;
  const std::vector<double> schedule{1, 2, 4, 8, 16, 32, 64};
  const TauAnnealReport annealed = tau_annealed_solve(phi, lambda, schedule);

  ObjectiveConfig cfg;
  cfg.lambda = lambda;
  cfg.tau = schedule.back();
  cfg.cost_augmented = true;
  const double f_tau = eval_objective(annealed.w, phi, cfg, false).value;
  const double f_lm = hinge_and_margin(annealed.w, phi, lambda).objective;
  CHECK(std::abs(f_tau - f_lm) <= std::log(3.0) / schedule.back() + 1e-10);
}

TEST_CASE("default tau schedule is powers of two up to 64") {
  CHECK(default_tau_schedule() == std::vector<double>{1, 2, 4, 8, 16, 32, 64});
}

TEST_CASE("tau annealing with a singleton schedule reduces to the plain solve") {
  const ThreeClassData d = gen_three_class(9);
  const PhiTensor phi =
      compute_phi(d.code, d.q, d.labels, LossKind::CrossEntropy);
  const TauAnnealReport annealed =
      tau_annealed_solve(phi, 1e-4, {1}, SolverOptions{}, false);
  const SolveReport plain = solve(phi, 1e-4);
  CHECK((annealed.w.array() == plain.w_star.array()).all());
  CHECK(annealed.stages.front().iterations == plain.iterations);
}

TEST_CASE("warm starts do not cost more iterations than cold starts") {
  const ThreeClassData d = gen_three_class(12);
  const PhiTensor phi =
      compute_phi(d.code, d.q, d.labels, LossKind::CrossEntropy);
  const double lambda = 1e-3;
  const std::vector<double> schedule{1, 4, 16, 64};
  const TauAnnealReport annealed = tau_annealed_solve(phi, lambda, schedule);

  for (std::size_t s = 0; s < schedule.size(); ++s) {
    CHECK(std::isfinite(annealed.stages[s].objective_trace.back()));
    ObjectiveConfig cfg;
    cfg.lambda = lambda;
    cfg.tau = schedule[s];
    cfg.cost_augmented = true;
    const SolveReport cold = solve_objective(phi, cfg);
    CHECK(annealed.stages[s].iterations <= cold.iterations);
  }
}

TEST_CASE("generalization bound terms") {
  Rng rng(103);
  const PhiTensor phi = test::random_phi(rng, 50, 3, 4);
  const Eigen::VectorXd w = test::random_nonneg_weights(rng, 4);
  const double b = w.norm();
  const BoundReport bound = generalization_bound(w, phi, b, 0.05);
  CHECK(bound.empirical_loss >= 0.0);
  CHECK(bound.complexity_term >= 0.0);
  CHECK(bound.confidence_term ==
        doctest::Approx(std::sqrt(9.0 * std::log(2.0 / 0.05) / 100.0)));
  CHECK(bound.total == doctest::Approx(bound.empirical_loss +
                                       bound.complexity_term +
                                       bound.confidence_term));
  CHECK(bound.total >= bound.empirical_loss);

  CHECK(test::throws_code([&] { generalization_bound(w, phi, b / 2, 0.05); },
                          "invalid-bound-parameter"));
  CHECK(test::throws_code([&] { generalization_bound(w, phi, b, 1.5); },
                          "invalid-bound-parameter"));
}

TEST_CASE("bound dominates the observed gaussian test error") {
  SynthConfig cfg;
  cfg.seed = 3;
  cfg.num_classes = 3;
  cfg.per_class_train = 100;
  cfg.per_class_test = 200;
  const GaussSplit split = gen_gauss(cfg);
  const CodeMatrix code = gen_allpairs(3);
  const BinaryTraining fit = train_binary_problems(split.train, code, 1.0);
  const PhiTensor phi =
      compute_phi(code, fit.q, split.train.labels, LossKind::CrossEntropy);
  const SolveReport r = solve(phi, 1e-4);
  REQUIRE(r.converged);

  const BoundReport bound =
      generalization_bound(r.w_star, phi, r.w_star.norm(), 0.05);

  const ProbMatrix q_test = binary_probabilities(fit.models, split.test.features);
  std::vector<ClassPosterior> posteriors;
  for (int i = 0; i < q_test.num_examples(); ++i) {
    posteriors.push_back(
        posterior(r.w_star, code, q_test.example(i), LossKind::CrossEntropy));
  }
  const double test_error =
      1.0 - metrics(split.test.labels, posteriors).accuracy;
  CHECK(bound.total >= test_error);
}

TEST_CASE("perfect margins leave only complexity and confidence terms") {
  Eigen::VectorXd w(1);
  w << 1.0;
  // two examples, both with margin 2
  std::vector<Eigen::MatrixXd> slices(2, margin_instance(2.0).slice(0));
  const PhiTensor phi(3, 1, std::move(slices), {1, 1});
  const BoundReport bound = generalization_bound(w, phi, 1.0, 0.1);
  CHECK(bound.empirical_loss == 0.0);
  CHECK(bound.total == doctest::Approx(bound.complexity_term + bound.confidence_term));
}

}  // TEST_SUITE
