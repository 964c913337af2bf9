#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "codeagg/base.hpp"
#include "codeagg/decode.hpp"
#include "codeagg/encoding.hpp"
#include "codeagg/errors.hpp"
#include "codeagg/io.hpp"
#include "codeagg/margin.hpp"
#include "codeagg/pdip.hpp"
#include "codeagg/rng.hpp"
#include "codeagg/synthgen.hpp"

namespace {

using namespace codeagg;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool verbose() {
  const char* env = std::getenv("CODEAGG_VERBOSE");
  return env != nullptr && *env != '\0' && std::string(env) != "0";
}

CodeMatrix make_code(const std::string& scheme, int classes, std::uint64_t seed) {
  if (scheme == "ova") return gen_ova(classes);
  if (scheme == "aps") return gen_allpairs(classes);
  if (scheme == "ecoc") return gen_ecoc(classes, seed);
  throw Error("invalid-scheme", "scheme must be one of ova|aps|ecoc");
}

std::vector<ClassPosterior> batch_posteriors(const Eigen::VectorXd& w,
                                             const CodeMatrix& code,
                                             const ProbMatrix& q, LossKind kind) {
  std::vector<ClassPosterior> out;
  out.reserve(q.num_examples());
  for (int i = 0; i < q.num_examples(); ++i) {
    out.push_back(posterior(w, code, q.example(i), kind));
  }
  return out;
}

std::vector<ClassPosterior> batch_loss_based(const CodeMatrix& code,
                                             const ProbMatrix& q) {
  std::vector<ClassPosterior> out;
  out.reserve(q.num_examples());
  for (int i = 0; i < q.num_examples(); ++i) {
    out.push_back(loss_based_posterior(code, q.example(i)));
  }
  return out;
}

void print_confusion(std::ostream& out, const Eigen::MatrixXi& confusion) {
  for (Eigen::Index r = 0; r < confusion.rows(); ++r) {
    for (Eigen::Index c = 0; c < confusion.cols(); ++c) {
      out << (c ? " " : "") << confusion(r, c);
    }
    out << '\n';
  }
}

void print_weights(std::ostream& out, const Eigen::VectorXd& w) {
  out << "w_star=[";
  for (Eigen::Index j = 0; j < w.size(); ++j) out << (j ? " " : "") << w(j);
  out << "]\n";
}

struct TrainedPipeline {
  ProbMatrix q;
  std::vector<int> labels;
  std::vector<BinaryModel> models;  // empty when Q was ingested directly
};

// Resolve the Q matrix either from a precomputed CSV or by fitting the
// built-in logistic base classifiers on a feature dataset.
TrainedPipeline resolve_q(const CodeMatrix& code, const std::string& data_path,
                          const std::string& q_path, const std::string& labels_path,
                          double base_reg) {
  if (!data_path.empty()) {
    Dataset data = load_dataset_file(data_path);
    if (data.num_classes != code.num_classes()) {
      throw Error("dimension-mismatch",
                  "dataset has " + std::to_string(data.num_classes) +
                      " classes, code matrix has " +
                      std::to_string(code.num_classes()));
    }
    BinaryTraining fit = train_binary_problems(data, code, base_reg);
    return TrainedPipeline{std::move(fit.q), std::move(data.labels),
                           std::move(fit.models)};
  }
  ProbMatrix q = ingest_q_file(q_path, code.num_classifiers());
  std::vector<int> labels;
  if (!labels_path.empty()) {
    labels = load_labels_file(labels_path);
    if (static_cast<int>(labels.size()) != q.num_examples()) {
      throw Error("dimension-mismatch", "label count does not match Q rows");
    }
    for (int y : labels) {
      if (y < 1 || y > code.num_classes()) {
        throw Error("invalid-label",
                    "label " + std::to_string(y) + " out of range 1..K");
      }
    }
  }
  return TrainedPipeline{std::move(q), std::move(labels), {}};
}

int cmd_codematrix(const std::string& scheme, int classes, std::uint64_t seed,
                   const std::string& out_path) {
  const CodeMatrix code = make_code(scheme, classes, seed);
  save_code_matrix(out_path, code);
  std::cout << "scheme=" << to_string(code.scheme())
            << " K=" << code.num_classes() << " M=" << code.num_classifiers()
            << " min_column_distance=" << code_distance(code) << '\n';
  return kExitOk;
}

int cmd_train(const std::string& code_path, const std::string& data_path,
              const std::string& q_path, const std::string& labels_path,
              const std::string& loss_name, double lambda, double base_reg,
              int max_iters, const std::string& out_path,
              const std::string& q_out) {
  const auto t0 = Clock::now();
  const CodeMatrix code = load_code_matrix(code_path);
  const LossKind loss = loss_kind_from_string(loss_name);
  TrainedPipeline pipeline =
      resolve_q(code, data_path, q_path, labels_path, base_reg);
  if (pipeline.labels.empty()) {
    throw Error("invalid-config", "training requires labels (--labels or --data)");
  }
  if (!q_out.empty()) save_q_csv(q_out, pipeline.q);

  const PhiTensor phi = compute_phi(code, pipeline.q, pipeline.labels, loss);
  SolverOptions opts;
  opts.max_iters = max_iters;
  const SolveReport report = solve(phi, lambda, opts);
  const double train_seconds = seconds_since(t0);

  if (!out_path.empty()) {
    save_model(out_path, AggregationModel{report.w_star, lambda, loss, code});
  }

  const std::vector<ClassPosterior> posteriors =
      batch_posteriors(report.w_star, code, pipeline.q, loss);
  const EvalMetrics train_metrics = metrics(pipeline.labels, posteriors);

  std::cout << "converged=" << (report.converged ? "true" : "false")
            << " iterations=" << report.iterations
            << " residual=" << report.final_residual
            << " gap=" << report.final_gap
            << " objective=" << report.objective_trace.back() << '\n';
  std::cout << "train_accuracy=" << train_metrics.accuracy
            << " train_mse=" << train_metrics.mse << '\n';
  print_weights(std::cout, report.w_star);
  std::cout << "train_time_s=" << train_seconds << '\n';
  if (verbose()) {
    std::cout << "objective_trace=";
    for (double v : report.objective_trace) std::cout << v << ' ';
    std::cout << '\n';
  }
  if (!report.converged) {
    std::cerr << "warning: solver stopped without convergence ("
              << report.failure << ")\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& q_path,
                const std::string& out_path) {
  const AggregationModel model = load_model(model_path);
  const ProbMatrix q = ingest_q_file(q_path, model.code.num_classifiers());
  const std::vector<ClassPosterior> posteriors =
      batch_posteriors(model.weights, model.code, q, model.loss);
  if (out_path.empty()) {
    write_predictions(std::cout, posteriors);
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("io-error", "cannot write '" + out_path + "'");
    write_predictions(out, posteriors);
  }
  return kExitOk;
}

int cmd_evaluate(const std::string& model_path, const std::string& q_path,
                 const std::string& labels_path, const std::string& out_path,
                 const std::string& preds_out, double bound_b, double epsilon,
                 bool with_bound, const std::string& bound_out) {
  const auto t0 = Clock::now();
  const AggregationModel model = load_model(model_path);
  const ProbMatrix q = ingest_q_file(q_path, model.code.num_classifiers());
  const std::vector<int> labels = load_labels_file(labels_path);
  if (static_cast<int>(labels.size()) != q.num_examples()) {
    throw Error("dimension-mismatch", "label count does not match Q rows");
  }

  const std::vector<ClassPosterior> posteriors =
      batch_posteriors(model.weights, model.code, q, model.loss);
  const EvalMetrics m = metrics(labels, posteriors);
  if (!preds_out.empty()) {
    std::ofstream out(preds_out);
    if (!out) throw Error("io-error", "cannot write '" + preds_out + "'");
    write_predictions(out, posteriors);
  }

  nlohmann::json report = metrics_to_json(m);
  if (with_bound) {
    const PhiTensor phi = compute_phi(model.code, q, labels, model.loss);
    const double b = bound_b > 0.0 ? bound_b : model.weights.norm();
    report["bound"] =
        bound_to_json(generalization_bound(model.weights, phi, b, epsilon));
    if (!bound_out.empty()) {
      std::ofstream out(bound_out);
      if (!out) throw Error("io-error", "cannot write '" + bound_out + "'");
      out << report["bound"].dump(2) << '\n';
    }
  }
  if (out_path.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("io-error", "cannot write '" + out_path + "'");
    out << report.dump(2) << '\n';
    std::cout << "accuracy=" << m.accuracy << " mse=" << m.mse << '\n';
  }
  std::cout << "test_time_s=" << seconds_since(t0) << '\n';
  return kExitOk;
}

int cmd_regpath(const std::string& code_path, const std::string& data_path,
                const std::string& q_path, const std::string& labels_path,
                const std::string& loss_name, double base_reg,
                std::vector<double> lambdas, const std::string& out_path) {
  const CodeMatrix code = load_code_matrix(code_path);
  const LossKind loss = loss_kind_from_string(loss_name);
  const TrainedPipeline pipeline =
      resolve_q(code, data_path, q_path, labels_path, base_reg);
  if (pipeline.labels.empty()) {
    throw Error("invalid-config", "regpath requires labels");
  }
  if (lambdas.empty()) {
    for (int e = -6; e <= 1; ++e) lambdas.push_back(std::pow(10.0, e));
  }
  const PhiTensor phi = compute_phi(code, pipeline.q, pipeline.labels, loss);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw Error("io-error", "cannot write '" + out_path + "'");
    out = &file;
  }
  (*out) << "lambda";
  for (int j = 1; j <= code.num_classifiers(); ++j) (*out) << ",w_" << j;
  (*out) << ",train_accuracy,converged\n";

  for (double lambda : lambdas) {
    (*out) << lambda;
    try {
      const SolveReport report = solve(phi, lambda);  // cold start per lambda
      const EvalMetrics m =
          metrics(pipeline.labels,
                  batch_posteriors(report.w_star, code, pipeline.q, loss));
      for (Eigen::Index j = 0; j < report.w_star.size(); ++j) {
        (*out) << ',' << report.w_star(j);
      }
      (*out) << ',' << m.accuracy << ','
             << (report.converged ? "true" : "false") << '\n';
    } catch (const Error& e) {
      // record the failure in the row and keep sweeping
      for (int j = 0; j < code.num_classifiers(); ++j) (*out) << ",nan";
      (*out) << ",nan,false\n";
      std::cerr << "warning: lambda=" << lambda << " failed: " << e.what() << '\n';
    }
  }
  return kExitOk;
}

int cmd_synth_three_class(std::uint64_t seed, double lambda,
                          const std::string& loss_name, const std::string& q_out,
                          const std::string& labels_out,
                          const std::string& code_out) {
  const auto t0 = Clock::now();
  const ThreeClassData data = gen_three_class(seed);
  if (!q_out.empty()) save_q_csv(q_out, data.q);
  if (!labels_out.empty()) save_labels(labels_out, data.labels);
  if (!code_out.empty()) save_code_matrix(code_out, data.code);

  const EvalMetrics lb =
      metrics(data.labels, batch_loss_based(data.code, data.q));
  std::cout << "loss_based_accuracy=" << lb.accuracy << '\n';
  std::cout << "loss_based_confusion=\n";
  print_confusion(std::cout, lb.confusion);

  const LossKind loss = loss_kind_from_string(loss_name);
  const PhiTensor phi = compute_phi(data.code, data.q, data.labels, loss);
  const SolveReport report = solve(phi, lambda);
  const EvalMetrics ours = metrics(
      data.labels, batch_posteriors(report.w_star, data.code, data.q, loss));
  std::cout << "aggregated_accuracy=" << ours.accuracy << '\n';
  std::cout << "aggregated_confusion=\n";
  print_confusion(std::cout, ours.confusion);
  print_weights(std::cout, report.w_star);
  std::cout << "iterations=" << report.iterations
            << " residual=" << report.final_residual
            << " gap=" << report.final_gap << '\n';
  std::cout << "train_time_s=" << seconds_since(t0) << '\n';
  return report.converged ? kExitOk : kExitNotConverged;
}

int cmd_synth_gauss(int classes, const std::string& encoding, int repeats,
                    std::uint64_t seed, int train_per_class, int test_per_class,
                    double lambda, double base_reg, const std::string& loss_name,
                    const std::string& train_out, const std::string& test_out) {
  const auto t0 = Clock::now();
  const LossKind loss = loss_kind_from_string(loss_name);
  const Rng seeder(seed);

  std::vector<double> lb_acc, agg_acc;
  bool all_converged = true;
  for (int rep = 0; rep < repeats; ++rep) {
    const std::uint64_t rep_seed = seeder.split(rep).seed();
    SynthConfig cfg;
    cfg.seed = rep_seed;
    cfg.num_classes = classes;
    cfg.per_class_train = train_per_class;
    cfg.per_class_test = test_per_class;
    const GaussSplit split = gen_gauss(cfg);
    if (rep == 0 && !train_out.empty()) save_dataset(train_out, split.train);
    if (rep == 0 && !test_out.empty()) save_dataset(test_out, split.test);

    const CodeMatrix code = make_code(encoding, classes, rep_seed);
    const BinaryTraining fit = train_binary_problems(split.train, code, base_reg);
    const PhiTensor phi = compute_phi(code, fit.q, split.train.labels, loss);
    const SolveReport report = solve(phi, lambda);
    all_converged &= report.converged;

    const ProbMatrix q_test = binary_probabilities(fit.models, split.test.features);
    const EvalMetrics lb =
        metrics(split.test.labels, batch_loss_based(code, q_test));
    const EvalMetrics agg = metrics(
        split.test.labels, batch_posteriors(report.w_star, code, q_test, loss));
    lb_acc.push_back(lb.accuracy);
    agg_acc.push_back(agg.accuracy);
    if (verbose()) {
      std::cout << "repeat=" << rep << " seed=" << rep_seed
                << " loss_based=" << lb.accuracy << " aggregated=" << agg.accuracy
                << " iterations=" << report.iterations << '\n';
    }
  }

  const auto mean_std = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var = xs.size() > 1 ? var / (xs.size() - 1) : 0.0;
    return std::pair<double, double>(mean, std::sqrt(var));
  };
  const auto [lb_mean, lb_std] = mean_std(lb_acc);
  const auto [agg_mean, agg_std] = mean_std(agg_acc);
  std::cout << "encoding=" << encoding << " classes=" << classes
            << " repeats=" << repeats << '\n';
  std::cout << "loss_based_accuracy mean=" << lb_mean << " std=" << lb_std << '\n';
  std::cout << "aggregated_accuracy mean=" << agg_mean << " std=" << agg_std << '\n';
  std::cout << "total_time_s=" << seconds_since(t0) << '\n';
  return all_converged ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "codeagg: multiclass decoding by convex aggregation of binary "
      "classifiers over a code matrix"};
  app.require_subcommand(1);

  // codematrix
  std::string cm_scheme = "aps", cm_out;
  int cm_classes = 3;
  std::uint64_t cm_seed = 0;
  auto* cm = app.add_subcommand("codematrix", "Generate a code matrix file");
  cm->add_option("--scheme", cm_scheme, "ova|aps|ecoc")->capture_default_str();
  cm->add_option("--classes", cm_classes, "number of classes K (>= 3)")->required();
  cm->add_option("--seed", cm_seed, "seed for sparse random codes")->capture_default_str();
  cm->add_option("--out", cm_out, "output JSON path")->required();

  // train
  std::string tr_code, tr_data, tr_q, tr_labels, tr_loss = "xent", tr_out, tr_qout;
  double tr_lambda = 1e-4, tr_base_reg = 1.0;
  int tr_max_iters = 200;
  auto* tr = app.add_subcommand("train", "Fit aggregation weights");
  tr->add_option("--code", tr_code, "code matrix JSON")->required();
  tr->add_option("--data", tr_data,
                 "feature CSV (x1..xD,label); fits the built-in logistic base "
                 "classifiers");
  tr->add_option("--q", tr_q, "precomputed Q matrix CSV");
  tr->add_option("--labels", tr_labels, "label CSV (required with --q)");
  tr->add_option("--loss", tr_loss, "xent|exp")->capture_default_str();
  tr->add_option("--lambda", tr_lambda, "regularization strength")->capture_default_str();
  tr->add_option("--base-reg", tr_base_reg, "base-classifier regularization")->capture_default_str();
  tr->add_option("--max-iters", tr_max_iters, "solver iteration cap")->capture_default_str();
  tr->add_option("--out", tr_out, "model JSON path");
  tr->add_option("--q-out", tr_qout, "also write the training Q matrix CSV");

  // predict
  std::string pr_model, pr_q, pr_out;
  auto* pr = app.add_subcommand("predict", "Write per-example posteriors");
  pr->add_option("--model", pr_model, "model JSON")->required();
  pr->add_option("--q", pr_q, "Q matrix CSV for the examples to score")->required();
  pr->add_option("--out", pr_out, "predictions CSV path (default stdout)");

  // evaluate
  std::string ev_model, ev_q, ev_labels, ev_out, ev_preds, ev_bound_out;
  double ev_bound = 0.0, ev_eps = 0.05;
  bool ev_with_bound = false;
  auto* ev = app.add_subcommand("evaluate", "Metrics (and optional bound) on labeled data");
  ev->add_option("--model", ev_model, "model JSON")->required();
  ev->add_option("--q", ev_q, "Q matrix CSV")->required();
  ev->add_option("--labels", ev_labels, "label CSV")->required();
  ev->add_option("--out", ev_out, "metrics JSON path (default stdout)");
  ev->add_option("--preds-out", ev_preds, "also write predictions CSV");
  ev->add_flag("--bound", ev_with_bound, "append the generalization bound report");
  ev->add_option("--bound-B", ev_bound, "weight-norm bound B (default ||w||_2)");
  ev->add_option("--epsilon", ev_eps, "bound confidence parameter")->capture_default_str();
  ev->add_option("--bound-out", ev_bound_out, "bound report JSON path");

  // regpath
  std::string rp_code, rp_data, rp_q, rp_labels, rp_loss = "xent", rp_out;
  double rp_base_reg = 1.0;
  std::vector<double> rp_lambdas;
  auto* rp = app.add_subcommand("regpath", "Cold-start solves over a lambda grid");
  rp->add_option("--code", rp_code, "code matrix JSON")->required();
  rp->add_option("--data", rp_data, "feature CSV");
  rp->add_option("--q", rp_q, "Q matrix CSV");
  rp->add_option("--labels", rp_labels, "label CSV");
  rp->add_option("--loss", rp_loss, "xent|exp")->capture_default_str();
  rp->add_option("--base-reg", rp_base_reg, "base-classifier regularization")->capture_default_str();
  rp->add_option("--lambdas", rp_lambdas,
                 "explicit lambda grid (default 1e-6..1e1 by decades)");
  rp->add_option("--out", rp_out, "CSV output path (default stdout)");

  // synth
  auto* sy = app.add_subcommand("synth", "Built-in synthetic experiments");
  sy->require_subcommand(1);
  std::uint64_t s3_seed = 0;
  double s3_lambda = 1e-4;
  std::string s3_loss = "xent", s3_qout, s3_labelsout, s3_codeout;
  auto* s3 = sy->add_subcommand("three-class",
                                "Three pair classifiers, one broken: weight recovery");
  s3->add_option("--seed", s3_seed, "generator seed")->capture_default_str();
  s3->add_option("--lambda", s3_lambda, "regularization strength")->capture_default_str();
  s3->add_option("--loss", s3_loss, "xent|exp")->capture_default_str();
  s3->add_option("--q-out", s3_qout, "write the generated Q matrix CSV");
  s3->add_option("--labels-out", s3_labelsout, "write the generated labels CSV");
  s3->add_option("--code-out", s3_codeout, "write the pair code matrix JSON");

  int sg_classes = 3, sg_repeats = 5, sg_train = 300, sg_test = 1000;
  std::uint64_t sg_seed = 0;
  double sg_lambda = 1e-4, sg_base_reg = 1.0;
  std::string sg_encoding = "aps", sg_loss = "xent", sg_train_out, sg_test_out;
  auto* sg = sy->add_subcommand("gauss",
                                "2D Gaussian benchmark, loss-based vs aggregated");
  sg->add_option("--classes", sg_classes, "number of classes K")->required();
  sg->add_option("--encoding", sg_encoding, "ova|aps|ecoc")->capture_default_str();
  sg->add_option("--repeats", sg_repeats, "independent repeats")->capture_default_str();
  sg->add_option("--seed", sg_seed, "base seed; repeat seeds derive from it")->capture_default_str();
  sg->add_option("--train-per-class", sg_train, "training samples per class")->capture_default_str();
  sg->add_option("--test-per-class", sg_test, "test samples per class")->capture_default_str();
  sg->add_option("--lambda", sg_lambda, "regularization strength")->capture_default_str();
  sg->add_option("--base-reg", sg_base_reg, "base-classifier regularization")->capture_default_str();
  sg->add_option("--loss", sg_loss, "xent|exp")->capture_default_str();
  sg->add_option("--train-out", sg_train_out, "write the first repeat's training CSV");
  sg->add_option("--test-out", sg_test_out, "write the first repeat's test CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cm->parsed()) return cmd_codematrix(cm_scheme, cm_classes, cm_seed, cm_out);
    if (tr->parsed()) {
      if (tr_data.empty() == tr_q.empty()) {
        throw Error("invalid-config", "pass exactly one of --data or --q");
      }
      return cmd_train(tr_code, tr_data, tr_q, tr_labels, tr_loss, tr_lambda,
                       tr_base_reg, tr_max_iters, tr_out, tr_qout);
    }
    if (pr->parsed()) return cmd_predict(pr_model, pr_q, pr_out);
    if (ev->parsed()) {
      return cmd_evaluate(ev_model, ev_q, ev_labels, ev_out, ev_preds, ev_bound,
                          ev_eps, ev_with_bound, ev_bound_out);
    }
    if (rp->parsed()) {
      if (rp_data.empty() == rp_q.empty()) {
        throw Error("invalid-config", "pass exactly one of --data or --q");
      }
      return cmd_regpath(rp_code, rp_data, rp_q, rp_labels, rp_loss, rp_base_reg,
                         rp_lambdas, rp_out);
    }
    if (sy->parsed()) {
      if (s3->parsed()) {
        return cmd_synth_three_class(s3_seed, s3_lambda, s3_loss, s3_qout,
                                     s3_labelsout, s3_codeout);
      }
      return cmd_synth_gauss(sg_classes, sg_encoding, sg_repeats, sg_seed,
                             sg_train, sg_test, sg_lambda, sg_base_reg, sg_loss,
                             sg_train_out, sg_test_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
