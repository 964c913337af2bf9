#ifndef CODEAGG_IO_HPP
#define CODEAGG_IO_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "codeagg/base.hpp"
#include "codeagg/decode.hpp"
#include "codeagg/discrepancy.hpp"
#include "codeagg/encoding.hpp"
#include "codeagg/margin.hpp"

#include "json.hpp"

namespace codeagg {

// Trained artifact: aggregation weights plus everything needed to decode.
struct AggregationModel {
  Eigen::VectorXd weights;
  double lambda = 0.0;
  LossKind loss = LossKind::CrossEntropy;
  CodeMatrix code;
};

// Numeric CSV grid: '#'-prefixed lines are ignored, a single leading header
// line of non-numeric tokens is skipped. Throws "parse-failure" on anything
// else that does not scan as a number.
std::vector<std::vector<double>> parse_numeric_csv(std::istream& in);

nlohmann::json code_matrix_to_json(const CodeMatrix& code);
CodeMatrix code_matrix_from_json(const nlohmann::json& j);
void save_code_matrix(const std::string& path, const CodeMatrix& code);
CodeMatrix load_code_matrix(const std::string& path);

nlohmann::json model_to_json(const AggregationModel& model);
AggregationModel model_from_json(const nlohmann::json& j);
void save_model(const std::string& path, const AggregationModel& model);
AggregationModel load_model(const std::string& path);

std::vector<int> load_labels(std::istream& in);
std::vector<int> load_labels_file(const std::string& path);
void save_labels(const std::string& path, const std::vector<int>& labels);

void save_q_csv(const std::string& path, const ProbMatrix& q);

Dataset load_dataset(std::istream& in);
Dataset load_dataset_file(const std::string& path);
void save_dataset(const std::string& path, const Dataset& data);

// Predictions CSV: header then one `predicted_label,p_1..p_K` row per
// example.
void write_predictions(std::ostream& out,
                       const std::vector<ClassPosterior>& posteriors);

nlohmann::json metrics_to_json(const EvalMetrics& metrics);
nlohmann::json bound_to_json(const BoundReport& bound);

}  // namespace codeagg

#endif
