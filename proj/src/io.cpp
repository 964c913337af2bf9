#include "codeagg/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "codeagg/errors.hpp"

namespace codeagg {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos
                         ? std::string()
                         : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool scan_double(const std::string& token, double* out) {
  if (token.empty()) return false;
  std::size_t consumed = 0;
  try {
    *out = std::stod(token, &consumed);
  } catch (const std::exception&) {
    return false;
  }
  return consumed == token.size();
}

json require(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error("parse-failure", std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("io-error", "cannot write '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot open '" + path + "'");
  return in;
}

// Round-trip-exact decimal formatting for CSV output.
void write_double(std::ostream& out, double v) {
  out << std::setprecision(17) << v;
}

}  // namespace

std::vector<std::vector<double>> parse_numeric_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::vector<std::string> fields = split_csv(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool ok = true;
    for (const std::string& f : fields) {
      double v = 0.0;
      if (!scan_double(f, &v)) {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (first_content_line) {  // header line
        first_content_line = false;
        continue;
      }
      throw Error("parse-failure", "non-numeric field in line: " + line);
    }
    first_content_line = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

json code_matrix_to_json(const CodeMatrix& code) {
  json rows = json::array();
  for (int r = 0; r < code.num_classifiers(); ++r) {
    json row = json::array();
    for (int k = 1; k <= code.num_classes(); ++k) {
      row.push_back(std::string(1, entry_to_char(code.at(r, k))));
    }
    rows.push_back(std::move(row));
  }
  return json{{"scheme", to_string(code.scheme())},
              {"K", code.num_classes()},
              {"M", code.num_classifiers()},
              {"rows", std::move(rows)}};
}

CodeMatrix code_matrix_from_json(const json& j) {
  const CodeScheme scheme = scheme_from_string(require(j, "scheme").get<std::string>());
  const int K = require(j, "K").get<int>();
  const int M = require(j, "M").get<int>();
  const json rows = require(j, "rows");
  if (!rows.is_array() || static_cast<int>(rows.size()) != M) {
    throw Error("parse-failure", "rows array does not match M");
  }
  std::vector<CodeEntry> entries;
  entries.reserve(static_cast<std::size_t>(M) * K);
  for (const json& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != K) {
      throw Error("parse-failure", "row length does not match K");
    }
    for (const json& cell : row) {
      const std::string s = cell.get<std::string>();
      if (s.size() != 1) throw Error("parse-failure", "bad entry '" + s + "'");
      entries.push_back(entry_from_char(s[0]));
    }
  }
  return CodeMatrix(scheme, K, M, std::move(entries));
}

void save_code_matrix(const std::string& path, const CodeMatrix& code) {
  open_out(path) << code_matrix_to_json(code).dump(2) << '\n';
}

CodeMatrix load_code_matrix(const std::string& path) {
  json j;
  try {
    open_in(path) >> j;
  } catch (const json::exception& e) {
    throw Error("parse-failure", e.what());
  }
  return code_matrix_from_json(j);
}

json model_to_json(const AggregationModel& model) {
  return json{{"weights", std::vector<double>(model.weights.begin(), model.weights.end())},
              {"lambda", model.lambda},
              {"loss", to_string(model.loss)},
              {"code_matrix", code_matrix_to_json(model.code)},
              {"K", model.code.num_classes()}};
}

AggregationModel model_from_json(const json& j) {
  CodeMatrix code = code_matrix_from_json(require(j, "code_matrix"));
  const auto weights = require(j, "weights").get<std::vector<double>>();
  if (static_cast<int>(weights.size()) != code.num_classifiers()) {
    throw Error("dimension-mismatch", "weight count does not match M");
  }
  if (j.contains("K") && j.at("K").get<int>() != code.num_classes()) {
    throw Error("dimension-mismatch", "model K does not match code matrix");
  }
  AggregationModel model{Eigen::Map<const Eigen::VectorXd>(
                             weights.data(), static_cast<Eigen::Index>(weights.size())),
                         require(j, "lambda").get<double>(),
                         loss_kind_from_string(require(j, "loss").get<std::string>()),
                         std::move(code)};
  return model;
}

void save_model(const std::string& path, const AggregationModel& model) {
  open_out(path) << model_to_json(model).dump(2) << '\n';
}

AggregationModel load_model(const std::string& path) {
  json j;
  try {
    open_in(path) >> j;
  } catch (const json::exception& e) {
    throw Error("parse-failure", e.what());
  }
  return model_from_json(j);
}

std::vector<int> load_labels(std::istream& in) {
  const std::vector<std::vector<double>> rows = parse_numeric_csv(in);
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != 1) {
      throw Error("parse-failure", "label file must have one column");
    }
    const double v = row.front();
    if (v != std::floor(v)) {
      throw Error("parse-failure", "label is not an integer");
    }
    labels.push_back(static_cast<int>(v));
  }
  if (labels.empty()) throw Error("parse-failure", "empty label file");
  return labels;
}

std::vector<int> load_labels_file(const std::string& path) {
  auto in = open_in(path);
  return load_labels(in);
}

void save_labels(const std::string& path, const std::vector<int>& labels) {
  auto out = open_out(path);
  for (int label : labels) out << label << '\n';
}

void save_q_csv(const std::string& path, const ProbMatrix& q) {
  auto out = open_out(path);
  for (int i = 0; i < q.num_examples(); ++i) {
    for (int j = 0; j < q.num_classifiers(); ++j) {
      if (j) out << ',';
      write_double(out, q.at(i, j));
    }
    out << '\n';
  }
}

Dataset load_dataset(std::istream& in) {
  const std::vector<std::vector<double>> rows = parse_numeric_csv(in);
  if (rows.empty()) throw Error("parse-failure", "empty dataset");
  const int cols = static_cast<int>(rows.front().size());
  if (cols < 2) {
    throw Error("parse-failure", "dataset needs feature columns plus a label");
  }
  Dataset data;
  data.features.resize(rows.size(), cols - 1);
  data.labels.reserve(rows.size());
  int max_label = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != cols) {
      throw Error("parse-failure", "ragged dataset row");
    }
    for (int d = 0; d < cols - 1; ++d) data.features(i, d) = rows[i][d];
    const double v = rows[i].back();
    if (v != std::floor(v) || v < 1) {
      throw Error("parse-failure", "last column must be an integer label >= 1");
    }
    data.labels.push_back(static_cast<int>(v));
    max_label = std::max(max_label, data.labels.back());
  }
  data.num_classes = max_label;
  validate_dataset(data);
  return data;
}

Dataset load_dataset_file(const std::string& path) {
  auto in = open_in(path);
  return load_dataset(in);
}

void save_dataset(const std::string& path, const Dataset& data) {
  auto out = open_out(path);
  for (int d = 0; d < data.features.cols(); ++d) out << 'x' << d + 1 << ',';
  out << "label\n";
  for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
    for (int d = 0; d < data.features.cols(); ++d) {
      write_double(out, data.features(i, d));
      out << ',';
    }
    out << data.labels[i] << '\n';
  }
}

void write_predictions(std::ostream& out,
                       const std::vector<ClassPosterior>& posteriors) {
  if (posteriors.empty()) throw Error("shape-error", "no posteriors to write");
  const int K = static_cast<int>(posteriors.front().probs.size());
  out << "predicted_label";
  for (int k = 1; k <= K; ++k) out << ",p_" << k;
  out << '\n';
  for (const ClassPosterior& p : posteriors) {
    out << predict(p);
    for (int k = 0; k < K; ++k) {
      out << ',';
      write_double(out, p.probs(k));
    }
    out << '\n';
  }
}

json metrics_to_json(const EvalMetrics& metrics) {
  json confusion = json::array();
  for (Eigen::Index r = 0; r < metrics.confusion.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < metrics.confusion.cols(); ++c) {
      row.push_back(metrics.confusion(r, c));
    }
    confusion.push_back(std::move(row));
  }
  return json{{"accuracy", metrics.accuracy},
              {"mse", metrics.mse},
              {"confusion", std::move(confusion)}};
}

json bound_to_json(const BoundReport& bound) {
  return json{{"B", bound.B},
              {"empirical_loss", bound.empirical_loss},
              {"complexity_term", bound.complexity_term},
              {"confidence_term", bound.confidence_term},
              {"total", bound.total}};
}

}  // namespace codeagg
