#include "qsage/model.hpp"

#include <stdexcept>

#include "qsage/errors.hpp"
#include "qsage/hgb.hpp"
#include "qsage/knn.hpp"
#include "qsage/linear.hpp"
#include "qsage/logistic.hpp"
#include "qsage/random_forest.hpp"

namespace qsage {

std::string family_name(Family family) {
  switch (family) {
    case Family::linear: return "linear";
    case Family::knn: return "knn";
    case Family::logistic: return "logistic";
    case Family::random_forest: return "random_forest";
    case Family::hgb: return "hgb";
  }
  return "?";
}

std::string task_name(Task task) {
  return task == Task::regression ? "regression" : "classification";
}

Family family_from_name(const std::string& name) {
  if (name == "linear") return Family::linear;
  if (name == "knn") return Family::knn;
  if (name == "logistic") return Family::logistic;
  if (name == "random_forest") return Family::random_forest;
  if (name == "hgb") return Family::hgb;
  throw ConfigError("unknown model family '" + name + "'");
}

Task task_from_name(const std::string& name) {
  if (name == "regression") return Task::regression;
  if (name == "classification") return Task::classification;
  throw ConfigError("unknown task '" + name + "'");
}

void ModelSpec::validate() const {
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
  if (max_bins < 2 || max_bins > 255) throw ConfigError("max_bins must be in [2, 255]");
  if (min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (n_trees < 1) throw ConfigError("n_trees must be >= 1");
  if (feature_subsample <= 0.0 || feature_subsample > 1.0)
    throw ConfigError("feature_subsample must be in (0, 1]");
  if (learning_rate <= 0.0) throw ConfigError("learning_rate must be > 0");
  if (l2_penalty < 0.0) throw ConfigError("l2_penalty must be >= 0");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (step_size <= 0.0) throw ConfigError("step_size must be > 0");

  const bool classifies = family == Family::logistic || family == Family::random_forest;
  if (classifies && task != Task::classification)
    throw ConfigError(family_name(family) + " supports classification only");
  if (family == Family::linear && task != Task::regression)
    throw ConfigError("linear supports regression only");
}

void Model::check_width(std::size_t cols) const {
  if (cols != feature_count_)
    throw std::invalid_argument("predict: expected " + std::to_string(feature_count_) +
                                " features, got " + std::to_string(cols));
}

double Model::predict_row(std::span<const double>) const {
  throw std::logic_error("model family does not support regression");
}

std::vector<double> Model::proba_row(std::span<const double>) const {
  throw std::logic_error("model family does not support classification");
}

std::vector<double> Model::predict(const Matrix& x) const {
  if (task() != Task::regression)
    throw std::logic_error("predict() called on a classification model");
  check_width(x.cols());
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_row(x.row(i));
  return out;
}

double Model::predict_one(std::span<const double> row) const {
  if (task() != Task::regression)
    throw std::logic_error("predict_one() called on a classification model");
  check_width(row.size());
  return predict_row(row);
}

int Model::predict_class_one(std::span<const double> row) const {
  if (task() != Task::classification)
    throw std::logic_error("predict_class() called on a regression model");
  check_width(row.size());
  const std::vector<double> p = proba_row(row);
  std::size_t best = 0;
  for (std::size_t c = 1; c < p.size(); ++c)
    if (p[c] > p[best]) best = c;  // ties keep the smaller bin index
  return classes_[best];
}

std::vector<int> Model::predict_class(const Matrix& x) const {
  if (task() != Task::classification)
    throw std::logic_error("predict_class() called on a regression model");
  check_width(x.cols());
  std::vector<int> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_class_one(x.row(i));
  return out;
}

Matrix Model::predict_proba(const Matrix& x) const {
  if (task() != Task::classification)
    throw std::logic_error("predict_proba() called on a regression model");
  check_width(x.cols());
  Matrix out(x.rows(), classes_.size());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const std::vector<double> p = proba_row(x.row(i));
    for (std::size_t c = 0; c < p.size(); ++c) out.at(i, c) = p[c];
  }
  return out;
}

std::unique_ptr<Model> fit_model(const ModelSpec& spec, const Matrix& x,
                                 const std::vector<double>& y,
                                 std::optional<BinSpec> bins) {
  spec.validate();
  if (x.rows() != y.size())
    throw std::invalid_argument("fit_model: row/label count mismatch");
  if (x.rows() == 0) throw std::invalid_argument("fit_model: empty training data");

  if (spec.task == Task::classification) {
    std::vector<int> labels(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) labels[i] = static_cast<int>(y[i]);
    switch (spec.family) {
      case Family::knn: return fit_knn_classifier(spec, x, labels, bins);
      case Family::logistic: return fit_logistic(spec, x, labels, bins);
      case Family::random_forest: return fit_random_forest(spec, x, labels, bins);
      case Family::hgb: return fit_hgb_classifier(spec, x, labels, bins);
      default: throw ConfigError("family does not support classification");
    }
  }
  switch (spec.family) {
    case Family::linear: return fit_linear(spec, x, y);
    case Family::knn: return fit_knn_regressor(spec, x, y);
    case Family::hgb: return fit_hgb_regressor(spec, x, y);
    default: throw ConfigError("family does not support regression");
  }
}

}  // namespace qsage
