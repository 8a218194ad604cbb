#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsage/binning.hpp"
#include "qsage/matrix.hpp"

namespace qsage {

enum class Family { linear, knn, logistic, random_forest, hgb };
enum class Task { regression, classification };

std::string family_name(Family family);
std::string task_name(Task task);
Family family_from_name(const std::string& name);
Task task_from_name(const std::string& name);

// Declarative model description. Every fit is a pure function of
// (data, spec), so carrying the spec around is enough to reproduce a model.
struct ModelSpec {
  Family family = Family::hgb;
  Task task = Task::regression;
  std::uint64_t seed = 0;

  // hgb
  int max_iterations = 500;
  int max_depth = 9;
  double learning_rate = 0.1;
  int max_bins = 255;
  int min_samples_leaf = 20;
  // knn
  int k = 5;
  // random_forest
  int n_trees = 100;
  double feature_subsample = 1.0;  // fraction of features tried per split
  // logistic
  double l2_penalty = 1e-4;
  int max_epochs = 500;
  double step_size = 0.1;

  // Throws ConfigError on out-of-range values.
  void validate() const;

  bool operator==(const ModelSpec&) const = default;
};

// A fitted, immutable predictor. Regression models answer predict();
// classification models answer predict_class() / predict_proba() over the
// bin indices seen at training time (classes(), ascending).
class Model {
 public:
  virtual ~Model() = default;

  const ModelSpec& spec() const { return spec_; }
  Task task() const { return spec_.task; }
  std::size_t feature_count() const { return feature_count_; }
  const std::vector<int>& classes() const { return classes_; }
  const std::optional<BinSpec>& bin_spec() const { return bin_spec_; }

  // Raw real-valued minutes; callers clamp to >= 0 for display, metrics use
  // the raw values.
  std::vector<double> predict(const Matrix& x) const;
  double predict_one(std::span<const double> row) const;

  // Predicted bin index; argmax probability, ties resolved to the smallest
  // bin index.
  std::vector<int> predict_class(const Matrix& x) const;
  int predict_class_one(std::span<const double> row) const;
  // One row per sample, one column per entry of classes(); rows sum to 1.
  Matrix predict_proba(const Matrix& x) const;

 protected:
  Model(ModelSpec spec, std::size_t feature_count)
      : spec_(spec), feature_count_(feature_count) {}

  virtual double predict_row(std::span<const double> row) const;
  virtual std::vector<double> proba_row(std::span<const double> row) const;

  void check_width(std::size_t cols) const;

  ModelSpec spec_;
  std::size_t feature_count_ = 0;
  std::vector<int> classes_;
  std::optional<BinSpec> bin_spec_;
};

// Fits a model of spec.family. `y` holds real labels for regression and
// bin indices (as doubles) for classification.
std::unique_ptr<Model> fit_model(const ModelSpec& spec, const Matrix& x,
                                 const std::vector<double>& y,
                                 std::optional<BinSpec> bins = std::nullopt);

}  // namespace qsage
