#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlbench/classifiers.hpp"
#include "mlbench/dataset.hpp"
#include "mlbench/dimreduce.hpp"

namespace mlbench {

enum class Objective { accuracy, auc };

std::string to_string(Objective objective);
Objective parse_objective(const std::string& name);

struct ReducerConfig {
  ReducerKind kind = ReducerKind::none;
  /// Requested output dimension; ignored for ReducerKind::none.
  int s = 0;
};

struct PreprocessConfig {
  ReducerConfig reducer;
  /// z-score columns with statistics of the training rows.
  bool standardize = true;
  /// Fit the standardizer and reducer on every row, test folds included.
  /// Reproduces the whole-set variant for comparison only.
  bool leaky_reduction = false;
};

/// Train/test matrices of one fold after standardization and reduction.
struct PreparedFold {
  int fold = 0;
  Matrix train_x;
  Matrix test_x;
  Labels train_y;
  Labels test_y;
  std::optional<Standardizer> standardizer;
  FittedReducer reducer;
};

/// Fits the preprocessing chain on D \ D_t for every fold t and applies it to
/// both sides. Nothing from D_t reaches a fit unless leaky_reduction is set.
std::vector<PreparedFold> prepare_folds(const Dataset& data, const FoldPlan& plan, const PreprocessConfig& config);

/// Builds a trained model from a fold's training part and a seed.
using FitFunction = std::function<std::unique_ptr<Classifier>(const Matrix&, const Labels&, std::uint64_t)>;

FitFunction make_fit_function(ClassifierId id, const HyperParams& params);

/// Fit failure tagged with the fold it happened in.
class FoldError : public std::runtime_error {
 public:
  FoldError(int fold, const std::string& what)
      : std::runtime_error("fold " + std::to_string(fold) + ": " + what), fold_(fold) {}
  int fold() const { return fold_; }

 private:
  int fold_;
};

/// Both measures on every test fold.
struct FoldScores {
  std::vector<double> accuracy;
  std::vector<double> auc;

  const std::vector<double>& get(Objective objective) const {
    return objective == Objective::accuracy ? accuracy : auc;
  }
};

struct EvaluateOptions {
  std::uint64_t seed = 0;
  /// Score on the training part instead of the held-out fold (leakage canary).
  bool score_on_training_part = false;
};

/// Trains one model per fold and scores it. Throws FoldError.
FoldScores evaluate_folds(const std::vector<PreparedFold>& folds, const FitFunction& fit, const EvaluateOptions& options);

/// Seed handed to the classifier of fold t.
std::uint64_t fold_seed(std::uint64_t seed, int fold);

struct CvResult {
  std::vector<double> fold_scores;
  double mean = 0.0;
  HyperParams chosen;
  Objective objective = Objective::accuracy;
  /// Number of hyperparameter points cross-validated to produce this result.
  std::size_t evaluations = 1;
};

/// Arithmetic mean, summed in fold order.
double mean_of(const std::vector<double>& v);

struct PipelineConfig {
  PreprocessConfig preprocess;
  ClassifierId classifier = ClassifierId::gnb;
  HyperParams params;
  Objective objective = Objective::accuracy;
  EvaluateOptions evaluate;
};

CvResult cross_validate(const Dataset& data, const FoldPlan& plan, const PipelineConfig& config);

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

/// Hyperparameter grid. A grid without axes has exactly one (empty) point.
struct GridSpec {
  ClassifierId classifier = ClassifierId::gnb;
  std::vector<GridAxis> axes;

  std::size_t size() const;
  /// Cartesian product, first axis outermost.
  std::vector<HyperParams> points() const;
  /// e.g. "svm_rbf: gamma(13) x C(9) = 117 evaluations"
  std::string summary() const;
};

/// Default grids: k-NN k in {3..15 odd}; ridge alpha in {0.1, 1, 10};
/// SVM C in {1e0..1e8}; SVM-RBF gamma in {1e-10..1e2} x C in {1e0..1e8};
/// RF n_trees in {2, 4, 8, 16, 32}; GNB and LDA have no axes.
GridSpec default_grid(ClassifierId id);

struct GridPointResult {
  HyperParams params;
  std::optional<FoldScores> scores;
  std::string error;
};

struct GridEvaluation {
  std::vector<GridPointResult> points;
};

/// Cross-validates every grid point on the prepared folds; fit failures are
/// recorded per point.
GridEvaluation evaluate_grid(const std::vector<PreparedFold>& folds, const GridSpec& grid, const EvaluateOptions& options);

/// Highest mean objective; ties go to the earliest point. Throws if every point failed.
CvResult select_best(const GridEvaluation& evaluation, Objective objective);

CvResult grid_search(const Dataset& data, const FoldPlan& plan, const GridSpec& grid, const PreprocessConfig& preprocess,
                     Objective objective, const EvaluateOptions& options = {});

}  // namespace mlbench
