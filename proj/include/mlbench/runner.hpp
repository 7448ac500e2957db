#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlbench/classifiers.hpp"
#include "mlbench/dataset.hpp"
#include "mlbench/dimreduce.hpp"
#include "mlbench/modelselect.hpp"

namespace mlbench {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Synthetic two-class data with a known set of informative columns.
struct SyntheticDataset {
  Dataset data;
  /// Ascending column indices whose class means differ.
  std::vector<int> informative_columns;
};

/// Balanced classes. Informative columns are N(+-separation/2, 1) by class,
/// the rest N(0, 1); columns are then permuted deterministically.
SyntheticDataset make_synthetic(int n, int d, int n_informative, double separation, std::uint64_t seed);

struct ExperimentConfig {
  std::string data_path;
  std::string label_column = "label";
  std::uint64_t seed = 0;
  std::vector<int> s_values{3, 6, 12, 24, 48, 92, 184};
  std::vector<ReducerKind> reducers{ReducerKind::anova, ReducerKind::pca};
  std::vector<ClassifierId> classifiers{std::begin(kAllClassifiers), std::end(kAllClassifiers)};
  std::vector<Objective> objectives{Objective::accuracy, Objective::auc};
  bool standardize = true;
  bool leaky_reduction = false;
  std::string output_dir = "results";

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& doc);
  /// Throws InvalidArgument for empty axes or s outside [1, d].
  void validate(int d) const;
};

struct ReportRow {
  ReducerKind reducer = ReducerKind::none;
  int s = 0;
  /// Smallest output dimension across folds (PCA may keep fewer axes than s).
  int effective_s = 0;
  ClassifierId classifier = ClassifierId::gnb;
  Objective objective = Objective::accuracy;
  std::vector<double> fold_scores;
  double mean = 0.0;
  HyperParams chosen;
  std::size_t evaluations = 0;
  double wall_ms = 0.0;
  /// Empty on success.
  std::string error;

  bool ok() const { return error.empty(); }
};

struct EvaluationReport {
  ExperimentConfig config;
  std::string version = kToolkitVersion;
  /// Sorted by (reducer, objective, classifier, s).
  std::vector<ReportRow> rows;
  /// One GridSpec::summary() line per classifier.
  std::vector<std::string> grid_log;

  bool has_failures() const;
};

/// Worker count: MLBENCH_WORKERS if set and positive, else the hardware concurrency.
int default_workers();

/// Sweeps reducers x s x classifiers x objectives on `data`. Per-combination
/// failures are recorded in the row, never thrown.
EvaluationReport run_experiment(const ExperimentConfig& config, const Dataset& data, int workers = 0);

/// Loads config.data_path first.
EvaluationReport run_experiment(const ExperimentConfig& config, int workers = 0);

/// Writes report.csv, config.json and grids.txt (deterministic for a given
/// config) plus timings.csv (wall-clock, varies between runs).
void write_report(const EvaluationReport& report, const std::filesystem::path& dir);

/// Parses a report.csv written by write_report.
std::vector<ReportRow> read_report_csv(const std::filesystem::path& path);

/// One CSV per (reducer, objective): rows are s values, columns classifiers,
/// cells the mean score. Returns the written paths.
std::vector<std::filesystem::path> export_figure_data(const std::vector<ReportRow>& rows,
                                                      const std::filesystem::path& dir);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

}  // namespace mlbench
