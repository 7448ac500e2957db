#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mlbench/types.hpp"

namespace mlbench {

/// Feature matrix with binary labels and unique feature names.
struct Dataset {
  Matrix features;
  Labels labels;
  std::vector<std::string> feature_names;
  /// Raw label values mapped to 0 and 1, in that order.
  std::vector<std::string> class_names{"0", "1"};

  int n() const { return static_cast<int>(features.rows()); }
  int d() const { return static_cast<int>(features.cols()); }

  /// Throws InvalidArgument unless shapes agree, n >= 2, d >= 1, labels are
  /// in {0,1}, values are finite and names are unique.
  void validate() const;
};

/// Reads a comma-separated file with a header row. The column named
/// `label_column` must hold exactly two distinct values; they map to 0 and 1
/// in lexicographic order. Every other column is parsed as a real number.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column);

/// Writes `data` in the format accepted by load_csv, label column last.
void save_csv(const Dataset& data, const std::filesystem::path& path,
              const std::string& label_column = "label");

/// Per-column z-scoring fitted on training rows.
class Standardizer {
 public:
  /// Column means and population standard deviations; constant columns get
  /// a divisor of 1.
  static Standardizer fit(const Matrix& train);

  Matrix transform(const Matrix& x) const;

  const Vector& means() const { return means_; }
  const Vector& std_devs() const { return std_devs_; }

 private:
  Vector means_;
  Vector std_devs_;
};

inline Standardizer fit_standardizer(const Dataset& train) { return Standardizer::fit(train.features); }

/// Assignment of every sample to one of k folds.
struct FoldPlan {
  std::vector<int> fold_assignments;
  std::uint64_t seed = 0;
  int k = 5;

  int n() const { return static_cast<int>(fold_assignments.size()); }
  /// Indices in fold t, ascending.
  std::vector<int> test_indices(int t) const;
  /// Indices outside fold t, ascending.
  std::vector<int> train_indices(int t) const;
};

/// Stratified random partition: each class is shuffled and dealt round-robin
/// over the folds, continuing from where the previous class stopped. Fold
/// sizes and per-class fold counts then differ by at most one.
FoldPlan make_folds(const Labels& labels, int k, std::uint64_t seed);

}  // namespace mlbench
