#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "mlbench/types.hpp"

namespace mlbench {

struct ConfusionCounts {
  long tp = 0;
  long tn = 0;
  long fp = 0;
  long fn = 0;

  long total() const { return tp + tn + fp + fn; }
};

/// Class 1 is positive.
ConfusionCounts confusion(std::span<const int> predictions, std::span<const int> truth);

/// (tp + tn) / (tp + fp + tn + fn). Throws on length mismatch or empty input.
double accuracy(std::span<const int> predictions, std::span<const int> truth);
double true_positive_rate(const ConfusionCounts& c);
double false_positive_rate(const ConfusionCounts& c);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  /// From (0,0) to (1,1), both coordinates non-decreasing.
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// Sweeps the decision threshold from the highest score down. Each block of
/// tied scores is one step, so ties contribute a diagonal segment; the area
/// is accumulated by the trapezoidal rule. Throws unless both classes occur.
RocCurve roc_curve(std::span<const double> scores, std::span<const int> truth);
inline double roc_auc(std::span<const double> scores, std::span<const int> truth) {
  return roc_curve(scores, truth).auc;
}

/// Two-column CSV with header "fpr,tpr".
void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path);

}  // namespace mlbench
