#include "mlbench/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace mlbench {

ConfusionCounts confusion(std::span<const int> predictions, std::span<const int> truth) {
  if (predictions.size() != truth.size()) throw InvalidArgument("prediction and truth lengths differ");
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool pred = predictions[i] == 1;
    const bool pos = truth[i] == 1;
    if (pred && pos) ++c.tp;
    else if (pred) ++c.fp;
    else if (pos) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double accuracy(std::span<const int> predictions, std::span<const int> truth) {
  if (truth.empty()) throw InvalidArgument("accuracy of an empty set");
  const ConfusionCounts c = confusion(predictions, truth);
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.tp + c.fp + c.tn + c.fn);
}

double true_positive_rate(const ConfusionCounts& c) {
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double false_positive_rate(const ConfusionCounts& c) {
  return static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> truth) {
  if (scores.size() != truth.size()) throw InvalidArgument("score and truth lengths differ");
  long positives = 0;
  for (int t : truth) positives += t == 1;
  const long negatives = static_cast<long>(truth.size()) - positives;
  if (positives == 0 || negatives == 0) throw InvalidArgument("ROC needs both classes in the truth vector");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  long tp = 0;
  long fp = 0;
  // Twice the area in units of (1/N)(1/P); integer arithmetic keeps the sum exact.
  long long twice_area = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    long block_tp = 0;
    long block_fp = 0;
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      if (truth[order[i]] == 1) ++block_tp;
      else ++block_fp;
    }
    twice_area += static_cast<long long>(block_fp) * (2 * tp + block_tp);
    tp += block_tp;
    fp += block_fp;
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives)});
  }
  curve.auc = static_cast<double>(twice_area) / (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
  return curve;
}

void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "fpr,tpr\n";
  char buf[64];
  for (const auto& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.fpr, p.tpr);
    out << buf;
  }
}

}  // namespace mlbench
