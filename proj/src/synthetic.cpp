#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "mlbench/rng.hpp"
#include "mlbench/runner.hpp"

namespace mlbench {

SyntheticDataset make_synthetic(int n, int d, int n_informative, double separation, std::uint64_t seed) {
  if (n < 10) throw InvalidArgument("synthetic data needs n >= 10");
  if (d < 1) throw InvalidArgument("synthetic data needs d >= 1");
  if (n_informative < 0 || n_informative > d) throw InvalidArgument("informative feature count outside [0, d]");
  if (!std::isfinite(separation) || separation < 0.0) throw InvalidArgument("separation must be finite and non-negative");

  Labels labels(static_cast<std::size_t>(n), 0);
  std::fill(labels.begin() + n / 2, labels.end(), 1);
  RngStream row_rng(seed, "synth/rows");
  row_rng.shuffle(labels);

  Matrix raw(n, d);
  RngStream value_rng(seed, "synth/values");
  for (int i = 0; i < n; ++i) {
    const double shift = (labels[static_cast<std::size_t>(i)] == 1 ? 0.5 : -0.5) * separation;
    for (int j = 0; j < d; ++j) raw(i, j) = value_rng.normal() + (j < n_informative ? shift : 0.0);
  }

  // Column j of the output holds raw column perm[j].
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  RngStream column_rng(seed, "synth/columns");
  column_rng.shuffle(perm);

  SyntheticDataset out;
  out.data.features.resize(n, d);
  for (int j = 0; j < d; ++j) {
    out.data.features.col(j) = raw.col(perm[static_cast<std::size_t>(j)]);
    if (perm[static_cast<std::size_t>(j)] < n_informative) out.informative_columns.push_back(j);
    char name[16];
    std::snprintf(name, sizeof name, "f%03d", j);
    out.data.feature_names.emplace_back(name);
  }
  out.data.labels = std::move(labels);
  out.data.class_names = {"0", "1"};
  return out;
}

}  // namespace mlbench
