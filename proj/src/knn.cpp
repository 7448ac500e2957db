#include <algorithm>
#include <numeric>

#include "mlbench/classifiers.hpp"

namespace mlbench {

KnnModel KnnModel::fit(const Matrix& x, const Labels& y, int k) {
  check_training_set(x, y);
  if (k < 1 || k % 2 == 0) throw InvalidArgument("k-NN needs a positive odd k, got " + std::to_string(k));
  if (k > x.rows())
    throw InvalidArgument("k-NN k = " + std::to_string(k) + " exceeds " + std::to_string(x.rows()) + " training rows");
  KnnModel m;
  m.reference_ = x;
  m.labels_ = y;
  m.k_ = k;
  return m;
}

std::vector<int> KnnModel::neighbours(const RowVector& query) const {
  if (query.size() != reference_.cols()) throw InvalidArgument("k-NN query dimension mismatch");
  const Vector dist = (reference_.rowwise() - query).rowwise().squaredNorm();
  std::vector<int> idx(static_cast<std::size_t>(reference_.rows()));
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + k_, idx.end(), [&](int a, int b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
  });
  idx.resize(static_cast<std::size_t>(k_));
  return idx;
}

Vector KnnModel::decision_score(const Matrix& x) const {
  Vector s(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int votes = 0;
    for (int j : neighbours(x.row(i))) votes += labels_[static_cast<std::size_t>(j)];
    s[i] = static_cast<double>(votes) / k_;
  }
  return s;
}

Labels KnnModel::predict(const Matrix& x) const {
  const Vector s = decision_score(x);
  Labels out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = s[i] > 0.5 ? 1 : 0;
  return out;
}

nlohmann::json KnnModel::describe() const {
  return {{"classifier", "knn"}, {"k", k_}, {"reference_points", reference_.rows()}, {"d", reference_.cols()}};
}

}  // namespace mlbench
