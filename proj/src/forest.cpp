#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mlbench/classifiers.hpp"
#include "mlbench/rng.hpp"

namespace mlbench {

double gini_impurity(double positives, double total) {
  if (total <= 0.0) return 0.0;
  const double p = positives / total;
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

const TreeNode& DecisionTree::leaf(const RowVector& x) const {
  const TreeNode* node = &nodes.front();
  while (!node->is_leaf())
    node = &nodes[static_cast<std::size_t>(x[node->feature] <= node->threshold ? node->left : node->right)];
  return *node;
}

namespace {

// Splits that beat the incumbent by less than this count as ties; the
// earlier (lower feature, lower threshold) split is kept.
constexpr double kGainTieTolerance = 1e-12;

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const Labels& y, int max_features, RngStream& rng)
      : x_(x), y_(y), max_features_(max_features), rng_(rng) {
    features_.resize(static_cast<std::size_t>(x.cols()));
    std::iota(features_.begin(), features_.end(), 0);
  }

  DecisionTree build(std::vector<int> rows) {
    tree_.nodes.clear();
    grow(std::move(rows));
    return std::move(tree_);
  }

 private:
  int grow(std::vector<int> rows) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    int positives = 0;
    for (int r : rows) positives += y_[static_cast<std::size_t>(r)];
    const int total = static_cast<int>(rows.size());
    {
      TreeNode& node = tree_.nodes.back();
      node.samples = total;
      node.positive_fraction = total > 0 ? static_cast<double>(positives) / total : 0.0;
    }
    if (total < 2 || positives == 0 || positives == total) return id;

    // Random subspace: partial Fisher-Yates over the feature list.
    const int d = static_cast<int>(features_.size());
    for (int k = 0; k < max_features_; ++k) {
      const int pick = k + static_cast<int>(rng_.uniform_index(static_cast<std::uint64_t>(d - k)));
      std::swap(features_[static_cast<std::size_t>(k)], features_[static_cast<std::size_t>(pick)]);
    }
    std::vector<int> candidates(features_.begin(), features_.begin() + max_features_);
    std::sort(candidates.begin(), candidates.end());

    const double parent = gini_impurity(positives, total);
    double best_gain = -std::numeric_limits<double>::infinity();
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::pair<double, int>> column(rows.size());
    for (int f : candidates) {
      for (std::size_t i = 0; i < rows.size(); ++i)
        column[i] = {x_(rows[i], f), y_[static_cast<std::size_t>(rows[i])]};
      std::sort(column.begin(), column.end());
      int left_pos = 0;
      for (int i = 0; i + 1 < total; ++i) {
        left_pos += column[static_cast<std::size_t>(i)].second;
        const double lo = column[static_cast<std::size_t>(i)].first;
        const double hi = column[static_cast<std::size_t>(i) + 1].first;
        if (!(lo < hi)) continue;
        const int left_n = i + 1;
        const int right_n = total - left_n;
        const double children = (left_n * gini_impurity(left_pos, left_n) +
                                 right_n * gini_impurity(positives - left_pos, right_n)) /
                                total;
        const double gain = parent - children;
        if (gain > best_gain + kGainTieTolerance) {
          best_gain = gain;
          best_feature = f;
          double mid = lo + 0.5 * (hi - lo);
          if (!(mid < hi)) mid = lo;
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<int> left_rows;
    std::vector<int> right_rows;
    for (int r : rows) (x_(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    const int left = grow(std::move(left_rows));
    const int right = grow(std::move(right_rows));
    TreeNode& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = right;
    node.gain = best_gain;
    node.candidates = std::move(candidates);
    return id;
  }

  const Matrix& x_;
  const Labels& y_;
  int max_features_;
  RngStream& rng_;
  std::vector<int> features_;
  DecisionTree tree_;
};

}  // namespace

ForestModel ForestModel::fit(const Matrix& x, const Labels& y, int n_trees, std::uint64_t seed,
                             ForestOptions options) {
  check_training_set(x, y);
  if (n_trees < 1) throw InvalidArgument("random forest needs at least one tree");
  const int d = static_cast<int>(x.cols());
  const int n = static_cast<int>(x.rows());
  int max_features = options.max_features > 0 ? std::min(options.max_features, d)
                                              : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));
  max_features = std::clamp(max_features, 1, d);

  ForestModel m;
  m.seed_ = seed;
  m.d_ = d;
  const RngStream root(seed, "forest");
  for (int t = 0; t < n_trees; ++t) {
    RngStream rng = root.fork("tree" + std::to_string(t));
    std::vector<int> rows(static_cast<std::size_t>(n));
    if (options.bootstrap) {
      for (auto& r : rows) r = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    TreeBuilder builder(x, y, max_features, rng);
    m.trees_.push_back(builder.build(std::move(rows)));
  }
  return m;
}

Vector ForestModel::decision_score(const Matrix& x) const {
  if (x.cols() != d_) throw InvalidArgument("random forest input dimension mismatch");
  Vector s(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int votes = 0;
    for (const auto& tree : trees_) votes += tree.vote(x.row(i));
    s[i] = static_cast<double>(votes) / static_cast<double>(trees_.size());
  }
  return s;
}

Labels ForestModel::predict(const Matrix& x) const {
  const Vector s = decision_score(x);
  Labels out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = s[i] > 0.5 ? 1 : 0;
  return out;
}

nlohmann::json ForestModel::describe() const {
  std::size_t nodes = 0;
  for (const auto& t : trees_) nodes += t.nodes.size();
  return {{"classifier", "rf"}, {"n_trees", trees_.size()}, {"nodes", nodes}, {"d", d_}};
}

}  // namespace mlbench
