#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlbench/types.hpp"

namespace mlbench {

enum class ClassifierId { knn, gnb, lda, ridge, svm_linear, svm_rbf, rf };

inline constexpr ClassifierId kAllClassifiers[] = {ClassifierId::knn,   ClassifierId::gnb,        ClassifierId::lda,
                                                   ClassifierId::ridge, ClassifierId::svm_linear, ClassifierId::svm_rbf,
                                                   ClassifierId::rf};

std::string to_string(ClassifierId id);
ClassifierId parse_classifier(const std::string& name);

/// Hyperparameter name -> value, e.g. {"C": 10, "gamma": 0.01}.
using HyperParams = std::map<std::string, double>;

/// A trained binary model. Larger decision scores lean towards class 1.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual Vector decision_score(const Matrix& x) const = 0;
  virtual Labels predict(const Matrix& x) const = 0;
  /// Score above which predict() answers 1: 0.5 for probability-like scores, 0 for margins.
  virtual double threshold() const = 0;
  /// Hyperparameters, dimensions and model-size summary.
  virtual nlohmann::json describe() const = 0;
};

/// Fits `id` with the given hyperparameters; `seed` feeds stochastic models only.
std::unique_ptr<Classifier> fit_classifier(ClassifierId id, const Matrix& x, const Labels& y,
                                           const HyperParams& params, std::uint64_t seed);

/// k-nearest neighbours under Euclidean distance. Equidistant neighbours are
/// ordered by training-row index.
class KnnModel final : public Classifier {
 public:
  static KnnModel fit(const Matrix& x, const Labels& y, int k);

  /// Fraction of the k nearest neighbours labelled 1.
  Vector decision_score(const Matrix& x) const override;
  Labels predict(const Matrix& x) const override;
  double threshold() const override { return 0.5; }
  nlohmann::json describe() const override;

  /// Training-row indices of the k nearest neighbours of `query`, nearest first.
  std::vector<int> neighbours(const RowVector& query) const;
  int k() const { return k_; }

 private:
  Matrix reference_;
  Labels labels_;
  int k_ = 1;
};

/// Gaussian naive Bayes evaluated in log space.
class GnbModel final : public Classifier {
 public:
  /// Each class needs at least 2 samples. Variances are floored at
  /// kVarianceFloor times the largest overall feature variance.
  static GnbModel fit(const Matrix& x, const Labels& y);
  static constexpr double kVarianceFloor = 1e-9;

  /// Posterior P(class 1 | x).
  Vector decision_score(const Matrix& x) const override;
  Labels predict(const Matrix& x) const override;
  double threshold() const override { return 0.5; }
  nlohmann::json describe() const override;

  /// log P(class c) + sum_i log p(x_i | class c) for one sample.
  double log_joint(const RowVector& x, int c) const;

  const Eigen::Vector2d& priors() const { return priors_; }
  const Eigen::MatrixXd& means() const { return means_; }
  const Eigen::MatrixXd& variances() const { return variances_; }

 private:
  Eigen::Vector2d priors_;
  Eigen::MatrixXd means_;      // 2 x d
  Eigen::MatrixXd variances_;  // 2 x d
};

/// Two-class linear discriminant with a shared covariance matrix.
///
/// w = (S + eps * trace(S)/d * I)^-1 (mu1 - mu0) with S the pooled
/// within-class covariance, and b = -w.(mu0 + mu1)/2 + log(P1/P0).
class LdaModel final : public Classifier {
 public:
  static LdaModel fit(const Matrix& x, const Labels& y);
  static constexpr double kShrinkage = 1e-6;

  /// w.x + b
  Vector decision_score(const Matrix& x) const override;
  Labels predict(const Matrix& x) const override;
  double threshold() const override { return 0.0; }
  nlohmann::json describe() const override;

  const Vector& weights() const { return w_; }
  double bias() const { return b_; }
  const Eigen::MatrixXd& pooled_covariance() const { return pooled_; }

 private:
  Vector w_;
  double b_ = 0.0;
  Eigen::MatrixXd means_;  // 2 x d
  Eigen::MatrixXd pooled_;
};

/// Ridge regression on +-1 targets with an unpenalised intercept.
class RidgeModel final : public Classifier {
 public:
  static RidgeModel fit(const Matrix& x, const Labels& y, double alpha);

  /// w.x + b; a score of exactly 0 predicts class 1.
  Vector decision_score(const Matrix& x) const override;
  Labels predict(const Matrix& x) const override;
  double threshold() const override { return 0.0; }
  nlohmann::json describe() const override;

  const Vector& weights() const { return w_; }
  double bias() const { return b_; }
  double alpha() const { return alpha_; }

 private:
  Vector w_;
  double b_ = 0.0;
  double alpha_ = 1.0;
};

enum class KernelKind { linear, rbf };

struct Kernel {
  KernelKind kind = KernelKind::linear;
  double gamma = 1.0;

  double operator()(const RowVector& a, const RowVector& b) const;
  /// Full Gram matrix between the rows of a and b.
  Eigen::MatrixXd gram(const Matrix& a, const Matrix& b) const;
};

struct SvmOptions {
  /// Stop once the maximal KKT violation gap drops below this.
  double tolerance = 1e-3;
  long max_updates = 1'000'000;
};

/// Soft-margin SVM trained by SMO with second-order working-set selection.
class SvmModel final : public Classifier {
 public:
  static SvmModel fit(const Matrix& x, const Labels& y, double c, Kernel kernel, SvmOptions options = {});

  /// sum_i alpha_i y_i K(x_i, x) + b
  Vector decision_score(const Matrix& x) const override;
  Labels predict(const Matrix& x) const override;
  double threshold() const override { return 0.0; }
  nlohmann::json describe() const override;

  /// Dual variables for every training sample (zero for non-support vectors).
  const Vector& alphas() const { return alphas_; }
  /// alpha_i * y_i for each support vector, y in {-1, +1}.
  const Vector& dual_coefficients() const { return dual_coef_; }
  const Matrix& support_vectors() const { return support_; }
  const std::vector<int>& support_indices() const { return support_index_; }
  double bias() const { return b_; }
  double c() const { return c_; }
  const Kernel& kernel() const { return kernel_; }
  /// sum(alpha) - 1/2 alpha^T Q alpha at the returned solution.
  double dual_objective() const { return dual_objective_; }
  bool converged() const { return converged_; }
  long updates() const { return updates_; }

 private:
  Kernel kernel_;
  double c_ = 1.0;
  Vector alphas_;
  Vector dual_coef_;
  Matrix support_;
  std::vector<int> support_index_;
  double b_ = 0.0;
  double dual_objective_ = 0.0;
  bool converged_ = false;
  long updates_ = 0;
};

struct TreeNode {
  /// -1 for leaves.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  /// Fraction of class-1 samples that reached the node during training.
  double positive_fraction = 0.0;
  int samples = 0;
  /// Impurity decrease of the chosen split.
  double gain = 0.0;
  /// Features considered for the split, ascending.
  std::vector<int> candidates;

  bool is_leaf() const { return feature < 0; }
};

/// CART tree with Gini impurity; node 0 is the root.
struct DecisionTree {
  std::vector<TreeNode> nodes;

  /// Leaf reached by x: go left when x[feature] <= threshold.
  const TreeNode& leaf(const RowVector& x) const;
  int vote(const RowVector& x) const { return leaf(x).positive_fraction > 0.5 ? 1 : 0; }
};

struct ForestOptions {
  /// Draw n rows with replacement per tree.
  bool bootstrap = true;
  /// Candidate features per split; 0 means ceil(sqrt(d)).
  int max_features = 0;
};

/// Gini impurity 1 - p^2 - (1-p)^2 of a node holding `positives` of `total`.
double gini_impurity(double positives, double total);

/// Bagged random-subspace CART forest.
class ForestModel final : public Classifier {
 public:
  static ForestModel fit(const Matrix& x, const Labels& y, int n_trees, std::uint64_t seed,
                         ForestOptions options = {});

  /// Fraction of trees voting class 1.
  Vector decision_score(const Matrix& x) const override;
  Labels predict(const Matrix& x) const override;
  double threshold() const override { return 0.5; }
  nlohmann::json describe() const override;

  const std::vector<DecisionTree>& trees() const { return trees_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::vector<DecisionTree> trees_;
  std::uint64_t seed_ = 0;
  int d_ = 0;
};

/// Labels in {-1, +1} from {0, 1}.
Vector signed_targets(const Labels& y);

/// Throws InvalidArgument on size mismatch, bad labels or a missing class.
void check_training_set(const Matrix& x, const Labels& y);

}  // namespace mlbench
