#include "mlbench/classifiers.hpp"

#include <cmath>

namespace mlbench {

std::string to_string(ClassifierId id) {
  switch (id) {
    case ClassifierId::knn: return "knn";
    case ClassifierId::gnb: return "gnb";
    case ClassifierId::lda: return "lda";
    case ClassifierId::ridge: return "ridge";
    case ClassifierId::svm_linear: return "svm_linear";
    case ClassifierId::svm_rbf: return "svm_rbf";
    case ClassifierId::rf: return "rf";
  }
  return "?";
}

ClassifierId parse_classifier(const std::string& name) {
  for (ClassifierId id : kAllClassifiers)
    if (to_string(id) == name) return id;
  throw InvalidArgument("unknown classifier '" + name + "'");
}

Vector signed_targets(const Labels& y) {
  Vector t(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) t[static_cast<Eigen::Index>(i)] = y[i] == 1 ? 1.0 : -1.0;
  return t;
}

void check_training_set(const Matrix& x, const Labels& y) {
  if (x.rows() != static_cast<Eigen::Index>(y.size())) throw InvalidArgument("label count does not match row count");
  if (x.cols() < 1) throw InvalidArgument("training set has no features");
  int pos = 0;
  for (int v : y) {
    if (v != 0 && v != 1) throw InvalidArgument("labels must be 0 or 1");
    pos += v;
  }
  if (pos == 0 || pos == static_cast<int>(y.size())) throw InvalidArgument("training set holds a single class");
}

namespace {

double require(const HyperParams& params, const std::string& name, ClassifierId id) {
  const auto it = params.find(name);
  if (it == params.end()) throw InvalidArgument(to_string(id) + " requires hyperparameter '" + name + "'");
  return it->second;
}

int require_int(const HyperParams& params, const std::string& name, ClassifierId id) {
  const double v = require(params, name, id);
  if (v != std::floor(v)) throw InvalidArgument(to_string(id) + " hyperparameter '" + name + "' must be an integer");
  return static_cast<int>(v);
}

}  // namespace

std::unique_ptr<Classifier> fit_classifier(ClassifierId id, const Matrix& x, const Labels& y,
                                           const HyperParams& params, std::uint64_t seed) {
  switch (id) {
    case ClassifierId::knn:
      return std::make_unique<KnnModel>(KnnModel::fit(x, y, require_int(params, "k", id)));
    case ClassifierId::gnb:
      return std::make_unique<GnbModel>(GnbModel::fit(x, y));
    case ClassifierId::lda:
      return std::make_unique<LdaModel>(LdaModel::fit(x, y));
    case ClassifierId::ridge:
      return std::make_unique<RidgeModel>(RidgeModel::fit(x, y, require(params, "alpha", id)));
    case ClassifierId::svm_linear:
      return std::make_unique<SvmModel>(SvmModel::fit(x, y, require(params, "C", id), Kernel{KernelKind::linear}));
    case ClassifierId::svm_rbf:
      return std::make_unique<SvmModel>(
          SvmModel::fit(x, y, require(params, "C", id), Kernel{KernelKind::rbf, require(params, "gamma", id)}));
    case ClassifierId::rf:
      return std::make_unique<ForestModel>(ForestModel::fit(x, y, require_int(params, "n_trees", id), seed));
  }
  throw InvalidArgument("unknown classifier");
}

}  // namespace mlbench
