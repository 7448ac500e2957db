#include "mlbench/classifiers.hpp"

namespace mlbench {

RidgeModel RidgeModel::fit(const Matrix& x, const Labels& y, double alpha) {
  check_training_set(x, y);
  if (!(alpha > 0.0)) throw InvalidArgument("ridge alpha must be positive");
  const Vector t = signed_targets(y);
  const RowVector x_mean = x.colwise().mean();
  const double t_mean = t.mean();
  const Eigen::MatrixXd xc = x.rowwise() - x_mean;

  Eigen::MatrixXd gram = xc.transpose() * xc;
  gram.diagonal().array() += alpha;
  RidgeModel m;
  m.alpha_ = alpha;
  m.w_ = gram.llt().solve(xc.transpose() * (t.array() - t_mean).matrix());
  m.b_ = t_mean - x_mean.dot(m.w_);
  return m;
}

Vector RidgeModel::decision_score(const Matrix& x) const {
  if (x.cols() != w_.size()) throw InvalidArgument("ridge input dimension mismatch");
  return (x * w_).array() + b_;
}

Labels RidgeModel::predict(const Matrix& x) const {
  const Vector s = decision_score(x);
  Labels out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = s[i] >= 0.0 ? 1 : 0;
  return out;
}

nlohmann::json RidgeModel::describe() const {
  return {{"classifier", "ridge"}, {"alpha", alpha_}, {"d", w_.size()}};
}

}  // namespace mlbench
