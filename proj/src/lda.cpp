#include <cmath>

#include "mlbench/classifiers.hpp"

namespace mlbench {

LdaModel LdaModel::fit(const Matrix& x, const Labels& y) {
  check_training_set(x, y);
  const Eigen::Index d = x.cols();
  const Eigen::Index n = x.rows();
  LdaModel m;
  m.means_.setZero(2, d);
  int counts[2] = {0, 0};
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    ++counts[c];
    m.means_.row(c) += x.row(i);
  }
  for (int c = 0; c < 2; ++c) m.means_.row(c) /= counts[c];

  Eigen::MatrixXd centered(n, d);
  for (Eigen::Index i = 0; i < n; ++i) centered.row(i) = x.row(i) - m.means_.row(y[static_cast<std::size_t>(i)]);
  const double dof = n > 2 ? static_cast<double>(n - 2) : 1.0;
  m.pooled_ = (centered.transpose() * centered) / dof;

  const double trace = m.pooled_.trace();
  const double ridge = kShrinkage * (trace > 0.0 ? trace / static_cast<double>(d) : 1.0);
  Eigen::MatrixXd reg = m.pooled_;
  reg.diagonal().array() += ridge;

  const Vector diff = (m.means_.row(1) - m.means_.row(0)).transpose();
  m.w_ = reg.ldlt().solve(diff);
  const double mid = 0.5 * m.w_.dot((m.means_.row(0) + m.means_.row(1)).transpose());
  m.b_ = -mid + (std::log(static_cast<double>(counts[1])) - std::log(static_cast<double>(counts[0])));
  return m;
}

Vector LdaModel::decision_score(const Matrix& x) const {
  if (x.cols() != w_.size()) throw InvalidArgument("LDA input dimension mismatch");
  return (x * w_).array() + b_;
}

Labels LdaModel::predict(const Matrix& x) const {
  const Vector s = decision_score(x);
  Labels out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = s[i] > 0.0 ? 1 : 0;
  return out;
}

nlohmann::json LdaModel::describe() const {
  return {{"classifier", "lda"}, {"d", w_.size()}, {"shrinkage", kShrinkage}};
}

}  // namespace mlbench
