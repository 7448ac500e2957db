#include <cmath>
#include <numbers>

#include "mlbench/classifiers.hpp"

namespace mlbench {

GnbModel GnbModel::fit(const Matrix& x, const Labels& y) {
  check_training_set(x, y);
  const Eigen::Index d = x.cols();
  GnbModel m;
  m.means_.setZero(2, d);
  m.variances_.setZero(2, d);
  int counts[2] = {0, 0};
  for (std::size_t i = 0; i < y.size(); ++i) {
    ++counts[y[i]];
    m.means_.row(y[i]) += x.row(static_cast<Eigen::Index>(i));
  }
  for (int c = 0; c < 2; ++c) {
    if (counts[c] < 2) throw InvalidArgument("Gaussian naive Bayes needs at least 2 samples of class " + std::to_string(c));
    m.means_.row(c) /= counts[c];
  }
  for (std::size_t i = 0; i < y.size(); ++i)
    m.variances_.row(y[i]) += (x.row(static_cast<Eigen::Index>(i)) - m.means_.row(y[i])).array().square().matrix();
  for (int c = 0; c < 2; ++c) m.variances_.row(c) /= counts[c];

  const RowVector overall = x.colwise().mean();
  const double max_var = ((x.rowwise() - overall).colwise().squaredNorm() / static_cast<double>(x.rows())).maxCoeff();
  const double floor = max_var > 0.0 ? kVarianceFloor * max_var : kVarianceFloor;
  m.variances_ = m.variances_.cwiseMax(floor);

  const double n = static_cast<double>(y.size());
  m.priors_ << counts[0] / n, counts[1] / n;
  return m;
}

double GnbModel::log_joint(const RowVector& x, int c) const {
  const auto var = variances_.row(c).array();
  const auto diff = x.array() - means_.row(c).array();
  return std::log(priors_[c]) - 0.5 * (2.0 * std::numbers::pi * var).log().sum() - 0.5 * (diff.square() / var).sum();
}

Vector GnbModel::decision_score(const Matrix& x) const {
  if (x.cols() != means_.cols()) throw InvalidArgument("Gaussian naive Bayes input dimension mismatch");
  Vector s(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    // Normalising by the evidence is a two-way softmax of the log joints.
    const double z = log_joint(x.row(i), 1) - log_joint(x.row(i), 0);
    s[i] = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  }
  return s;
}

Labels GnbModel::predict(const Matrix& x) const {
  const Vector s = decision_score(x);
  Labels out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = s[i] > 0.5 ? 1 : 0;
  return out;
}

nlohmann::json GnbModel::describe() const {
  return {{"classifier", "gnb"}, {"d", means_.cols()}, {"priors", {priors_[0], priors_[1]}}};
}

}  // namespace mlbench
