#include <cmath>
#include <limits>

#include "mlbench/classifiers.hpp"

namespace mlbench {

double Kernel::operator()(const RowVector& a, const RowVector& b) const {
  if (kind == KernelKind::linear) return a.dot(b);
  return std::exp(-gamma * (a - b).squaredNorm());
}

Eigen::MatrixXd Kernel::gram(const Matrix& a, const Matrix& b) const {
  Eigen::MatrixXd k = a * b.transpose();
  if (kind == KernelKind::linear) return k;
  const Vector na = a.rowwise().squaredNorm();
  const Vector nb = b.rowwise().squaredNorm();
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.cols(); ++j)
      k(i, j) = std::exp(-gamma * std::max(0.0, na[i] + nb[j] - 2.0 * k(i, j)));
  return k;
}

namespace {

constexpr double kTau = 1e-12;

}  // namespace

SvmModel SvmModel::fit(const Matrix& x, const Labels& labels, double c, Kernel kernel, SvmOptions options) {
  check_training_set(x, labels);
  if (!(c > 0.0)) throw InvalidArgument("SVM cost C must be positive");
  if (kernel.kind == KernelKind::rbf && !(kernel.gamma > 0.0)) throw InvalidArgument("RBF gamma must be positive");

  const Eigen::Index n = x.rows();
  const Vector y = signed_targets(labels);
  const Eigen::MatrixXd q = (y * y.transpose()).cwiseProduct(kernel.gram(x, x));
  const Vector qd = q.diagonal();

  Vector alpha = Vector::Zero(n);
  // Gradient of 1/2 a'Qa - e'a.
  Vector grad = Vector::Constant(n, -1.0);

  const auto at_upper = [&](Eigen::Index t) { return alpha[t] >= c; };
  const auto at_lower = [&](Eigen::Index t) { return alpha[t] <= 0.0; };

  SvmModel m;
  m.kernel_ = kernel;
  m.c_ = c;

  long updates = 0;
  bool converged = false;
  while (updates < options.max_updates) {
    // Maximal violating index i, then j by second-order gain.
    double g_max = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (!at_upper(t) && -grad[t] >= g_max) {
          g_max = -grad[t];
          i = t;
        }
      } else if (!at_lower(t) && grad[t] >= g_max) {
        g_max = grad[t];
        i = t;
      }
    }
    double g_max2 = -std::numeric_limits<double>::infinity();
    double best_drop = std::numeric_limits<double>::infinity();
    Eigen::Index j = -1;
    for (Eigen::Index t = 0; t < n && i >= 0; ++t) {
      if (y[t] > 0) {
        if (at_lower(t)) continue;
        const double grad_diff = g_max + grad[t];
        g_max2 = std::max(g_max2, grad[t]);
        if (grad_diff > 0.0) {
          const double quad = qd[i] + qd[t] - 2.0 * y[i] * q(i, t);
          const double drop = -(grad_diff * grad_diff) / (quad > 0.0 ? quad : kTau);
          if (drop <= best_drop) {
            j = t;
            best_drop = drop;
          }
        }
      } else {
        if (at_upper(t)) continue;
        const double grad_diff = g_max - grad[t];
        g_max2 = std::max(g_max2, -grad[t]);
        if (grad_diff > 0.0) {
          const double quad = qd[i] + qd[t] + 2.0 * y[i] * q(i, t);
          const double drop = -(grad_diff * grad_diff) / (quad > 0.0 ? quad : kTau);
          if (drop <= best_drop) {
            j = t;
            best_drop = drop;
          }
        }
      }
    }
    if (i < 0 || j < 0 || g_max + g_max2 < options.tolerance) {
      converged = true;
      break;
    }

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = qd[i] + qd[j] + 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = qd[i] + qd[j] - 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double d_i = alpha[i] - old_i;
    const double d_j = alpha[j] - old_j;
    grad += q.col(i) * d_i + q.col(j) * d_j;
    ++updates;
  }

  // Bias from free vectors, or the midpoint of the feasible interval.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  int free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (at_upper(t)) {
      if (y[t] < 0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else if (at_lower(t)) {
      if (y[t] > 0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho = free_count > 0 ? free_sum / free_count : 0.5 * (upper + lower);

  m.alphas_ = alpha;
  m.b_ = -rho;
  m.dual_objective_ = -0.5 * alpha.dot(grad - Vector::Ones(n));
  m.converged_ = converged;
  m.updates_ = updates;
  for (Eigen::Index t = 0; t < n; ++t)
    if (alpha[t] > 0.0) m.support_index_.push_back(static_cast<int>(t));
  m.support_ = take_rows(x, m.support_index_);
  m.dual_coef_.resize(static_cast<Eigen::Index>(m.support_index_.size()));
  for (std::size_t k = 0; k < m.support_index_.size(); ++k)
    m.dual_coef_[static_cast<Eigen::Index>(k)] = alpha[m.support_index_[k]] * y[m.support_index_[k]];
  return m;
}

Vector SvmModel::decision_score(const Matrix& x) const {
  if (support_.rows() > 0 && x.cols() != support_.cols()) throw InvalidArgument("SVM input dimension mismatch");
  if (support_.rows() == 0) return Vector::Constant(x.rows(), b_);
  return (kernel_.gram(x, support_) * dual_coef_).array() + b_;
}

Labels SvmModel::predict(const Matrix& x) const {
  const Vector s = decision_score(x);
  Labels out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = s[i] > 0.0 ? 1 : 0;
  return out;
}

nlohmann::json SvmModel::describe() const {
  nlohmann::json j = {{"classifier", kernel_.kind == KernelKind::rbf ? "svm_rbf" : "svm_linear"},
                      {"C", c_},
                      {"support_vectors", support_.rows()},
                      {"converged", converged_},
                      {"updates", updates_}};
  if (kernel_.kind == KernelKind::rbf) j["gamma"] = kernel_.gamma;
  return j;
}

}  // namespace mlbench
