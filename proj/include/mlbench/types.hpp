#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mlbench {

/// Row-major sample matrix: one row per sample, one column per feature.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Binary class indicators; class 1 is the positive class everywhere.
using Labels = std::vector<int>;

/// Input that violates a documented precondition (bad sizes, wrong label set, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or unreadable data on ingest.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gathers the given rows of `x` into a new matrix, preserving order.
Matrix take_rows(const Matrix& x, const std::vector<int>& rows);
Labels take(const Labels& y, const std::vector<int>& rows);

/// Number of entries equal to 1.
int count_positive(const Labels& y);

}  // namespace mlbench
