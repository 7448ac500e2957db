#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mlbench/dataset.hpp"
#include "mlbench/types.hpp"

namespace mlbench {

/// One-way ANOVA F statistic of every feature against the binary labels.
///
/// F = MS_between / MS_within with MS_between = sum_i n_i (mean_i - mean)^2 / (m - 1)
/// and MS_within = sum_ij (x_ij - mean_i)^2 / (n - m), m = 2. A feature with
/// zero within-group spread scores +inf if its group means differ, else 0.
std::vector<double> anova_f_scores(const Matrix& x, const Labels& y);
inline std::vector<double> anova_f_scores(const Dataset& data) {
  return anova_f_scores(data.features, data.labels);
}

/// Top-s features by F score.
struct AnovaSelector {
  std::vector<double> scores;
  /// Ascending feature indices.
  std::vector<int> selected;

  int s() const { return static_cast<int>(selected.size()); }
  int d() const { return static_cast<int>(scores.size()); }
};

/// Ranks by descending score (+inf first), ties to the lower index.
AnovaSelector select_top(std::vector<double> scores, int s);
AnovaSelector fit_select(const Matrix& x, const Labels& y, int s);
inline AnovaSelector fit_select(const Dataset& data, int s) { return fit_select(data.features, data.labels, s); }
Matrix apply_selector(const AnovaSelector& sel, const Matrix& x);

/// Principal axes of mean-centered data.
struct PcaTransform {
  Vector mean;
  /// s x d, orthonormal rows. The largest-magnitude entry of each row is positive.
  Matrix components;
  /// Covariance eigenvalues (n - 1 denominator) matching the rows, non-increasing.
  Vector explained_variance;

  int s() const { return static_cast<int>(components.rows()); }
  int d() const { return static_cast<int>(components.cols()); }
};

/// Eigenvalues below this fraction of the largest count as numerically zero.
inline constexpr double kPcaRankTolerance = 1e-12;

/// All covariance eigenvalues of `x`, descending.
Vector covariance_spectrum(const Matrix& x);

/// Largest s accepted by fit_pca: min(n - 1, d, numerical rank).
int pca_max_components(const Matrix& x);

/// Throws InvalidArgument when s is outside [1, pca_max_components(x)] or x
/// holds non-finite values. Labels never enter the fit.
PcaTransform fit_pca(const Matrix& x, int s);

/// Like fit_pca but silently keeps min(s, pca_max_components(x)) axes.
PcaTransform fit_pca_clamped(const Matrix& x, int s);

/// (x - mean) * components^T.
Matrix apply_pca(const PcaTransform& t, const Matrix& x);

enum class ReducerKind { none, anova, pca };

std::string to_string(ReducerKind kind);
ReducerKind parse_reducer(const std::string& name);

/// Passes every column through unchanged.
struct IdentityReducer {
  int d = 0;
};

/// A trained dimension-reduction transform of any kind.
class FittedReducer {
 public:
  using Variant = std::variant<IdentityReducer, AnovaSelector, PcaTransform>;

  FittedReducer() = default;
  explicit FittedReducer(Variant v) : impl_(std::move(v)) {}

  /// Fits `kind` with s kept components on training rows. PCA clamps s to the
  /// usable rank of `x`.
  static FittedReducer fit(ReducerKind kind, int s, const Matrix& x, const Labels& y);

  ReducerKind kind() const;
  int input_dim() const;
  int output_dim() const;
  Matrix apply(const Matrix& x) const;

  const Variant& impl() const { return impl_; }

  /// Versioned audit document: {"format_version", "method", "s", ...}.
  nlohmann::json to_json() const;
  static FittedReducer from_json(const nlohmann::json& doc);

 private:
  Variant impl_;
};

}  // namespace mlbench
