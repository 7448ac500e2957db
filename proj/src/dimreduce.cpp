#include "mlbench/dimreduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mlbench {

std::vector<double> anova_f_scores(const Matrix& x, const Labels& y) {
  const Eigen::Index n = x.rows();
  if (static_cast<Eigen::Index>(y.size()) != n) throw InvalidArgument("label count does not match row count");
  constexpr int m = 2;
  std::vector<int> group[m];
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    if (c != 0 && c != 1) throw InvalidArgument("labels must be 0 or 1");
    group[c].push_back(static_cast<int>(i));
  }
  if (group[0].empty() || group[1].empty()) throw InvalidArgument("ANOVA F-test needs both classes");
  if (n <= m) throw InvalidArgument("ANOVA F-test needs more samples than groups");

  const RowVector grand_mean = x.colwise().mean();
  RowVector ss_between = RowVector::Zero(x.cols());
  RowVector ss_within = RowVector::Zero(x.cols());
  for (const auto& rows : group) {
    const Matrix g = take_rows(x, rows);
    const RowVector g_mean = g.colwise().mean();
    ss_between += static_cast<double>(rows.size()) * (g_mean - grand_mean).array().square().matrix();
    ss_within += (g.rowwise() - g_mean).colwise().squaredNorm();
  }

  std::vector<double> f(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double ms_b = ss_between[j] / (m - 1);
    const double ms_w = ss_within[j] / static_cast<double>(n - m);
    if (ms_w > 0.0)
      f[static_cast<std::size_t>(j)] = ms_b / ms_w;
    else
      f[static_cast<std::size_t>(j)] = ms_b > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return f;
}

AnovaSelector select_top(std::vector<double> scores, int s) {
  const int d = static_cast<int>(scores.size());
  if (s < 1 || s > d)
    throw InvalidArgument("number of selected features " + std::to_string(s) + " outside [1, " +
                          std::to_string(d) + "]");
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
  });
  AnovaSelector sel;
  sel.selected.assign(order.begin(), order.begin() + s);
  std::sort(sel.selected.begin(), sel.selected.end());
  sel.scores = std::move(scores);
  return sel;
}

AnovaSelector fit_select(const Matrix& x, const Labels& y, int s) {
  if (s < 1 || s > x.cols())
    throw InvalidArgument("number of selected features " + std::to_string(s) + " outside [1, " +
                          std::to_string(x.cols()) + "]");
  return select_top(anova_f_scores(x, y), s);
}

Matrix apply_selector(const AnovaSelector& sel, const Matrix& x) {
  if (x.cols() != sel.d())
    throw InvalidArgument("selector fitted on " + std::to_string(sel.d()) + " columns, input has " +
                          std::to_string(x.cols()));
  Matrix out(x.rows(), sel.s());
  for (int k = 0; k < sel.s(); ++k) out.col(k) = x.col(sel.selected[static_cast<std::size_t>(k)]);
  return out;
}

namespace {

struct Spectrum {
  Vector mean;
  Vector values;   // descending
  Matrix vectors;  // rows = eigenvectors, matching values
};

Spectrum covariance_eigen(const Matrix& x) {
  if (x.rows() < 2) throw InvalidArgument("PCA needs at least 2 samples");
  if (!x.allFinite()) throw InvalidArgument("PCA input contains non-finite values");
  Spectrum sp;
  sp.mean = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - sp.mean.transpose();
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(x.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw InvalidArgument("covariance eigendecomposition failed");
  // Eigen returns ascending order.
  const Eigen::Index d = cov.rows();
  sp.values = solver.eigenvalues().reverse();
  sp.vectors = solver.eigenvectors().rowwise().reverse().transpose();
  for (Eigen::Index k = 0; k < d; ++k) {
    if (sp.values[k] < 0.0) sp.values[k] = 0.0;
    auto row = sp.vectors.row(k);
    const double max_abs = row.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < d; ++j) {
      if (std::abs(row[j]) >= max_abs * (1.0 - 1e-12)) {
        if (row[j] < 0.0) row = -row;
        break;
      }
    }
  }
  return sp;
}

int usable_components(const Spectrum& sp, Eigen::Index n) {
  const double largest = sp.values.size() > 0 ? sp.values[0] : 0.0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sp.values.size(); ++k)
    if (largest > 0.0 && sp.values[k] >= kPcaRankTolerance * largest) ++rank;
  return std::min<int>({static_cast<int>(n - 1), static_cast<int>(sp.values.size()), rank});
}

PcaTransform truncate(const Spectrum& sp, int s) {
  PcaTransform t;
  t.mean = sp.mean;
  t.components = sp.vectors.topRows(s);
  t.explained_variance = sp.values.head(s);
  return t;
}

}  // namespace

Vector covariance_spectrum(const Matrix& x) { return covariance_eigen(x).values; }

int pca_max_components(const Matrix& x) {
  const Spectrum sp = covariance_eigen(x);
  return usable_components(sp, x.rows());
}

PcaTransform fit_pca(const Matrix& x, int s) {
  const Spectrum sp = covariance_eigen(x);
  const int limit = usable_components(sp, x.rows());
  if (s < 1 || s > limit)
    throw InvalidArgument("PCA component count " + std::to_string(s) + " outside [1, " + std::to_string(limit) +
                          "]");
  return truncate(sp, s);
}

PcaTransform fit_pca_clamped(const Matrix& x, int s) {
  if (s < 1) throw InvalidArgument("PCA component count must be positive");
  const Spectrum sp = covariance_eigen(x);
  const int limit = usable_components(sp, x.rows());
  if (limit < 1) throw InvalidArgument("PCA input has no variance");
  return truncate(sp, std::min(s, limit));
}

Matrix apply_pca(const PcaTransform& t, const Matrix& x) {
  if (x.cols() != t.d())
    throw InvalidArgument("PCA fitted on " + std::to_string(t.d()) + " columns, input has " +
                          std::to_string(x.cols()));
  return (x.rowwise() - t.mean.transpose()) * t.components.transpose();
}

std::string to_string(ReducerKind kind) {
  switch (kind) {
    case ReducerKind::none: return "none";
    case ReducerKind::anova: return "anova";
    case ReducerKind::pca: return "pca";
  }
  return "?";
}

ReducerKind parse_reducer(const std::string& name) {
  if (name == "none") return ReducerKind::none;
  if (name == "anova") return ReducerKind::anova;
  if (name == "pca") return ReducerKind::pca;
  throw InvalidArgument("unknown reducer '" + name + "'");
}

FittedReducer FittedReducer::fit(ReducerKind kind, int s, const Matrix& x, const Labels& y) {
  switch (kind) {
    case ReducerKind::none: return FittedReducer(IdentityReducer{static_cast<int>(x.cols())});
    case ReducerKind::anova: return FittedReducer(fit_select(x, y, s));
    case ReducerKind::pca: return FittedReducer(fit_pca_clamped(x, s));
  }
  throw InvalidArgument("unknown reducer");
}

ReducerKind FittedReducer::kind() const {
  return static_cast<ReducerKind>(impl_.index());
}

int FittedReducer::input_dim() const {
  return std::visit([](const auto& r) -> int {
    using T = std::decay_t<decltype(r)>;
    if constexpr (std::is_same_v<T, IdentityReducer>) return r.d;
    else return r.d();
  }, impl_);
}

int FittedReducer::output_dim() const {
  return std::visit([](const auto& r) -> int {
    using T = std::decay_t<decltype(r)>;
    if constexpr (std::is_same_v<T, IdentityReducer>) return r.d;
    else return r.s();
  }, impl_);
}

Matrix FittedReducer::apply(const Matrix& x) const {
  return std::visit([&](const auto& r) -> Matrix {
    using T = std::decay_t<decltype(r)>;
    if constexpr (std::is_same_v<T, IdentityReducer>) {
      if (x.cols() != r.d) throw InvalidArgument("identity reducer column count mismatch");
      return x;
    } else if constexpr (std::is_same_v<T, AnovaSelector>) {
      return apply_selector(r, x);
    } else {
      return apply_pca(r, x);
    }
  }, impl_);
}

namespace {

constexpr int kReducerFormatVersion = 1;

nlohmann::json to_array(const Eigen::Ref<const Vector>& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector from_array(const nlohmann::json& a) {
  const auto v = a.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::json FittedReducer::to_json() const {
  nlohmann::json doc;
  doc["format_version"] = kReducerFormatVersion;
  doc["method"] = to_string(kind());
  doc["input_dim"] = input_dim();
  doc["s"] = output_dim();
  if (const auto* sel = std::get_if<AnovaSelector>(&impl_)) {
    doc["selected"] = sel->selected;
    // JSON has no infinity; +inf scores are written as the string "inf".
    nlohmann::json scores = nlohmann::json::array();
    for (double f : sel->scores) {
      if (std::isinf(f)) scores.push_back("inf");
      else scores.push_back(f);
    }
    doc["scores"] = std::move(scores);
  } else if (const auto* pca = std::get_if<PcaTransform>(&impl_)) {
    doc["mean"] = to_array(pca->mean);
    doc["explained_variance"] = to_array(pca->explained_variance);
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index k = 0; k < pca->components.rows(); ++k)
      rows.push_back(to_array(pca->components.row(k).transpose()));
    doc["components"] = std::move(rows);
  }
  return doc;
}

FittedReducer FittedReducer::from_json(const nlohmann::json& doc) {
  if (doc.at("format_version").get<int>() != kReducerFormatVersion)
    throw DataError("unsupported reducer format version");
  const ReducerKind kind = parse_reducer(doc.at("method").get<std::string>());
  switch (kind) {
    case ReducerKind::none: return FittedReducer(IdentityReducer{doc.at("input_dim").get<int>()});
    case ReducerKind::anova: {
      AnovaSelector sel;
      sel.selected = doc.at("selected").get<std::vector<int>>();
      for (const auto& f : doc.at("scores"))
        sel.scores.push_back(f.is_string() ? std::numeric_limits<double>::infinity() : f.get<double>());
      return FittedReducer(std::move(sel));
    }
    case ReducerKind::pca: {
      PcaTransform t;
      t.mean = from_array(doc.at("mean"));
      t.explained_variance = from_array(doc.at("explained_variance"));
      const auto& rows = doc.at("components");
      t.components.resize(static_cast<Eigen::Index>(rows.size()), t.mean.size());
      for (std::size_t k = 0; k < rows.size(); ++k)
        t.components.row(static_cast<Eigen::Index>(k)) = from_array(rows[k]).transpose();
      return FittedReducer(std::move(t));
    }
  }
  throw DataError("unknown reducer method");
}

}  // namespace mlbench
