#include "mlbench/modelselect.hpp"

#include <cmath>
#include <cstdio>

#include "mlbench/metrics.hpp"
#include "mlbench/rng.hpp"

namespace mlbench {

std::string to_string(Objective objective) {
  return objective == Objective::accuracy ? "accuracy" : "auc";
}

Objective parse_objective(const std::string& name) {
  if (name == "accuracy") return Objective::accuracy;
  if (name == "auc" || name == "roc_auc") return Objective::auc;
  throw InvalidArgument("unknown objective '" + name + "'");
}

std::vector<PreparedFold> prepare_folds(const Dataset& data, const FoldPlan& plan, const PreprocessConfig& config) {
  if (plan.n() != data.n()) throw InvalidArgument("fold plan size does not match the dataset");

  std::optional<Standardizer> whole_scaler;
  FittedReducer whole_reducer;
  if (config.leaky_reduction) {
    Matrix all = data.features;
    if (config.standardize) {
      whole_scaler = Standardizer::fit(all);
      all = whole_scaler->transform(all);
    }
    whole_reducer = FittedReducer::fit(config.reducer.kind, config.reducer.s, all, data.labels);
  }

  std::vector<PreparedFold> folds;
  folds.reserve(static_cast<std::size_t>(plan.k));
  for (int t = 0; t < plan.k; ++t) {
    const std::vector<int> train_rows = plan.train_indices(t);
    const std::vector<int> test_rows = plan.test_indices(t);
    PreparedFold f;
    f.fold = t;
    f.train_x = take_rows(data.features, train_rows);
    f.test_x = take_rows(data.features, test_rows);
    f.train_y = take(data.labels, train_rows);
    f.test_y = take(data.labels, test_rows);
    try {
      if (config.leaky_reduction) {
        f.standardizer = whole_scaler;
        f.reducer = whole_reducer;
      } else {
        if (config.standardize) f.standardizer = Standardizer::fit(f.train_x);
        const Matrix scaled = f.standardizer ? f.standardizer->transform(f.train_x) : f.train_x;
        f.reducer = FittedReducer::fit(config.reducer.kind, config.reducer.s, scaled, f.train_y);
      }
      if (f.standardizer) {
        f.train_x = f.standardizer->transform(f.train_x);
        f.test_x = f.standardizer->transform(f.test_x);
      }
      f.train_x = f.reducer.apply(f.train_x);
      f.test_x = f.reducer.apply(f.test_x);
    } catch (const std::exception& e) {
      throw FoldError(t, e.what());
    }
    folds.push_back(std::move(f));
  }
  return folds;
}

FitFunction make_fit_function(ClassifierId id, const HyperParams& params) {
  return [id, params](const Matrix& x, const Labels& y, std::uint64_t seed) {
    return fit_classifier(id, x, y, params, seed);
  };
}

std::uint64_t fold_seed(std::uint64_t seed, int fold) {
  return RngStream(seed, "classifier/fold" + std::to_string(fold)).next_u64();
}

FoldScores evaluate_folds(const std::vector<PreparedFold>& folds, const FitFunction& fit,
                          const EvaluateOptions& options) {
  FoldScores scores;
  for (const auto& f : folds) {
    try {
      const auto model = fit(f.train_x, f.train_y, fold_seed(options.seed, f.fold));
      const Matrix& x = options.score_on_training_part ? f.train_x : f.test_x;
      const Labels& y = options.score_on_training_part ? f.train_y : f.test_y;
      const Labels pred = model->predict(x);
      const Vector s = model->decision_score(x);
      scores.accuracy.push_back(accuracy(pred, y));
      scores.auc.push_back(roc_auc(std::span<const double>(s.data(), static_cast<std::size_t>(s.size())), y));
    } catch (const FoldError&) {
      throw;
    } catch (const std::exception& e) {
      throw FoldError(f.fold, e.what());
    }
  }
  return scores;
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

CvResult cross_validate(const Dataset& data, const FoldPlan& plan, const PipelineConfig& config) {
  const auto folds = prepare_folds(data, plan, config.preprocess);
  const FoldScores scores = evaluate_folds(folds, make_fit_function(config.classifier, config.params), config.evaluate);
  CvResult r;
  r.objective = config.objective;
  r.fold_scores = scores.get(config.objective);
  r.mean = mean_of(r.fold_scores);
  r.chosen = config.params;
  return r;
}

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

std::vector<HyperParams> GridSpec::points() const {
  std::vector<HyperParams> out{HyperParams{}};
  for (const auto& axis : axes) {
    if (axis.values.empty()) throw InvalidArgument("grid axis '" + axis.name + "' has no values");
    std::vector<HyperParams> next;
    next.reserve(out.size() * axis.values.size());
    for (const auto& p : out)
      for (double v : axis.values) {
        HyperParams q = p;
        q[axis.name] = v;
        next.push_back(std::move(q));
      }
    out = std::move(next);
  }
  return out;
}

std::string GridSpec::summary() const {
  std::string s = to_string(classifier) + ": ";
  if (axes.empty()) s += "no tuned hyperparameters";
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (i > 0) s += " x ";
    s += axes[i].name + "(" + std::to_string(axes[i].values.size()) + ")";
  }
  s += " = " + std::to_string(size()) + (size() == 1 ? " evaluation" : " evaluations");
  return s;
}

namespace {

std::vector<double> powers_of_ten(int lo, int hi) {
  std::vector<double> v;
  for (int e = lo; e <= hi; ++e) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "1e%d", e);
    v.push_back(std::strtod(buf, nullptr));
  }
  return v;
}

}  // namespace

GridSpec default_grid(ClassifierId id) {
  GridSpec g;
  g.classifier = id;
  switch (id) {
    case ClassifierId::knn: g.axes = {{"k", {3, 5, 7, 9, 11, 13, 15}}}; break;
    case ClassifierId::gnb:
    case ClassifierId::lda: break;
    case ClassifierId::ridge: g.axes = {{"alpha", {0.1, 1, 10}}}; break;
    case ClassifierId::svm_linear: g.axes = {{"C", powers_of_ten(0, 8)}}; break;
    case ClassifierId::svm_rbf: g.axes = {{"gamma", powers_of_ten(-10, 2)}, {"C", powers_of_ten(0, 8)}}; break;
    case ClassifierId::rf: g.axes = {{"n_trees", {2, 4, 8, 16, 32}}}; break;
  }
  return g;
}

GridEvaluation evaluate_grid(const std::vector<PreparedFold>& folds, const GridSpec& grid,
                             const EvaluateOptions& options) {
  GridEvaluation ev;
  for (auto& params : grid.points()) {
    GridPointResult r;
    r.params = params;
    try {
      r.scores = evaluate_folds(folds, make_fit_function(grid.classifier, params), options);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    ev.points.push_back(std::move(r));
  }
  return ev;
}

CvResult select_best(const GridEvaluation& evaluation, Objective objective) {
  const GridPointResult* best = nullptr;
  double best_mean = 0.0;
  std::string first_error;
  for (const auto& p : evaluation.points) {
    if (!p.scores) {
      if (first_error.empty()) first_error = p.error;
      continue;
    }
    const double m = mean_of(p.scores->get(objective));
    if (best == nullptr || m > best_mean) {
      best = &p;
      best_mean = m;
    }
  }
  if (best == nullptr)
    throw std::runtime_error("every grid point failed" + (first_error.empty() ? "" : ": " + first_error));
  CvResult r;
  r.objective = objective;
  r.fold_scores = best->scores->get(objective);
  r.mean = best_mean;
  r.chosen = best->params;
  r.evaluations = evaluation.points.size();
  return r;
}

CvResult grid_search(const Dataset& data, const FoldPlan& plan, const GridSpec& grid,
                     const PreprocessConfig& preprocess, Objective objective, const EvaluateOptions& options) {
  const auto folds = prepare_folds(data, plan, preprocess);
  return select_best(evaluate_grid(folds, grid, options), objective);
}

}  // namespace mlbench
