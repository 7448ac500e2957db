#include "mlbench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace mlbench {

bool EvaluationReport::has_failures() const {
  return std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.ok(); });
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["data_path"] = data_path;
  j["label_column"] = label_column;
  j["seed"] = seed;
  j["s_values"] = s_values;
  auto& red = j["reducers"] = nlohmann::json::array();
  for (auto r : reducers) red.push_back(to_string(r));
  auto& cls = j["classifiers"] = nlohmann::json::array();
  for (auto c : classifiers) cls.push_back(to_string(c));
  auto& obj = j["objectives"] = nlohmann::json::array();
  for (auto o : objectives) obj.push_back(to_string(o));
  j["standardize"] = standardize;
  j["leaky_reduction"] = leaky_reduction;
  j["output_dir"] = output_dir;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  ExperimentConfig c;
  c.data_path = doc.at("data_path").get<std::string>();
  c.label_column = doc.at("label_column").get<std::string>();
  c.seed = doc.at("seed").get<std::uint64_t>();
  c.s_values = doc.at("s_values").get<std::vector<int>>();
  c.reducers.clear();
  for (const auto& r : doc.at("reducers")) c.reducers.push_back(parse_reducer(r.get<std::string>()));
  c.classifiers.clear();
  for (const auto& r : doc.at("classifiers")) c.classifiers.push_back(parse_classifier(r.get<std::string>()));
  c.objectives.clear();
  for (const auto& r : doc.at("objectives")) c.objectives.push_back(parse_objective(r.get<std::string>()));
  c.standardize = doc.at("standardize").get<bool>();
  c.leaky_reduction = doc.at("leaky_reduction").get<bool>();
  c.output_dir = doc.value("output_dir", std::string("results"));
  return c;
}

void ExperimentConfig::validate(int d) const {
  if (reducers.empty()) throw InvalidArgument("no reducers configured");
  if (classifiers.empty()) throw InvalidArgument("no classifiers configured");
  if (objectives.empty()) throw InvalidArgument("no objectives configured");
  const bool needs_s = std::any_of(reducers.begin(), reducers.end(), [](ReducerKind k) { return k != ReducerKind::none; });
  if (needs_s && s_values.empty()) throw InvalidArgument("no s values configured");
  for (int s : s_values)
    if (s < 1 || s > d)
      throw InvalidArgument("s = " + std::to_string(s) + " outside [1, " + std::to_string(d) + "]");
}

int default_workers() {
  if (const char* env = std::getenv("MLBENCH_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

struct Task {
  ReducerKind reducer;
  int s;
  ClassifierId classifier;
};

std::vector<ReportRow> run_task(const Task& task, const ExperimentConfig& config, const Dataset& data,
                                const FoldPlan& plan) {
  const auto start = std::chrono::steady_clock::now();
  const GridSpec grid = default_grid(task.classifier);
  std::vector<ReportRow> rows;
  for (Objective objective : config.objectives) {
    ReportRow r;
    r.reducer = task.reducer;
    r.s = task.s;
    r.classifier = task.classifier;
    r.objective = objective;
    r.evaluations = grid.size();
    rows.push_back(std::move(r));
  }
  try {
    PreprocessConfig pre;
    pre.reducer = {task.reducer, task.s};
    pre.standardize = config.standardize;
    pre.leaky_reduction = config.leaky_reduction;
    const auto folds = prepare_folds(data, plan, pre);
    int effective = std::numeric_limits<int>::max();
    for (const auto& f : folds) effective = std::min(effective, f.reducer.output_dim());

    EvaluateOptions opts;
    opts.seed = config.seed;
    // Both objectives are read off the same per-fold fits.
    const GridEvaluation ev = evaluate_grid(folds, grid, opts);
    for (auto& r : rows) {
      r.effective_s = effective;
      try {
        const CvResult best = select_best(ev, r.objective);
        r.fold_scores = best.fold_scores;
        r.mean = best.mean;
        r.chosen = best.chosen;
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  } catch (const std::exception& e) {
    for (auto& r : rows) r.error = e.what();
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : rows) r.wall_ms = ms;
  return rows;
}

}  // namespace

EvaluationReport run_experiment(const ExperimentConfig& config, const Dataset& data, int workers) {
  data.validate();
  config.validate(data.d());

  EvaluationReport report;
  report.config = config;
  for (ClassifierId id : config.classifiers) report.grid_log.push_back(default_grid(id).summary());

  const FoldPlan plan = make_folds(data.labels, 5, config.seed);

  std::vector<ReducerKind> reducers = config.reducers;
  std::sort(reducers.begin(), reducers.end());
  reducers.erase(std::unique(reducers.begin(), reducers.end()), reducers.end());
  std::vector<int> s_values = config.s_values;
  std::sort(s_values.begin(), s_values.end());
  s_values.erase(std::unique(s_values.begin(), s_values.end()), s_values.end());

  std::vector<Task> tasks;
  for (ReducerKind r : reducers) {
    const std::vector<int> sweep = r == ReducerKind::none ? std::vector<int>{data.d()} : s_values;
    for (int s : sweep)
      for (ClassifierId c : config.classifiers) tasks.push_back({r, s, c});
  }

  std::vector<std::vector<ReportRow>> results(tasks.size());
  const int pool = std::max(1, std::min<int>(workers > 0 ? workers : default_workers(), static_cast<int>(tasks.size())));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) results[i] = run_task(tasks[i], config, data, plan);
  };
  if (pool == 1) {
    work();
  } else {
    std::vector<std::jthread> threads;
    for (int w = 0; w < pool; ++w) threads.emplace_back(work);
  }

  for (auto& rs : results)
    for (auto& r : rs) report.rows.push_back(std::move(r));
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.reducer, a.objective, a.classifier, a.s) < std::tie(b.reducer, b.objective, b.classifier, b.s);
  });
  return report;
}

EvaluationReport run_experiment(const ExperimentConfig& config, int workers) {
  const Dataset data = load_csv(config.data_path, config.label_column);
  return run_experiment(config, data, workers);
}

}  // namespace mlbench
