// Command-line experiment runner.
//
//   mlbench synth   --n 150 --d 184 --informative 10 --separation 1 --seed 7 --out data.csv
//   mlbench run     --data data.csv --label-col label --out results/
//   mlbench figures --report results/report.csv --out figures/

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mlbench/runner.hpp"

namespace {

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, Parse parse) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(parse(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension-reduction and classifier benchmarking toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mlbench::kToolkitVersion);

  // run
  auto* run = app.add_subcommand("run", "Cross-validated sweep over reducers, s values, classifiers and objectives");
  std::string config_path, data_path, label_col = "label", out_dir = "results";
  std::string s_values, reducers, classifiers, objectives;
  std::uint64_t seed = 0;
  bool no_standardize = false, leaky = false;
  run->add_option("--config", config_path, "Re-run from a config.json written by a previous run");
  run->add_option("--data", data_path, "CSV with a header row");
  run->add_option("--label-col", label_col, "Name of the label column");
  run->add_option("--seed", seed, "Seed for fold splitting and random forests");
  run->add_option("--s-values", s_values, "Comma-separated component counts (default 3,6,12,24,48,92,184)");
  run->add_option("--reducers", reducers, "Comma-separated subset of anova,pca,none");
  run->add_option("--classifiers", classifiers, "Comma-separated subset of knn,gnb,lda,ridge,svm_linear,svm_rbf,rf");
  run->add_option("--objectives", objectives, "Comma-separated subset of accuracy,auc");
  run->add_flag("--no-standardize", no_standardize, "Skip per-fold z-scoring");
  run->add_flag("--leaky-reduction", leaky, "Fit scaling and reduction on all rows (comparison only)");
  run->add_option("--out", out_dir, "Output directory");

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic two-class dataset");
  int n = 150, d = 184, informative = 10;
  double separation = 1.0;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  synth->add_option("--n", n, "Samples");
  synth->add_option("--d", d, "Features");
  synth->add_option("--informative", informative, "Features with class-dependent means");
  synth->add_option("--separation", separation, "Distance between the class means of informative features");
  synth->add_option("--seed", synth_seed, "Seed");
  synth->add_option("--out", synth_out, "Output CSV")->required();

  // figures
  auto* figures = app.add_subcommand("figures", "Export per-(reducer, objective) score tables from a report");
  std::string report_path, figures_out = "figures";
  figures->add_option("--report", report_path, "report.csv from a run")->required();
  figures->add_option("--out", figures_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const auto s = mlbench::make_synthetic(n, d, informative, separation, synth_seed);
      mlbench::save_csv(s.data, synth_out);
      std::cerr << "wrote " << synth_out << " (" << n << " x " << d << "), informative columns:";
      for (int c : s.informative_columns) std::cerr << ' ' << s.data.feature_names[static_cast<std::size_t>(c)];
      std::cerr << '\n';
      return 0;
    }

    if (*figures) {
      const auto rows = mlbench::read_report_csv(report_path);
      for (const auto& p : mlbench::export_figure_data(rows, figures_out)) std::cout << p.string() << '\n';
      return 0;
    }

    mlbench::ExperimentConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw mlbench::DataError("cannot open '" + config_path + "'");
      const auto doc = nlohmann::json::parse(in);
      config = mlbench::ExperimentConfig::from_json(doc.contains("config") ? doc.at("config") : doc);
    }
    if (run->count("--data")) config.data_path = data_path;
    if (run->count("--label-col")) config.label_column = label_col;
    if (run->count("--seed")) config.seed = seed;
    if (run->count("--out")) config.output_dir = out_dir;
    if (!s_values.empty()) config.s_values = parse_list<int>(s_values, [](const std::string& v) { return std::stoi(v); });
    if (!reducers.empty()) config.reducers = parse_list<mlbench::ReducerKind>(reducers, mlbench::parse_reducer);
    if (!classifiers.empty())
      config.classifiers = parse_list<mlbench::ClassifierId>(classifiers, mlbench::parse_classifier);
    if (!objectives.empty()) config.objectives = parse_list<mlbench::Objective>(objectives, mlbench::parse_objective);
    if (no_standardize) config.standardize = false;
    if (leaky) config.leaky_reduction = true;
    if (config.data_path.empty()) throw mlbench::InvalidArgument("--data is required");

    const mlbench::Dataset data = mlbench::load_csv(config.data_path, config.label_column);
    std::cerr << "loaded " << config.data_path << ": n=" << data.n() << " d=" << data.d() << '\n';
    mlbench::EvaluationReport report;
    {
      // Grid sizes are logged before the sweep starts.
      for (auto id : config.classifiers) std::cerr << "grid " << mlbench::default_grid(id).summary() << '\n';
      report = mlbench::run_experiment(config, data, mlbench::default_workers());
    }
    mlbench::write_report(report, config.output_dir);
    mlbench::export_figure_data(report.rows, config.output_dir);
    std::size_t failed = 0;
    for (const auto& r : report.rows)
      if (!r.ok()) {
        ++failed;
        std::cerr << "failed: " << mlbench::to_string(r.reducer) << " s=" << r.s << ' '
                  << mlbench::to_string(r.classifier) << ' ' << mlbench::to_string(r.objective) << ": " << r.error
                  << '\n';
      }
    std::cerr << report.rows.size() << " rows written to " << config.output_dir << ", " << failed << " failed\n";
    return failed > 0 ? 2 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
