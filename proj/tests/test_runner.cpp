#include <doctest.h>

#include <set>

#include "mlbench/runner.hpp"
#include "test_util.hpp"

using namespace mlbench;

TEST_CASE("synthetic data layout") {
  const auto s = make_synthetic(150, 184, 10, 1.0, 5);
  CHECK(s.data.n() == 150);
  CHECK(s.data.d() == 184);
  CHECK(count_positive(s.data.labels) == 75);
  CHECK(s.informative_columns.size() == 10);
  CHECK(std::is_sorted(s.informative_columns.begin(), s.informative_columns.end()));
  CHECK_NOTHROW(s.data.validate());

  const auto again = make_synthetic(150, 184, 10, 1.0, 5);
  CHECK(again.data.features == s.data.features);
  CHECK(again.informative_columns == s.informative_columns);
  CHECK(make_synthetic(150, 184, 10, 1.0, 6).data.features != s.data.features);

  CHECK_THROWS_AS(make_synthetic(150, 5, 6, 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(make_synthetic(4, 5, 1, 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(make_synthetic(50, 5, 1, -1.0, 0), InvalidArgument);
}

TEST_CASE("ANOVA recovers the informative columns at separation 4") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto s = make_synthetic(150, 184, 10, 4.0, seed);
    const auto sel = fit_select(s.data, 10);
    std::vector<int> hit;
    std::set_intersection(sel.selected.begin(), sel.selected.end(), s.informative_columns.begin(),
                          s.informative_columns.end(), std::back_inserter(hit));
    CHECK(hit.size() >= 9);
  }
}

TEST_CASE("config JSON round trip and validation") {
  ExperimentConfig c;
  c.data_path = "x.csv";
  c.seed = 18446744073709551615ULL;
  c.s_values = {2, 4};
  c.reducers = {ReducerKind::pca};
  c.classifiers = {ClassifierId::rf, ClassifierId::knn};
  c.objectives = {Objective::auc};
  c.standardize = false;
  c.leaky_reduction = true;
  const auto back = ExperimentConfig::from_json(nlohmann::json::parse(c.to_json().dump()));
  CHECK(back.to_json() == c.to_json());
  CHECK(back.seed == c.seed);

  CHECK_NOTHROW(c.validate(4));
  CHECK_THROWS_AS(c.validate(3), InvalidArgument);
  ExperimentConfig empty = c;
  empty.classifiers.clear();
  CHECK_THROWS_AS(empty.validate(10), InvalidArgument);
}

TEST_CASE("sweep produces one sorted row per combination") {
  const Dataset data = make_synthetic(40, 8, 3, 1.5, 2).data;
  ExperimentConfig c;
  c.s_values = {8, 2, 4};
  c.reducers = {ReducerKind::pca, ReducerKind::anova};
  c.classifiers = {ClassifierId::gnb, ClassifierId::knn, ClassifierId::ridge};
  c.seed = 3;
  const auto report = run_experiment(c, data, 2);
  CHECK(report.rows.size() == 2 * 3 * 3 * 2);
  CHECK_FALSE(report.has_failures());
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& a = report.rows[i - 1];
    const auto& b = report.rows[i];
    CHECK(std::tie(a.reducer, a.objective, a.classifier, a.s) < std::tie(b.reducer, b.objective, b.classifier, b.s));
  }
  for (const auto& r : report.rows) {
    CHECK(r.fold_scores.size() == 5);
    CHECK(r.mean == mean_of(r.fold_scores));
    CHECK(r.evaluations == default_grid(r.classifier).size());
    CHECK(r.effective_s <= r.s);
  }
  CHECK(report.grid_log.size() == 3);
}

TEST_CASE("ANOVA with s = d reproduces the unreduced baseline") {
  const Dataset data = make_synthetic(40, 6, 2, 1.0, 9).data;
  ExperimentConfig c;
  c.s_values = {6};
  c.reducers = {ReducerKind::anova, ReducerKind::none};
  c.classifiers = {ClassifierId::lda, ClassifierId::rf, ClassifierId::svm_linear};
  const auto report = run_experiment(c, data, 1);
  for (const auto& a : report.rows) {
    if (a.reducer != ReducerKind::anova) continue;
    const auto it = std::find_if(report.rows.begin(), report.rows.end(), [&](const ReportRow& b) {
      return b.reducer == ReducerKind::none && b.classifier == a.classifier && b.objective == a.objective;
    });
    REQUIRE(it != report.rows.end());
    CHECK(it->fold_scores == a.fold_scores);
    CHECK(it->chosen == a.chosen);
  }
}

TEST_CASE("PCA rows record the usable dimension") {
  const Dataset data = make_synthetic(20, 30, 3, 1.0, 4).data;
  ExperimentConfig c;
  c.s_values = {30};
  c.reducers = {ReducerKind::pca};
  c.classifiers = {ClassifierId::gnb};
  c.objectives = {Objective::accuracy};
  const auto report = run_experiment(c, data, 1);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].ok());
  CHECK(report.rows[0].s == 30);
  CHECK(report.rows[0].effective_s == 15);  // 16 training rows -> rank 15
}

TEST_CASE("report files are reproducible and parse back") {
  testutil::TempDir dir("report");
  const Dataset data = make_synthetic(40, 8, 3, 1.5, 2).data;
  save_csv(data, dir.path() / "d.csv");
  ExperimentConfig c;
  c.data_path = (dir.path() / "d.csv").string();
  c.s_values = {2, 8};
  c.classifiers = {ClassifierId::gnb, ClassifierId::rf};
  c.seed = 11;

  const auto r1 = run_experiment(c, 1);
  write_report(r1, dir.path() / "a");
  const auto f1 = export_figure_data(r1.rows, dir.path() / "a");
  // Re-run from the echoed config.
  const auto echoed = nlohmann::json::parse(testutil::slurp(dir.path() / "a" / "config.json"));
  const auto r2 = run_experiment(ExperimentConfig::from_json(echoed.at("config")), 2);
  write_report(r2, dir.path() / "b");
  export_figure_data(r2.rows, dir.path() / "b");

  CHECK(f1.size() == 4);
  for (const char* name : {"report.csv", "config.json", "grids.txt", "figure_anova_accuracy.csv", "figure_anova_auc.csv",
                           "figure_pca_accuracy.csv", "figure_pca_auc.csv"})
    CHECK(testutil::slurp(dir.path() / "a" / name) == testutil::slurp(dir.path() / "b" / name));

  const auto rows = read_report_csv(dir.path() / "a" / "report.csv");
  REQUIRE(rows.size() == r1.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].reducer == r1.rows[i].reducer);
    CHECK(rows[i].s == r1.rows[i].s);
    CHECK(rows[i].classifier == r1.rows[i].classifier);
    CHECK(rows[i].objective == r1.rows[i].objective);
    CHECK(rows[i].fold_scores == r1.rows[i].fold_scores);
    CHECK(rows[i].mean == r1.rows[i].mean);
    CHECK(rows[i].chosen == r1.rows[i].chosen);
  }
}

TEST_CASE("figure data is a projection of the report") {
  testutil::TempDir dir("figures");
  SUBCASE("one row gives one file with one cell") {
    ReportRow r;
    r.reducer = ReducerKind::anova;
    r.s = 12;
    r.classifier = ClassifierId::gnb;
    r.objective = Objective::auc;
    r.fold_scores = {0.5, 0.6, 0.7, 0.8, 0.9};
    r.mean = 0.7;
    const auto files = export_figure_data({r}, dir.path());
    REQUIRE(files.size() == 1);
    CHECK(testutil::slurp(files[0]) == "s,gnb\n12,0.7\n");
  }
  SUBCASE("cells equal row means; failed rows are blank") {
    std::vector<ReportRow> rows;
    for (int s : {3, 6})
      for (ClassifierId c : {ClassifierId::knn, ClassifierId::rf}) {
        ReportRow r;
        r.reducer = ReducerKind::pca;
        r.s = s;
        r.classifier = c;
        r.mean = s / 10.0 + (c == ClassifierId::rf ? 0.01 : 0.0);
        rows.push_back(r);
      }
    rows.back().error = "boom";
    const auto files = export_figure_data(rows, dir.path());
    REQUIRE(files.size() == 1);
    CHECK(testutil::slurp(files[0]) == "s,knn,rf\n3,0.3,0.31\n6,0.6,\n");
  }
  SUBCASE("empty report") { CHECK_THROWS_AS(export_figure_data({}, dir.path()), InvalidArgument); }
}

TEST_CASE("no signal, no skill: separation 0 keeps every AUC near chance") {
  const Dataset data = make_synthetic(150, 184, 10, 0.0, 21).data;
  ExperimentConfig c;
  c.s_values = {12};
  c.reducers = {ReducerKind::anova};
  c.classifiers = {ClassifierId::knn, ClassifierId::gnb, ClassifierId::lda, ClassifierId::ridge, ClassifierId::rf};
  c.objectives = {Objective::auc, Objective::accuracy};
  const auto report = run_experiment(c, data, 1);
  for (const auto& r : report.rows) {
    CAPTURE(to_string(r.classifier));
    CAPTURE(to_string(r.objective));
    if (r.objective == Objective::auc) CHECK(r.mean <= 0.65);
    else CHECK(std::abs(r.mean - 0.5) <= 0.1);
  }
}
