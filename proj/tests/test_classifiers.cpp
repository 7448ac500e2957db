#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "mlbench/classifiers.hpp"
#include "test_util.hpp"

using namespace mlbench;

namespace {

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

/// Two Gaussian blobs with means +-shift on every axis.
std::pair<Matrix, Labels> blobs(RngStream& rng, int n, int d, double shift) {
  Matrix x = testutil::random_matrix(rng, n, d);
  Labels y = testutil::random_labels(rng, n, 3);
  for (int i = 0; i < n; ++i) x.row(i).array() += y[static_cast<std::size_t>(i)] == 1 ? shift : -shift;
  return {x, y};
}

Labels swapped(const Labels& y) {
  Labels s(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) s[i] = 1 - y[i];
  return s;
}

}  // namespace

TEST_CASE("k-NN basics") {
  const Matrix x = rows({{0, 0}, {1, 0}, {0, 1}, {5, 5}, {6, 5}});
  const Labels y{0, 0, 1, 1, 1};
  const KnnModel one = KnnModel::fit(x, y, 1);
  CHECK(one.predict(x) == y);

  const KnnModel three = KnnModel::fit(x, y, 3);
  // neighbours of (0.1, 0.9): rows 2, 0, 1 -> labels {1, 0, 0}
  const Matrix q = rows({{0.1, 0.9}, {5.4, 5.1}});
  const Vector s = three.decision_score(q);
  CHECK(s[0] == doctest::Approx(1.0 / 3.0));
  CHECK(s[1] == doctest::Approx(2.0 / 3.0));
  CHECK(three.predict(q) == Labels{0, 1});

  CHECK_THROWS_AS(KnnModel::fit(x, y, 2), InvalidArgument);
  CHECK_THROWS_AS(KnnModel::fit(x, y, 7), InvalidArgument);
}

TEST_CASE("k-NN equidistant neighbours straddling rank k are ordered by row index") {
  // Query 0: rows 0..3 sit at distance 1, row 4 at distance 2.
  const Matrix x = rows({{1}, {-1}, {1}, {-1}, {2}});
  const Labels y{1, 0, 0, 1, 1};
  const KnnModel m = KnnModel::fit(x, y, 3);
  const RowVector q = RowVector::Zero(1);

  // Exhaustive reference: sort every (distance, row) pair.
  std::vector<std::pair<double, int>> all;
  for (int i = 0; i < 5; ++i) all.emplace_back((x.row(i) - q).norm(), i);
  std::sort(all.begin(), all.end());
  const std::vector<int> want{all[0].second, all[1].second, all[2].second};
  CHECK(m.neighbours(q) == want);
  CHECK(m.neighbours(q) == std::vector<int>{0, 1, 2});
  CHECK(m.decision_score(Matrix(q))[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("GNB symmetric classes put the boundary at zero") {
  const double eps = 0.1;
  const Matrix x = rows({{-1 - eps}, {-1 + eps}, {1 - eps}, {1 + eps}});
  const GnbModel m = GnbModel::fit(x, Labels{0, 0, 1, 1});
  CHECK(m.decision_score(rows({{0.0}}))[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(m.predict(rows({{-0.01}, {0.01}})) == Labels{0, 1});
}

TEST_CASE("GNB prior dominates identical likelihoods") {
  Matrix x(20, 1);
  Labels y(20, 0);
  for (int i = 0; i < 20; ++i) x(i, 0) = i % 2 == 0 ? -1.0 : 1.0;
  y[18] = y[19] = 1;
  const GnbModel m = GnbModel::fit(x, y);
  CHECK(m.priors()[0] == doctest::Approx(0.9));
  const Matrix grid = rows({{-50}, {-1}, {0}, {0.3}, {1}, {50}});
  CHECK(m.predict(grid) == Labels(6, 0));
}

TEST_CASE("GNB posterior equals the direct density product through the evidence") {
  const Matrix x = rows({{0.0, 1.0}, {1.0, 3.0}, {2.0, 2.0}, {3.0, 0.0}, {4.0, -1.0}, {5.0, -2.5}, {3.5, 1.0}});
  const Labels y{0, 0, 0, 1, 1, 1, 1};
  const GnbModel m = GnbModel::fit(x, y);

  // Class statistics by hand: means and population variances.
  const double mu[2][2] = {{1.0, 2.0}, {3.875, -0.625}};
  const double var[2][2] = {{2.0 / 3.0, 2.0 / 3.0}, {(0.765625 + 0.015625 + 1.265625 + 0.140625) / 4.0,
                                                      (0.390625 + 0.140625 + 3.515625 + 2.640625) / 4.0}};
  for (int c = 0; c < 2; ++c)
    for (int j = 0; j < 2; ++j) {
      CHECK(m.means()(c, j) == doctest::Approx(mu[c][j]).epsilon(1e-12));
      CHECK(m.variances()(c, j) == doctest::Approx(var[c][j]).epsilon(1e-12));
    }

  const double q[2] = {2.5, 0.5};
  double joint[2];
  const double prior[2] = {3.0 / 7.0, 4.0 / 7.0};
  for (int c = 0; c < 2; ++c) {
    joint[c] = prior[c];
    for (int j = 0; j < 2; ++j)
      joint[c] *= std::exp(-(q[j] - mu[c][j]) * (q[j] - mu[c][j]) / (2 * var[c][j])) /
                  std::sqrt(2 * std::numbers::pi * var[c][j]);
  }
  const double posterior = joint[1] / (joint[0] + joint[1]);
  CHECK(m.decision_score(rows({{q[0], q[1]}}))[0] == doctest::Approx(posterior).epsilon(1e-12));
}

TEST_CASE("GNB variance floor and class-size guard") {
  const Matrix x = rows({{1, 0}, {1, 1}, {1, 2}, {1, 3}});
  const GnbModel m = GnbModel::fit(x, Labels{0, 0, 1, 1});
  CHECK(m.variances().col(0).minCoeff() > 0.0);
  CHECK(std::isfinite(m.decision_score(rows({{2, 1}}))[0]));
  CHECK_THROWS_AS(GnbModel::fit(x, Labels{0, 1, 1, 1}), InvalidArgument);
}

TEST_CASE("GNB stays finite far from every mean") {
  RngStream rng(4, "gnb-far");
  auto [x, y] = blobs(rng, 40, 5, 1.0);
  const GnbModel m = GnbModel::fit(x, y);
  const double spread = std::sqrt(m.variances().maxCoeff());
  Matrix far(4, 5);
  far.row(0).setConstant(100 * spread + 10);
  far.row(1).setConstant(-100 * spread - 10);
  far.row(2) = RowVector::LinSpaced(5, -100 * spread, 100 * spread);
  far.row(3).setConstant(1e3 * spread);
  const Vector s = m.decision_score(far);
  CHECK(s.allFinite());
}

TEST_CASE("LDA with identity within-class scatter points along the mean difference") {
  // Each class is its mean +- the unit vectors: pooled scatter is exactly 2I.
  const int d = 4;
  const RowVector mu0 = (RowVector(d) << 0.0, 1.0, -2.0, 0.5).finished();
  const RowVector mu1 = (RowVector(d) << 1.5, -1.0, 0.0, 2.5).finished();
  Matrix x(4 * d, d);
  Labels y;
  int r = 0;
  for (int c = 0; c < 2; ++c)
    for (int j = 0; j < d; ++j)
      for (double sgn : {1.0, -1.0}) {
        x.row(r) = c == 0 ? mu0 : mu1;
        x(r, j) += sgn;
        y.push_back(c);
        ++r;
      }
  const LdaModel m = LdaModel::fit(x, y);
  const Vector diff = (mu1 - mu0).transpose();
  const double cosine = m.weights().dot(diff) / (m.weights().norm() * diff.norm());
  CHECK(cosine >= 1 - 1e-6);
}

TEST_CASE("LDA label swap negates weights and scores exactly") {
  RngStream rng(5, "lda-swap");
  auto [x, y] = blobs(rng, 30, 4, 0.7);
  const LdaModel a = LdaModel::fit(x, y);
  const LdaModel b = LdaModel::fit(x, swapped(y));
  CHECK(b.weights() == -a.weights());
  const Matrix q = testutil::random_matrix(rng, 10, 4);
  CHECK(b.decision_score(q) == -a.decision_score(q));
}

TEST_CASE("LDA survives more features than samples") {
  RngStream rng(6, "lda-sss");
  auto [x, y] = blobs(rng, 20, 50, 0.3);
  const LdaModel m = LdaModel::fit(x, y);
  CHECK(m.weights().allFinite());
  const double majority = std::max(count_positive(y), 20 - count_positive(y)) / 20.0;
  const Labels pred = m.predict(x);
  int correct = 0;
  for (std::size_t i = 0; i < y.size(); ++i) correct += pred[i] == y[i];
  CHECK(correct / 20.0 >= majority);
}

TEST_CASE("ridge closed form") {
  SUBCASE("1-D hand solution") {
    const RidgeModel m = RidgeModel::fit(rows({{-1}, {1}}), Labels{0, 1}, 1.0);
    CHECK(m.weights()[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(std::abs(m.bias()) <= 1e-15);
  }
  SUBCASE("vanishing alpha reproduces OLS") {
    RngStream rng(7, "ridge-ols");
    auto [x, y] = blobs(rng, 40, 3, 0.5);
    const RidgeModel m = RidgeModel::fit(x, y, 1e-10);
    Eigen::MatrixXd design(40, 4);
    design << x, Eigen::VectorXd::Ones(40);
    const Vector ols = design.colPivHouseholderQr().solve(signed_targets(y));
    for (int j = 0; j < 3; ++j) CHECK(std::abs(m.weights()[j] - ols[j]) <= 1e-6);
    CHECK(std::abs(m.bias() - ols[3]) <= 1e-6);
  }
  SUBCASE("huge alpha shrinks to the majority class") {
    RngStream rng(8, "ridge-big");
    Matrix x = testutil::random_matrix(rng, 10, 3);
    const Labels y{1, 1, 0, 1, 1, 0, 1, 0, 1, 1};
    const RidgeModel m = RidgeModel::fit(x, y, 1e12);
    CHECK(m.weights().norm() <= 1e-9);
    CHECK(m.predict(testutil::random_matrix(rng, 20, 3)) == Labels(20, 1));
  }
  SUBCASE("alpha must be positive") {
    CHECK_THROWS_AS(RidgeModel::fit(rows({{-1}, {1}}), Labels{0, 1}, 0.0), InvalidArgument);
  }
}

TEST_CASE("random forest on separable data and determinism") {
  Matrix x(40, 1);
  Labels y(40);
  for (int i = 0; i < 40; ++i) {
    y[static_cast<std::size_t>(i)] = i % 2;
    x(i, 0) = (i % 2 == 0 ? 0.0 : 10.0) + i / 40.0;
  }
  for (int n_trees : {1, 2, 5, 16}) {
    const ForestModel f = ForestModel::fit(x, y, n_trees, 99);
    CHECK(f.predict(x) == y);
  }

  RngStream rng(9, "rf-det");
  auto [bx, by] = blobs(rng, 60, 6, 0.4);
  const Matrix grid = testutil::random_matrix(rng, 50, 6);
  const ForestModel a = ForestModel::fit(bx, by, 8, 1234);
  const ForestModel b = ForestModel::fit(bx, by, 8, 1234);
  CHECK(a.decision_score(grid) == b.decision_score(grid));
  CHECK_THROWS_AS(ForestModel::fit(bx, by, 0, 1), InvalidArgument);
}

TEST_CASE("single full-feature tree without bootstrap equals the exhaustive-split oracle") {
  RngStream rng(10, "rf-oracle");
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 6 + static_cast<int>(rng.uniform_index(25));
    const int d = 1 + static_cast<int>(rng.uniform_index(4));
    Matrix x = testutil::random_matrix(rng, n, d);
    // Coarse grid values create repeated coordinates.
    x = (x * 2).array().round() / 2;
    const Labels y = testutil::random_labels(rng, n, 2);
    ForestOptions opts;
    opts.bootstrap = false;
    opts.max_features = d;
    const ForestModel f = ForestModel::fit(x, y, 1, rng.next_u64(), opts);

    oracle::BruteTree ref;
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    const auto table = testutil::to_table(x);
    ref.build(table, y, all);

    const Matrix probe = testutil::random_matrix(rng, 100, d) * 1.5;
    const Labels got = f.predict(probe);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> q(probe.row(i).data(), probe.row(i).data() + d);
      CHECK(got[static_cast<std::size_t>(i)] == ref.predict(q));
    }
    CHECK(f.trees().front().nodes.size() == ref.nodes.size());
  }
}

TEST_CASE("every chosen split has the best Gini gain among its candidate features") {
  RngStream rng(11, "rf-gain");
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 30;
    const int d = 4;
    auto [x, y] = blobs(rng, n, d, 0.3);
    ForestOptions opts;
    opts.bootstrap = false;
    opts.max_features = 2;
    const ForestModel f = ForestModel::fit(x, y, 3, rng.next_u64(), opts);
    for (const auto& tree : f.trees()) {
      // Route the training rows to recover each node's sample set.
      std::vector<std::vector<int>> at(tree.nodes.size());
      for (int i = 0; i < n; ++i) {
        std::size_t node = 0;
        at[node].push_back(i);
        while (!tree.nodes[node].is_leaf()) {
          const auto& nd = tree.nodes[node];
          node = static_cast<std::size_t>(x(i, nd.feature) <= nd.threshold ? nd.left : nd.right);
          at[node].push_back(i);
        }
      }
      for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
        const auto& nd = tree.nodes[k];
        if (nd.is_leaf()) continue;
        CHECK(nd.candidates.size() == 2);
        CHECK(std::find(nd.candidates.begin(), nd.candidates.end(), nd.feature) != nd.candidates.end());
        const auto& members = at[k];
        double pos = 0;
        for (int i : members) pos += y[static_cast<std::size_t>(i)];
        const double total = static_cast<double>(members.size());
        const double parent = gini_impurity(pos, total);
        for (int f_idx : nd.candidates) {
          for (int a : members) {
            const double t = x(a, f_idx);
            double lp = 0, ln = 0;
            for (int i : members)
              if (x(i, f_idx) <= t) {
                ln += 1;
                lp += y[static_cast<std::size_t>(i)];
              }
            if (ln == total) continue;
            const double gain = parent - (ln / total) * gini_impurity(lp, ln) -
                                ((total - ln) / total) * gini_impurity(pos - lp, total - ln);
            CHECK(nd.gain >= gain - 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("score and prediction agree for every classifier") {
  RngStream rng(12, "consistency");
  auto [x, y] = blobs(rng, 40, 3, 0.6);
  const Matrix q = testutil::random_matrix(rng, 200, 3, 2.0);
  const std::vector<std::pair<ClassifierId, HyperParams>> models{
      {ClassifierId::knn, {{"k", 5}}},       {ClassifierId::gnb, {}},
      {ClassifierId::lda, {}},               {ClassifierId::ridge, {{"alpha", 1}}},
      {ClassifierId::svm_linear, {{"C", 1}}}, {ClassifierId::svm_rbf, {{"C", 10}, {"gamma", 0.5}}},
      {ClassifierId::rf, {{"n_trees", 7}}}};
  for (const auto& [id, params] : models) {
    CAPTURE(to_string(id));
    const auto m = fit_classifier(id, x, y, params, 5);
    const Vector s = m->decision_score(q);
    const Labels p = m->predict(q);
    for (int i = 0; i < q.rows(); ++i) {
      const bool positive = id == ClassifierId::ridge ? s[i] >= m->threshold() : s[i] > m->threshold();
      CHECK(p[static_cast<std::size_t>(i)] == (positive ? 1 : 0));
    }
    CHECK(m->describe().at("classifier") == to_string(id));
  }
}

TEST_CASE("label swap flips hard predictions") {
  RngStream rng(13, "swap");
  auto [x, y] = blobs(rng, 40, 3, 0.8);
  const Labels ys = swapped(y);
  const Matrix q = testutil::random_matrix(rng, 200, 3, 2.0);
  const std::vector<std::pair<ClassifierId, HyperParams>> models{
      {ClassifierId::knn, {{"k", 5}}},        {ClassifierId::gnb, {}},
      {ClassifierId::lda, {}},                {ClassifierId::ridge, {{"alpha", 1}}},
      {ClassifierId::svm_linear, {{"C", 1}}}, {ClassifierId::svm_rbf, {{"C", 10}, {"gamma", 0.5}}},
      {ClassifierId::rf, {{"n_trees", 7}}}};
  for (const auto& [id, params] : models) {
    CAPTURE(to_string(id));
    const auto a = fit_classifier(id, x, y, params, 77);
    const auto b = fit_classifier(id, x, ys, params, 77);
    const Labels pa = a->predict(q);
    const Labels pb = b->predict(q);
    const Vector sa = a->decision_score(q);
    const bool svm = id == ClassifierId::svm_linear || id == ClassifierId::svm_rbf;
    for (int i = 0; i < q.rows(); ++i) {
      // SMO visits pairs in a label-dependent order, so its solution only
      // agrees up to the stopping tolerance.
      if (svm && std::abs(sa[i]) < 1e-2) continue;
      CHECK(pa[static_cast<std::size_t>(i)] == 1 - pb[static_cast<std::size_t>(i)]);
    }
  }
}

TEST_CASE("training-set validation") {
  CHECK_THROWS_AS(GnbModel::fit(Matrix(3, 2), Labels{0, 1}), InvalidArgument);
  CHECK_THROWS_AS(LdaModel::fit(rows({{1}, {2}}), Labels{1, 1}), InvalidArgument);
  CHECK_THROWS_AS(LdaModel::fit(rows({{1}, {2}}), Labels{0, 2}), InvalidArgument);
  CHECK_THROWS_AS(fit_classifier(ClassifierId::knn, rows({{1}, {2}}), Labels{0, 1}, {}, 0), InvalidArgument);
  CHECK(parse_classifier("svm_rbf") == ClassifierId::svm_rbf);
  CHECK_THROWS_AS(parse_classifier("xgboost"), InvalidArgument);
}
