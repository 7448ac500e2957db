#include "mlbench/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mlbench/rng.hpp"

namespace mlbench {

Matrix take_rows(const Matrix& x, const std::vector<int>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

Labels take(const Labels& y, const std::vector<int>& rows) {
  Labels out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(y[static_cast<std::size_t>(r)]);
  return out;
}

int count_positive(const Labels& y) {
  return static_cast<int>(std::count(y.begin(), y.end(), 1));
}

void Dataset::validate() const {
  if (n() < 2) throw InvalidArgument("dataset needs at least 2 samples");
  if (d() < 1) throw InvalidArgument("dataset needs at least 1 feature");
  if (labels.size() != static_cast<std::size_t>(n()))
    throw InvalidArgument("label count does not match row count");
  if (feature_names.size() != static_cast<std::size_t>(d()))
    throw InvalidArgument("feature name count does not match column count");
  for (int v : labels)
    if (v != 0 && v != 1) throw InvalidArgument("labels must be 0 or 1");
  if (!features.allFinite()) throw InvalidArgument("features contain non-finite values");
  std::set<std::string> seen(feature_names.begin(), feature_names.end());
  if (seen.size() != feature_names.size()) throw InvalidArgument("feature names are not unique");
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path.string() + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_fields(line);
  for (auto& h : header) h = trim(h);

  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) throw DataError("label column '" + label_column + "' not found in header");
  const std::size_t label_pos = static_cast<std::size_t>(label_it - header.begin());

  Dataset data;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_pos) data.feature_names.push_back(header[c]);
  const std::size_t d = data.feature_names.size();

  std::vector<double> values;
  std::vector<std::string> raw_labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size())
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string cell = trim(fields[c]);
      if (c == label_pos) {
        raw_labels.push_back(cell);
        continue;
      }
      double v = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      const std::string where = "line " + std::to_string(line_no) + ", column '" + header[c] + "'";
      if (cell.empty() || ec != std::errc() || ptr != last)
        throw DataError(where + ": cannot parse '" + cell + "' as a number");
      if (!std::isfinite(v)) throw DataError(where + ": non-finite value '" + cell + "'");
      values.push_back(v);
    }
  }

  const std::set<std::string> distinct(raw_labels.begin(), raw_labels.end());
  if (distinct.size() != 2)
    throw DataError("label column '" + label_column + "' must hold exactly two distinct values, found " +
                    std::to_string(distinct.size()));
  data.class_names.assign(distinct.begin(), distinct.end());

  const auto n = static_cast<Eigen::Index>(raw_labels.size());
  data.features = Eigen::Map<const Matrix>(values.data(), n, static_cast<Eigen::Index>(d));
  data.labels.reserve(raw_labels.size());
  for (const auto& l : raw_labels) data.labels.push_back(l == data.class_names[1] ? 1 : 0);

  try {
    data.validate();
  } catch (const InvalidArgument& e) {
    throw DataError("'" + path.string() + "': " + e.what());
  }
  return data;
}

void save_csv(const Dataset& data, const std::filesystem::path& path, const std::string& label_column) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  for (const auto& name : data.feature_names) out << name << ',';
  out << label_column << '\n';
  char buf[32];
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.d(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", data.features(i, j));
      out << buf << ',';
    }
    out << data.class_names[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)])] << '\n';
  }
}

Standardizer Standardizer::fit(const Matrix& train) {
  if (train.rows() < 2) throw InvalidArgument("standardizer needs at least 2 rows");
  Standardizer s;
  s.means_ = train.colwise().mean().transpose();
  const Matrix centered = train.rowwise() - s.means_.transpose();
  s.std_devs_ = (centered.colwise().squaredNorm() / static_cast<double>(train.rows())).cwiseSqrt().transpose();
  for (Eigen::Index j = 0; j < s.std_devs_.size(); ++j)
    if (!(s.std_devs_[j] > 0.0)) s.std_devs_[j] = 1.0;
  return s;
}

Matrix Standardizer::transform(const Matrix& x) const {
  if (x.cols() != means_.size()) throw InvalidArgument("standardizer column count mismatch");
  return (x.rowwise() - means_.transpose()).array().rowwise() / std_devs_.transpose().array();
}

std::vector<int> FoldPlan::test_indices(int t) const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i)
    if (fold_assignments[static_cast<std::size_t>(i)] == t) out.push_back(i);
  return out;
}

std::vector<int> FoldPlan::train_indices(int t) const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i)
    if (fold_assignments[static_cast<std::size_t>(i)] != t) out.push_back(i);
  return out;
}

FoldPlan make_folds(const Labels& labels, int k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("need at least 2 folds");
  std::vector<int> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    if (y != 0 && y != 1) throw InvalidArgument("labels must be 0 or 1");
    by_class[y].push_back(static_cast<int>(i));
  }
  for (int c = 0; c < 2; ++c)
    if (static_cast<int>(by_class[c].size()) < k)
      throw InvalidArgument("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                            " members, fewer than " + std::to_string(k) + " folds");

  FoldPlan plan;
  plan.seed = seed;
  plan.k = k;
  plan.fold_assignments.assign(labels.size(), -1);
  RngStream rng(seed, "folds");
  int next = 0;
  for (auto& members : by_class) {
    rng.shuffle(members);
    for (int idx : members) {
      plan.fold_assignments[static_cast<std::size_t>(idx)] = next;
      next = (next + 1) % k;
    }
  }
  return plan;
}

}  // namespace mlbench
