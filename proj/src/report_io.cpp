#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mlbench/runner.hpp"

namespace mlbench {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

constexpr int kFolds = 5;

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::string format_params(const HyperParams& p) {
  std::string out;
  for (const auto& [name, value] : p) {
    if (!out.empty()) out += ';';
    out += name + '=' + format_number(value);
  }
  return out;
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw DataError("cannot parse number '" + s + "'");
  return v;
}

HyperParams parse_params(const std::string& s) {
  HyperParams p;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ';')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw DataError("bad hyperparameter entry '" + item + "'");
    p[item.substr(0, eq)] = parse_number(item.substr(eq + 1));
  }
  return p;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

void write_report(const EvaluationReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "report.csv");
    out << "reducer,s,effective_s,classifier,objective";
    for (int t = 1; t <= kFolds; ++t) out << ",fold_" << t;
    out << ",mean,evaluations,hyperparameters,status,error\n";
    for (const auto& r : report.rows) {
      out << to_string(r.reducer) << ',' << r.s << ',' << r.effective_s << ',' << to_string(r.classifier) << ','
          << to_string(r.objective);
      for (int t = 0; t < kFolds; ++t)
        out << ',' << (static_cast<std::size_t>(t) < r.fold_scores.size() ? format_number(r.fold_scores[static_cast<std::size_t>(t)]) : "");
      out << ',' << (r.ok() ? format_number(r.mean) : "") << ',' << r.evaluations << ',' << format_params(r.chosen) << ','
          << (r.ok() ? "ok" : "failed") << ',' << sanitize(r.error) << '\n';
    }
  }
  {
    auto out = open_out(dir / "timings.csv");
    out << "reducer,s,classifier,objective,wall_ms\n";
    for (const auto& r : report.rows)
      out << to_string(r.reducer) << ',' << r.s << ',' << to_string(r.classifier) << ',' << to_string(r.objective)
          << ',' << format_number(std::round(r.wall_ms * 1000.0) / 1000.0) << '\n';
  }
  {
    nlohmann::json meta;
    meta["toolkit_version"] = report.version;
    meta["config"] = report.config.to_json();
    meta["grid_sizes"] = report.grid_log;
    meta["folds"] = kFolds;
    meta["protocol"] = "non-nested: the best grid point's cross-validated score is the reported score";
    meta["rows"] = report.rows.size();
    meta["failed_rows"] = std::count_if(report.rows.begin(), report.rows.end(), [](const ReportRow& r) { return !r.ok(); });
    auto out = open_out(dir / "config.json");
    out << meta.dump(2) << '\n';
  }
  {
    auto out = open_out(dir / "grids.txt");
    for (const auto& line : report.grid_log) out << line << '\n';
  }
}

std::vector<ReportRow> read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  std::vector<ReportRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 10 + kFolds)
      throw DataError(path.string() + " line " + std::to_string(line_no) + ": unexpected field count");
    ReportRow r;
    try {
      r.reducer = parse_reducer(f[0]);
      r.s = std::stoi(f[1]);
      r.effective_s = std::stoi(f[2]);
      r.classifier = parse_classifier(f[3]);
      r.objective = parse_objective(f[4]);
      for (int t = 0; t < kFolds; ++t)
        if (!f[5 + static_cast<std::size_t>(t)].empty()) r.fold_scores.push_back(parse_number(f[5 + static_cast<std::size_t>(t)]));
      const std::size_t base = 5 + kFolds;
      if (!f[base].empty()) r.mean = parse_number(f[base]);
      r.evaluations = static_cast<std::size_t>(std::stoul(f[base + 1]));
      r.chosen = parse_params(f[base + 2]);
      if (f[base + 3] != "ok") r.error = f[base + 4].empty() ? "failed" : f[base + 4];
    } catch (const DataError&) {
      throw;
    } catch (const std::exception& e) {
      throw DataError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<std::filesystem::path> export_figure_data(const std::vector<ReportRow>& rows,
                                                      const std::filesystem::path& dir) {
  if (rows.empty()) throw InvalidArgument("cannot export figure data from an empty report");
  std::filesystem::create_directories(dir);

  using Key = std::pair<ReducerKind, Objective>;
  std::map<Key, std::vector<const ReportRow*>> groups;
  for (const auto& r : rows) groups[{r.reducer, r.objective}].push_back(&r);

  std::vector<std::filesystem::path> written;
  for (const auto& [key, group] : groups) {
    std::set<int> s_values;
    std::vector<ClassifierId> classifiers;
    std::map<std::pair<int, ClassifierId>, const ReportRow*> cell;
    for (const ReportRow* r : group) {
      s_values.insert(r->s);
      if (std::find(classifiers.begin(), classifiers.end(), r->classifier) == classifiers.end())
        classifiers.push_back(r->classifier);
      cell[{r->s, r->classifier}] = r;
    }
    std::sort(classifiers.begin(), classifiers.end());

    const auto path = dir / ("figure_" + to_string(key.first) + "_" + to_string(key.second) + ".csv");
    auto out = open_out(path);
    out << 's';
    for (ClassifierId c : classifiers) out << ',' << to_string(c);
    out << '\n';
    for (int s : s_values) {
      out << s;
      for (ClassifierId c : classifiers) {
        const auto it = cell.find({s, c});
        out << ',';
        if (it != cell.end() && it->second->ok()) out << format_number(it->second->mean);
      }
      out << '\n';
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace mlbench
