#include "cbo/harness/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cbo/harness/results_csv.hpp"

namespace cbo::harness {

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile: empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double oc_at(const engine::RunRecord& record, double spent) {
  if (record.rows.empty()) throw std::invalid_argument("oc_at: empty record");
  double value = record.rows.front().oc;
  for (const auto& row : record.rows) {
    if (row.spent > spent + 1e-12) break;
    value = row.oc;
  }
  return value;
}

AggregateCurve aggregate(const std::vector<engine::RunRecord>& records, std::size_t num_tasks, double budget,
                         double step, std::string label) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  if (!(step > 0.0) || !(budget > 0.0)) throw std::invalid_argument("aggregate: budget and step must be positive");
  AggregateCurve curve;
  curve.label = std::move(label);
  const auto n = static_cast<std::size_t>(std::floor(budget / step + 1e-9)) + 1;
  curve.cumulative.assign(num_tasks, std::vector<double>(n, 0.0));
  for (std::size_t g = 0; g < n; ++g) {
    const double b = std::min(budget, static_cast<double>(g) * step);
    curve.budget.push_back(b);
    std::vector<double> ocs;
    for (const auto& rec : records) {
      ocs.push_back(oc_at(rec, b));
      for (const auto& row : rec.rows) {
        if (row.step != 0 && row.spent > b + 1e-12) break;
        for (auto t : row.tasks) {
          if (t < num_tasks) curve.cumulative[t][g] += 1.0;
        }
      }
    }
    curve.median.push_back(percentile(ocs, 50.0));
    curve.p25.push_back(percentile(ocs, 25.0));
    curve.p75.push_back(percentile(ocs, 75.0));
    for (auto& c : curve.cumulative) c[g] /= static_cast<double>(records.size());
  }
  return curve;
}

void write_aggregate(const std::filesystem::path& path, const AggregateCurve& curve) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << "budget,median_oc,p25_oc,p75_oc";
  for (std::size_t k = 0; k < curve.cumulative.size(); ++k) f << ",evals_task" << k;
  f << '\n';
  for (std::size_t g = 0; g < curve.budget.size(); ++g) {
    f << format_double(curve.budget[g]) << ',' << format_double(curve.median[g]) << ','
      << format_double(curve.p25[g]) << ',' << format_double(curve.p75[g]);
    for (const auto& c : curve.cumulative) f << ',' << format_double(c[g]);
    f << '\n';
  }
}

AggregateCurve read_aggregate(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  AggregateCurve curve;
  curve.label = path.stem().string();
  const std::string suffix = "_aggregate";
  if (curve.label.size() > suffix.size() && curve.label.ends_with(suffix)) {
    curve.label.resize(curve.label.size() - suffix.size());
  }
  std::string line;
  std::getline(f, line);
  const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 4) throw std::invalid_argument("aggregate csv: unexpected header");
  curve.cumulative.assign(columns - 4, {});
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != columns) throw std::invalid_argument("aggregate csv: ragged row");
    curve.budget.push_back(v[0]);
    curve.median.push_back(v[1]);
    curve.p25.push_back(v[2]);
    curve.p75.push_back(v[3]);
    for (std::size_t k = 0; k + 4 < columns; ++k) curve.cumulative[k].push_back(v[4 + k]);
  }
  return curve;
}

}  // namespace cbo::harness
