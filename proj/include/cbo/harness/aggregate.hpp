#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cbo/engine/engine.hpp"

namespace cbo::harness {

struct AggregateCurve {
  std::string label;
  std::vector<double> budget;
  std::vector<double> median;
  std::vector<double> p25;
  std::vector<double> p75;
  /// cumulative[k][g]: mean number of evaluations of task k once `budget[g]` is spent,
  /// initial design included.
  std::vector<std::vector<double>> cumulative;
};

/// Linear-interpolation percentile (q in [0, 100]) of a non-empty sample.
double percentile(std::vector<double> values, double q);

/// OC value in force once `spent` has been charged (previous-value interpolation).
double oc_at(const engine::RunRecord& record, double spent);

/// Aggregates runs onto the grid 0, step, 2 step, ... up to budget.
AggregateCurve aggregate(const std::vector<engine::RunRecord>& records, std::size_t num_tasks, double budget,
                         double step, std::string label = {});

void write_aggregate(const std::filesystem::path& path, const AggregateCurve& curve);
AggregateCurve read_aggregate(const std::filesystem::path& path);

}  // namespace cbo::harness
