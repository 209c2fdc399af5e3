#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cbo/engine/engine.hpp"

namespace cbo::harness {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Header: seed,step,task_set,x0..x{d-1},spent,oc,r0..r{d-1}. task_set joins task indices with '|'.
std::string results_csv(const std::vector<engine::RunRecord>& records, Eigen::Index dim);
void write_results(const std::filesystem::path& path, const std::vector<engine::RunRecord>& records,
                   Eigen::Index dim);
/// Rebuilds the rows of each record (ledgers are not stored in the CSV).
std::vector<engine::RunRecord> parse_results(const std::string& text);
std::vector<engine::RunRecord> read_results(const std::filesystem::path& path);

}  // namespace cbo::harness
