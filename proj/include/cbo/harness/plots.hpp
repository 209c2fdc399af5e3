#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cbo/harness/aggregate.hpp"

namespace cbo::harness {

/// Writes oc.svg (median OC against budget with interquartile bands, one series per curve)
/// and evaluations_<label>.svg (cumulative evaluations per task) into `output`.
/// Returns the files written; an empty curve list writes nothing and warns on stderr.
std::vector<std::filesystem::path> emit_plots(const std::vector<AggregateCurve>& curves,
                                              const std::filesystem::path& output, const std::string& title = {});

}  // namespace cbo::harness
