#pragma once

#include <vector>

#include "cbo/gp/model.hpp"

namespace cbo::acq {

/// Independent GP surrogates for the objective (task 0) and each constraint (tasks 1..K).
struct ModelBundle {
  gp::GpModel objective;
  std::vector<gp::GpModel> constraints;

  std::size_t num_constraints() const { return constraints.size(); }
  std::size_t num_tasks() const { return 1 + constraints.size(); }
  const gp::GpModel& task(std::size_t index) const { return index == 0 ? objective : constraints.at(index - 1); }
  Eigen::Index dim() const { return objective.dim(); }
  /// Throws std::invalid_argument when the models disagree on input dimension.
  void validate() const;
};

}  // namespace cbo::acq
