#pragma once

#include <initializer_list>
#include <string>

#include "cbo/common.hpp"

namespace cbo::engine {

/// Per-task evaluation costs; index 0 is the objective, 1..K the constraints.
class CostVector {
 public:
  CostVector() = default;
  explicit CostVector(Vector b);
  CostVector(std::initializer_list<double> b);
  /// K+1 unit costs.
  static CostVector uniform(std::size_t num_tasks, double cost = 1.0);
  /// Parses a comma-separated list such as "5,1".
  static CostVector parse(const std::string& text);

  double operator[](std::size_t task) const { return b_[static_cast<Eigen::Index>(task)]; }
  std::size_t size() const { return static_cast<std::size_t>(b_.size()); }
  double total() const { return b_.sum(); }
  double min() const { return b_.minCoeff(); }
  double max() const { return b_.maxCoeff(); }
  const Vector& values() const { return b_; }
  std::string to_string() const;

 private:
  Vector b_;
};

}  // namespace cbo::engine
