#pragma once

#include "cbo/common.hpp"

namespace cbo::optim {

/// Axis-aligned search domain. Invariant: lower[i] < upper[i].
class Box {
 public:
  Box() = default;
  Box(Vector lower, Vector upper);

  Eigen::Index dim() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  Vector width() const { return upper_ - lower_; }

  bool contains(const Vector& x, double tol = 0.0) const;
  Vector clip(const Vector& x) const;
  /// Maps a point of the unit cube onto the box.
  Vector from_unit(const Vector& u) const;
  /// Maps every row of a unit-cube point set onto the box.
  Matrix from_unit_rows(const Matrix& u) const;

 private:
  Vector lower_;
  Vector upper_;
};

}  // namespace cbo::optim
