#include "cbo/optim/box.hpp"

#include <stdexcept>

namespace cbo::optim {

Box::Box(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() == 0) {
    throw std::invalid_argument("Box: bounds must be non-empty and of equal dimension");
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i])) {
      throw std::invalid_argument("Box: lower bound must be strictly below upper bound");
    }
  }
}

bool Box::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
  }
  return true;
}

Vector Box::clip(const Vector& x) const { return x.cwiseMax(lower_).cwiseMin(upper_); }

Vector Box::from_unit(const Vector& u) const {
  return lower_ + u.cwiseProduct(upper_ - lower_);
}

Matrix Box::from_unit_rows(const Matrix& u) const {
  Matrix out(u.rows(), u.cols());
  const Vector w = width();
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    out.row(r) = (lower_ + u.row(r).transpose().cwiseProduct(w)).transpose();
  }
  return out;
}

}  // namespace cbo::optim
