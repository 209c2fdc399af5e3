#include "cbo/engine/ledger.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cbo::engine {

CostVector::CostVector(Vector b) : b_(std::move(b)) {
  if (b_.size() == 0) throw std::invalid_argument("CostVector: empty");
  for (Eigen::Index i = 0; i < b_.size(); ++i) {
    if (!(b_[i] > 0.0) || !std::isfinite(b_[i])) throw std::invalid_argument("CostVector: costs must be positive");
  }
}

CostVector::CostVector(std::initializer_list<double> b) : CostVector(Vector::Map(b.begin(), static_cast<Eigen::Index>(b.size()))) {}

CostVector CostVector::uniform(std::size_t num_tasks, double cost) {
  return CostVector(Vector::Constant(static_cast<Eigen::Index>(num_tasks), cost));
}

CostVector CostVector::parse(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    vals.push_back(v);
  }
  return CostVector(Vector::Map(vals.data(), static_cast<Eigen::Index>(vals.size())));
}

std::string CostVector::to_string() const {
  std::string out;
  for (Eigen::Index i = 0; i < b_.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", b_[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

EvaluationLedger::EvaluationLedger(CostVector costs, double budget, bool budget_includes_initial)
    : costs_(std::move(costs)),
      budget_(budget),
      budget_includes_initial_(budget_includes_initial),
      counts_(costs_.size(), 0) {
  if (!(budget > 0.0)) throw std::invalid_argument("EvaluationLedger: budget must be positive");
}

double EvaluationLedger::cost_of(const std::vector<std::size_t>& tasks) const {
  double c = 0.0;
  for (auto t : tasks) c += costs_[t];
  return c;
}

bool EvaluationLedger::fits(double cost) const { return cost <= remaining() + 1e-9 * (1.0 + budget_); }

void EvaluationLedger::record(LedgerEntry entry) {
  if (entry.tasks.empty()) throw std::invalid_argument("EvaluationLedger: empty task set");
  for (auto t : entry.tasks) {
    if (t >= costs_.size()) throw std::invalid_argument("EvaluationLedger: task index out of range");
    counts_[t] += 1;
  }
  const double c = cost_of(entry.tasks);
  spent_ += c;
  if (entry.iteration == 0) initial_spent_ += c;
  entries_.push_back(std::move(entry));
}

}  // namespace cbo::engine
