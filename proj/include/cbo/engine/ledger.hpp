#pragma once

#include <vector>

#include "cbo/common.hpp"
#include "cbo/engine/costs.hpp"

namespace cbo::engine {

/// One evaluation event: the tasks in q(m), evaluated together at `location`.
struct LedgerEntry {
  int iteration = 0;  ///< 0 for the initial design
  std::vector<std::size_t> tasks;
  Vector location;
  std::vector<double> values;  ///< observed value per entry of `tasks`
};

/// Exact cost accounting against the budget B.
class EvaluationLedger {
 public:
  EvaluationLedger() = default;
  EvaluationLedger(CostVector costs, double budget, bool budget_includes_initial);

  /// Appends the entry and charges sum_{k in tasks} b_k.
  void record(LedgerEntry entry);

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  const CostVector& costs() const { return costs_; }
  double budget() const { return budget_; }
  /// Total spend including the initial design.
  double spent() const { return spent_; }
  double initial_spent() const { return initial_spent_; }
  /// Spend that counts against the budget.
  double budget_spent() const { return budget_includes_initial_ ? spent_ : spent_ - initial_spent_; }
  double remaining() const { return budget_ - budget_spent(); }
  bool fits(double cost) const;
  const std::vector<int>& per_task_counts() const { return counts_; }
  /// Cost of evaluating a task set.
  double cost_of(const std::vector<std::size_t>& tasks) const;

 private:
  CostVector costs_;
  double budget_ = 0.0;
  bool budget_includes_initial_ = false;
  double spent_ = 0.0;
  double initial_spent_ = 0.0;
  std::vector<int> counts_;
  std::vector<LedgerEntry> entries_;
};

}  // namespace cbo::engine
