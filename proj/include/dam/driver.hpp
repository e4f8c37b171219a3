#pragma once

#include <optional>

#include "dam/instance.hpp"
#include "dam/pricing.hpp"
#include "dam/result.hpp"

namespace dam {

struct ClearingOptions {
  std::optional<double> time_limit;  // seconds
  double abs_gap = 1e-9;
  std::optional<std::size_t> iteration_limit;  // default 10 (|B| + |F|), at least 10
  bool presolve = true;
};

ClearingResult clear_heuristic(const Instance& instance, const ClearingOptions& options = {});
ClearingResult clear_exact(const Instance& instance, const ClearingOptions& options = {});
ClearingResult clear(const Instance& instance, ClearingMode mode, const ClearingOptions& options = {});

struct SelectionCheck {
  PrimalSolution solution;  // after the flow fix
  std::optional<PricingOutcome> pricing;
  std::vector<CurtailmentViolation> curtailment;
  bool feasible() const { return pricing.has_value() && curtailment.empty(); }
};

// Strict price feasibility of a relaxation-optimal solution: flow fix, loss-free
// prices, curtailment priority.
SelectionCheck check_selection(const Instance& instance, const PrimalSolution& relaxed);

}  // namespace dam
