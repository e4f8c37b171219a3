#pragma once

#include <span>
#include <string>
#include <vector>

#include "dam/instance.hpp"

namespace dam {

// Minimum squared-flow solution with the same welfare; vertical segments are
// refilled in merit order afterwards.
PrimalSolution solve_fixflow(const Instance& instance, const PrimalSolution& solution);

struct PricingOutcome {
  PriceVector prices;
  std::vector<double> block_loss;  // lambda_b, 0 for rejected blocks
  std::vector<double> flex_loss;   // lambda_f, 0 for rejected flex bids
  DualCertificate duals;
  double total_loss = 0.0;
};

struct PricingOptions {
  double fill_tol = 1e-9;   // classifying delta as 0, 1 or interior
  double tight_tol = 1e-7;  // flow constraints treated as binding
};

// relax_losses = false throws Infeasible when no loss-free price exists.
PricingOutcome solve_qpprice(const Instance& instance, const PrimalSolution& solution, bool relax_losses,
                             const PricingOptions& options = {});

struct ClampResult {
  PriceVector prices;
  std::vector<std::string> warnings;
};

ClampResult clamp_prices(const PriceVector& prices, std::span<const PriceInterval> area_intervals);
ClampResult clamp_prices(const PriceVector& prices, const Instance& instance);

}  // namespace dam
