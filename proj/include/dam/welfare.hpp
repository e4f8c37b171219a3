#pragma once

#include <span>
#include <vector>

#include "dam/instance.hpp"

namespace dam {

// Economic surplus with the additive constant dropped (relative welfare).
double welfare(const Instance& instance, std::span<const double> delta, const BidSelection& selection);
double welfare(const Instance& instance, const PrimalSolution& solution);

struct SurplusReport {
  std::vector<double> segments;  // omega_h
  std::vector<double> blocks;    // omega_b
  std::vector<double> flex;      // omega_f
  Grid<double> congestion;       // omega_{c,t}
  double constant_offset = 0.0;  // K, so total - K equals welfare()
  double total = 0.0;
};

SurplusReport surplus_report(const Instance& instance, const PrimalSolution& solution, const PriceVector& prices,
                             double tol = 1e-6);

// Surplus of a block at prices pi: sum_t (p_b - pi_{a,t}) q_{b,t}.
double block_surplus(const Instance& instance, std::size_t block, const PriceVector& prices);
// Surplus of a flex bid executed in hour t.
double flex_surplus(const Instance& instance, std::size_t flex, std::size_t hour, const PriceVector& prices);

double big_m(const BlockBid& block, const PriceInterval& interval);
double big_m(const FlexBid& flex, const PriceInterval& interval);

}  // namespace dam
