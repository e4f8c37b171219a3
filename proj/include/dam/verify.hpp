#pragma once

#include <span>
#include <string>
#include <vector>

#include "dam/instance.hpp"
#include "dam/result.hpp"

namespace dam {

struct Violation {
  std::string condition;
  std::string location;
  double amount = 0.0;
};

struct ConditionReport {
  bool pass = true;
  std::vector<Violation> violations;

  void add(std::string condition, std::string location, double amount);
  void merge(const ConditionReport& other);
};

enum class FillingMode {
  case_rule,  // three-case price rule
  kkt,        // multiplier construction
  gamma,      // case rule plus a monotone binary fill indicator
};

ConditionReport check_filling(const Instance& instance, std::span<const double> delta, const PriceVector& prices,
                              double tol = 1e-6, FillingMode mode = FillingMode::case_rule);

enum class FlowPriceMode {
  general,    // multiplier existence by interval propagation
  fast_path,  // closed-form test; interconnectors with ramps use the general test
};

ConditionReport check_flow_price(const Instance& instance, const FlowMatrix& flows, const PriceVector& prices,
                                 double tol = 1e-6, FlowPriceMode mode = FlowPriceMode::general,
                                 double tight_tol = 1e-7);

ConditionReport check_bid_prices(const Instance& instance, const BidSelection& selection, const PriceVector& prices,
                                 double tol = 1e-6);

ConditionReport check_curtailment(const Instance& instance, const PrimalSolution& solution, double tol = 1e-6);

// Clearing balance, flow bounds, ramps and fill bounds.
ConditionReport check_primal(const Instance& instance, const PrimalSolution& solution, double tol = 1e-6);

// Primal feasibility plus the four equilibrium conditions.
ConditionReport check_all(const Instance& instance, const PrimalSolution& solution, const PriceVector& prices,
                          double tol = 1e-6);

std::vector<Prb> list_prbs(const Instance& instance, const BidSelection& selection, const PriceVector& prices,
                           double tol = 1e-9);
std::vector<Prb> list_prbs(const Instance& instance, const ClearingResult& result, double tol = 1e-9);

enum class FrontierStatus { unchecked, price_infeasible, curtailment, feasible };

struct FrontierEntry {
  BidSelection selection;
  double welfare = 0.0;
  FrontierStatus status = FrontierStatus::unchecked;
};

struct OracleOptions {
  std::size_t max_binaries = 12;
};

struct OracleResult {
  ClearingResult result;
  std::vector<FrontierEntry> frontier;  // relaxation-feasible selections, best welfare first
  std::size_t selections = 0;           // link-consistent selections enumerated
};

// Brute force over all link-consistent selections. Throws TooLarge.
OracleResult oracle_clear(const Instance& instance, const OracleOptions& options = {});

}  // namespace dam
