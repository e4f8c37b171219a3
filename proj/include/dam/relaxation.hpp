#pragma once

#include <optional>

#include "dam/instance.hpp"
#include "dam/qp_engine.hpp"

namespace dam {

struct QprelaxAssembly {
  qp::QpProblem problem;
  FixedSelectionTerms terms;
  std::vector<std::size_t> delta_var;  // npos for horizontal segments
  Grid<std::size_t> flow_var;
  Grid<std::size_t> clearing_row;
};

QprelaxAssembly assemble_qprelax(const Instance& instance, const BidSelection& selection);

struct RelaxationOutcome {
  std::vector<double> delta;
  FlowMatrix flows;
  PriceVector prices;
  DualCertificate duals;
  double objective = 0.0;

  PrimalSolution solution(const BidSelection& selection) const { return {selection, delta, flows}; }
};

// nullopt when the selection's fixed volume cannot be cleared.
std::optional<RelaxationOutcome> try_solve_relaxation(const Instance& instance, const BidSelection& selection);
// Throws Infeasible instead.
RelaxationOutcome solve_relaxation(const Instance& instance, const BidSelection& selection);

// v_bar / v_low for every segment implied by (delta, pi).
void fill_multipliers(const Instance& instance, std::span<const double> delta, const PriceVector& prices,
                      std::vector<double>& upper, std::vector<double>& lower);

}  // namespace dam
