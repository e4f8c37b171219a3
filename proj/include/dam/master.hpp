#pragma once

#include <cstddef>
#include <optional>

#include "dam/cuts.hpp"
#include "dam/instance.hpp"

namespace dam {

struct MasterOptions {
  double abs_gap = 1e-9;
  std::optional<double> time_limit;  // seconds
  std::optional<BidSelection> incumbent;
  bool presolve = true;
  double integrality_tol = 1e-6;
};

enum class MasterStatus { optimal, infeasible, limit };

struct MasterResult {
  PrimalSolution solution;
  double objective = 0.0;
  double dual_bound = 0.0;
  std::size_t nodes = 0;
  MasterStatus status = MasterStatus::optimal;
};

// Throws Infeasible when the cuts exclude every selection, and TimeLimit when
// the limit expires before any selection was found.
MasterResult solve_master(const Instance& instance, const CutPool& cuts, const MasterOptions& options = {});

}  // namespace dam
