#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dam/cuts.hpp"
#include "dam/instance.hpp"

namespace dam {

enum class ClearingMode { heuristic, exact, oracle };
enum class ClearingStatus { optimal, converged, limit };

std::string to_string(ClearingMode mode);
std::string to_string(ClearingStatus status);

// Paradoxically rejected bid.
struct Prb {
  BinaryVar::Kind kind = BinaryVar::Kind::block;
  std::size_t bid = 0;
  std::optional<std::size_t> hour;  // flex: most profitable hour
  double surplus = 0.0;
};

struct IterationRecord {
  double master_objective = 0.0;
  BidSelection selection;
  LossSets losses;
  std::size_t curtailment_violations = 0;
  std::vector<std::string> cuts;
};

struct ClearingResult {
  PrimalSolution solution;
  PriceVector prices;
  DualCertificate duals;
  double welfare = 0.0;
  double dual_bound = 0.0;
  double relative_gap = 0.0;
  std::vector<IterationRecord> log;  // exact mode: warm-start iterations first
  std::vector<Prb> prbs;
  ClearingMode mode = ClearingMode::heuristic;
  ClearingStatus status = ClearingStatus::optimal;
  std::vector<std::string> warnings;
  bool curtailment_cuts_fired = false;
};

double relative_gap(double bound, double welfare);

}  // namespace dam
