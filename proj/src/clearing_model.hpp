#pragma once

#include <vector>

#include "dam/instance.hpp"
#include "dam/qp_engine.hpp"

namespace dam::detail {

// Welfare-maximisation QP over (delta, tau) and, without a fixed selection,
// relaxed bid variables in [0, 1].
struct ClearingModel {
  qp::QpProblem problem;
  std::vector<std::size_t> delta_var;  // npos for horizontal segments
  Grid<std::size_t> flow_var;
  Grid<std::size_t> clearing_row;
  Grid<std::size_t> ramp_up_row;       // npos without ramp limit
  Grid<std::size_t> ramp_down_row;
  std::vector<std::size_t> block_var;  // npos when the selection is fixed
  Grid<std::size_t> flex_var;
};

ClearingModel build_clearing_model(const Instance& instance, const BidSelection* fixed);

}  // namespace dam::detail
