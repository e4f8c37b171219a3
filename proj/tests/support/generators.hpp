#pragma once

#include <random>

#include "dam/instance.hpp"
#include "dam/qp_engine.hpp"

namespace dam::testing {

struct MarketShape {
  std::size_t max_areas = 2;
  std::size_t max_hours = 3;
  std::size_t max_blocks = 6;
  std::size_t max_flex = 2;
  std::size_t max_segments = 4;
  std::size_t max_binaries = 12;
};

InstanceData random_market(std::mt19937_64& rng, const MarketShape& shape = {});

struct QpShape {
  std::size_t max_variables = 20;
  bool equalities = true;
  bool finite_bounds = false;
  double box = 10.0;
};

// Feasible and bounded concave QP.
qp::QpProblem random_qp(std::mt19937_64& rng, const QpShape& shape = {});

}  // namespace dam::testing
