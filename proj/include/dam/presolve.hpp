#pragma once

#include <vector>

#include "dam/instance.hpp"

namespace dam {

// Price range per (area, hour) that contains every equilibrium price.
Grid<PriceInterval> presolve_price_bounds(const Instance& instance);

// Net demand band the hourly curve of (area, hour) can be asked to clear.
std::pair<double, double> presolve_quantity_band(const Instance& instance, std::size_t area, std::size_t hour);

struct PresolveFixings {
  std::vector<unsigned char> block_excluded;  // loses at every admissible price
  Grid<unsigned char> flex_excluded;          // (flex, hour)
  std::vector<unsigned char> block_never_loses;
  std::size_t excluded_count() const;
};

PresolveFixings presolve_fixings(const Instance& instance, const Grid<PriceInterval>& bounds, double tol = 1e-7);

}  // namespace dam
