#pragma once

#include "dam/instance.hpp"

namespace dam::testing {

// One area, one hour, flat zero curve, four block bids a..d.
InstanceData four_bid_book();
// Areas R (supply step at 10) and S (demand step at 40) joined by one line R->S.
InstanceData two_area(double atc);
inline InstanceData fixture_f2() { return two_area(100.0); }
inline InstanceData fixture_f3() { return two_area(20.0); }
// Two hours, opposite trade directions, ramp limit 10 from an initial flow of -5.
InstanceData ramp_fixture();
// A -> {B, C} -> D with flat transit areas.
InstanceData diamond_fixture();
// Single area whose curve is flat at zero between -5 and 7.
InstanceData price_indifferent();
InstanceData empty_book();

}  // namespace dam::testing
