#ifndef ETAMP_TESTS_STRATEGY_HPP
#define ETAMP_TESTS_STRATEGY_HPP

#include "etamp/world.hpp"

namespace etamp::oracle {

// Exhaustive two-strategy cost bound for the corridor layout: go around the
// box, or pick it up and carry it. Route lengths come from a 16-connected
// Dijkstra grid; manipulation adds the arm and pick surcharges.
struct StrategyReport {
  double detour_s = 0.0;
  double relocate_s = 0.0;
  double best_s = 0.0;
  bool relocate_best = false;
};

StrategyReport corridor_strategies(const WorldState& w, double res = 0.025);

}  // namespace etamp::oracle

#endif
