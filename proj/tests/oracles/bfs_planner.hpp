#ifndef ETAMP_TESTS_BFS_PLANNER_HPP
#define ETAMP_TESTS_BFS_PLANNER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "etamp/ground.hpp"

namespace etamp::oracle {

// Exhaustive breadth-first search over bitmask states. Requires <= 64 atoms.
// Returns a shortest action sequence, or nullopt when the goal is unreachable.
std::optional<std::vector<uint32_t>> bfs_plan(const GroundTask& task);

}  // namespace etamp::oracle

#endif
