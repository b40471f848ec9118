#ifndef ETAMP_SCENARIO_HPP
#define ETAMP_SCENARIO_HPP

#include "etamp/executor.hpp"
#include "etamp/pddl.hpp"

namespace etamp {

// One self-contained planning/execution problem:
//   { "domain": <path>, "problem": <path>, "world": <path>,
//     "timeline": <path>?, "seed": <u64>?,
//     "planner": {cell_m, step_m, goal_bias, exterior_bias, max_iters, seed}?,
//     "engine": {max_attempts, placement_candidates, placement_radius,
//                gripper_width}?,
//     "contingencies": [{"add": ["(pred a b)"…], "remove": […],
//                        "world": {"held": id?, "move": [{"id","pose"}…],
//                                  "add": [movable…]}}]?,
//     "runtime": {"add": […], "remove": […], "world": {…}}? }
// Relative paths resolve against the scenario file's directory.
struct Scenario {
  std::string name;  // file stem
  DomainDef domain;
  ProblemDef problem;
  GroundTask task;
  WorldState world;
  EventTimeline timeline;
  EngineConfig engine;
  std::vector<Contingency> contingencies;
  // runtime variant of the init condition, applied by the executor
  std::optional<State> runtime_state;
  std::optional<WorldOverride> runtime_world;
};

Scenario load_scenario(const std::string& path);
Scenario scenario_from_json(const nlohmann::json& j, const std::string& filename);

// "(pred a b)" -> ground atom id; throws ParseError on unknown atoms
uint32_t parse_atom(const std::string& text, const GroundTask& task,
                    const std::string& filename);

}  // namespace etamp

#endif
