#ifndef ETAMP_FF_HPP
#define ETAMP_FF_HPP

#include <functional>
#include <limits>
#include <optional>
#include <variant>

#include "etamp/ground.hpp"

namespace etamp {

// Delete-relaxation planning graph; layers index atom/action first appearance.
struct Rpg {
  std::vector<int32_t> fact_layer;    // -1 = unreached at fixpoint
  std::vector<int32_t> action_layer;  // -1 = never delete-free applicable
  int32_t goal_layer = -1;            // first fact layer containing all positive goals
  bool goal_reachable = false;
};

struct RelaxedPlan {
  std::vector<std::vector<uint32_t>> layers;  // chosen actions per action layer
  int h_value = 0;                            // = sum of layer sizes
  std::vector<uint32_t> helpful;              // applicable actions adding a layer-1 subgoal
};

struct Plan {
  std::vector<uint32_t> actions;
  std::vector<State> states;  // states.size() == actions.size() + 1
};

struct DeadEnd {};
struct Unsolvable {};
using EhcResult = std::variant<Plan, DeadEnd>;
using PlanResult = std::variant<Plan, Unsolvable>;

struct SearchStats {
  size_t expansions = 0;
  size_t evaluations = 0;
};

struct FfConfig {
  size_t ehc_cap = 50000;  // BFS expansions per climb before DeadEnd
  size_t best_first_cap = std::numeric_limits<size_t>::max();
  std::vector<uint32_t> banned;  // sorted action ids excluded everywhere
  // fired on every heuristic evaluation (state, relaxed h before goal-floor)
  std::function<void(const State&, const RelaxedPlan&)> on_evaluate;
  SearchStats* stats = nullptr;
};

class FfPlanner {
 public:
  explicit FfPlanner(const GroundTask& task);

  Rpg build_rpg(const State& s, const Goal& goal, const FfConfig& cfg = {}) const;
  // nullopt when the goal is delete-free unreachable
  std::optional<RelaxedPlan> extract_relaxed_plan(const Rpg& rpg, const State& s,
                                                  const Goal& goal,
                                                  const FfConfig& cfg = {}) const;
  // h with the goal-equivalence floor: h == 0 iff goal fully satisfied
  std::optional<RelaxedPlan> evaluate(const State& s, const Goal& goal,
                                      const FfConfig& cfg = {}) const;

  EhcResult ehc(const State& s0, const Goal& goal, const FfConfig& cfg = {}) const;
  PlanResult best_first(const State& s0, const Goal& goal, const FfConfig& cfg = {}) const;
  // ehc with best_first fallback on DeadEnd
  PlanResult plan(const State& s0, const Goal& goal, const FfConfig& cfg = {}) const;

  const GroundTask& task() const { return m_task; }

 private:
  const GroundTask& m_task;
  std::vector<std::vector<uint32_t>> m_precon_index;  // atom -> actions requiring it
  std::vector<uint32_t> m_no_precon;                  // actions with empty precon_pos
};

Rpg build_rpg(const State& s, const GroundTask& task);
std::optional<RelaxedPlan> extract_relaxed_plan(const Rpg& rpg, const State& s,
                                                const GroundTask& task);
EhcResult ehc(const GroundTask& task, const FfConfig& cfg = {});
PlanResult best_first(const GroundTask& task, const FfConfig& cfg = {});
PlanResult tp(const State& s0, const Goal& goal, const GroundTask& task,
              const FfConfig& cfg = {});

// apply-chain replay: s0 -> goal-satisfying state
bool plan_valid(const Plan& p, const State& s0, const Goal& goal, const GroundTask& task);

}  // namespace etamp

#endif
