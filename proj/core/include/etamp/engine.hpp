#ifndef ETAMP_ENGINE_HPP
#define ETAMP_ENGINE_HPP

#include <set>
#include <tuple>

#include "etamp/kpiece.hpp"
#include "etamp/rgraph.hpp"

namespace etamp {

struct EngineConfig {
  int max_attempts = 10;
  int placement_candidates = 3;
  double placement_radius = 1.0;
  double gripper_width = 0.7;
  double approach_clearance = 0.12;  // > goal_tol_xy + sweep margin
  double validate_step_m = 0.01;
  int edge_retries = 3;  // motion re-plans per edge visit before giving up
  PlannerConfig motion;
};

struct Incumbent {
  std::vector<uint32_t> nodes;    // graph node ids, start..goal
  std::vector<uint32_t> actions;  // ground action ids, one per edge
  std::vector<MotionPath> paths;  // validated, one per edge
  double c_star = 0.0;

  bool empty() const { return nodes.empty(); }
};

struct Failure {
  enum class Reason { UnsolvableTask, AttemptsExhausted };
  Reason reason = Reason::UnsolvableTask;
};

using TmpResult = std::variant<Incumbent, Failure>;

// Differences applied to a WorldState by an event or a contingency.
struct WorldOverride {
  std::optional<std::string> held;  // set to "" to clear
  std::vector<std::pair<std::string, Config>> move_objects;
  std::vector<MovableObject> add_objects;

  WorldState applied_to(const WorldState& w) const;
};

struct Contingency {
  std::vector<uint32_t> add;     // atom ids added to the planned init
  std::vector<uint32_t> remove;  // atom ids removed
  WorldOverride world;
};

State override_state(const State& s, const std::vector<uint32_t>& add,
                     const std::vector<uint32_t>& remove);

class EngineTrace {
 public:
  void emit(const char* type, nlohmann::json fields);
  const std::vector<nlohmann::json>& entries() const { return m_entries; }
  void dump_jsonl(std::ostream& os) const;
  size_t count(const char* type) const;

 private:
  std::vector<nlohmann::json> m_entries;
  uint64_t m_seq = 0;
};

uint64_t mix_seed(uint64_t seed, std::initializer_list<uint64_t> parts);

class TampEngine {
 public:
  TampEngine(GroundTask task, WorldState world, EngineConfig cfg);

  TampEngine(const TampEngine&) = delete;
  TampEngine& operator=(const TampEngine&) = delete;

  // full pipeline from the task's init/goal and the construction world
  TmpResult tmp();

  // traverse from an arbitrary symbolic state anchored at a configuration;
  // used for online replanning. banned actions are excluded from task plans.
  TmpResult plan_from(const State& state, const Config& at, const WorldState& world,
                      const std::vector<uint32_t>& banned = {});

  // pre-encode branches for foreseeable runtime variants of the init state
  void enrich(const std::vector<Contingency>& contingencies);

  const RGraph& graph() const { return m_graph; }
  RGraph& graph() { return m_graph; }
  const GroundTask& task() const { return m_task; }
  const WorldState& world() const { return m_world0; }
  const EngineConfig& config() const { return m_cfg; }
  const CheckCounters& counters() const { return m_counters; }
  EngineTrace& trace() { return m_trace; }
  const EngineTrace& trace() const { return m_trace; }

  // geometric consequence of finishing an action whose motion was `path`
  static void apply_action_geometry(WorldState& w, const GroundAction& a, const MotionPath& path);

  // schema kinds the effort model distinguishes
  static bool is_pick(const GroundAction& a) { return a.name == "pick"; }
  static bool is_place(const GroundAction& a) { return a.name == "place"; }
  static bool is_move_base(const GroundAction& a) { return a.name == "move_base"; }

 private:
  struct VisitCtx {
    uint32_t node = 0;
    WorldState world;
    double cost = 0.0;
    std::vector<uint32_t> nodes;
    std::vector<uint32_t> actions;
    std::vector<MotionPath> paths;
  };

  struct EdgeEpisode {
    bool ok = false;
    MotionPath path;
    bool movable_hit = false;  // seed mode: aborted on a movable collision
  };

  struct GoalCand {
    GoalSpec goal;
    std::optional<Config> place_pose;
  };

  PlanResult call_tp(const State& s, const Goal& goal, const FfConfig& fc, const char* purpose);
  void traverse(VisitCtx& v);
  EdgeEpisode plan_edge(const VisitCtx& v, uint32_t child, bool seed_mode);
  std::vector<GoalCand> edge_goals(const VisitCtx& v, const GroundAction& a, uint32_t child,
                                   bool& goal_error);
  void generate_subtasks(const VisitCtx& v, uint32_t child, const MovableObject& obj);
  WorldState growth_world(const WorldState& w) const;
  double edge_estimate(const VisitCtx& v, uint32_t child) const;
  void seed_incumbent(const Plan& p);
  void record_incumbent(const VisitCtx& v);
  const MovableObject* action_object(const GroundAction& a, const WorldState& w) const;
  std::optional<std::string> action_place_symbol(const GroundAction& a,
                                                 const WorldState& w) const;

  GroundTask m_task;
  WorldState m_world0;
  EngineConfig m_cfg;
  FfPlanner m_ff;
  RGraph m_graph;
  EngineTrace m_trace;
  CheckCounters m_counters;

  std::set<std::tuple<std::string, double, double, double>> m_obstacles;  // (id, pose) ledger
  std::set<std::string> m_ledger_ids;
  std::vector<uint32_t> m_banned;
  int m_attempts_left = 0;
  std::optional<Incumbent> m_best;
  double m_cstar = 0.0;
};

}  // namespace etamp

#endif
