#ifndef ETAMP_EXECUTOR_HPP
#define ETAMP_EXECUTOR_HPP

#include <deque>

#include "etamp/engine.hpp"

namespace etamp {

struct ObstacleAppears {
  MovableObject object;
};
struct ActionFails {};  // bound to the triggering action index
struct ObjectMoved {
  std::string id;
  Config pose;
};

struct Event {
  // exactly one trigger: a simulation time, or completion of the k-th action
  std::optional<double> t;
  std::optional<int> after_action;
  std::variant<ObstacleAppears, ActionFails, ObjectMoved> what;
};

using EventTimeline = std::vector<Event>;

// [{"t":…,"kind":"obstacle_appears","object":{…}} |
//  {"after_action":…,"kind":"action_failure"} |
//  {"t":…,"kind":"object_moved","id":…,"pose":[…]}]; times must be nondecreasing
EventTimeline timeline_from_json(const nlohmann::json& j, const std::string& filename);
EventTimeline load_timeline(const std::string& path);

struct ExecSegment {
  Config a;
  Config b;
  size_t epoch;  // world snapshot in force while the segment ran
};

enum class ExecOutcome { Success, Failure };

struct ExecutionTrace {
  enum class FailReason { None, AttemptsExhausted, Unsolvable, RevalidationFailed };

  ExecOutcome outcome = ExecOutcome::Failure;
  FailReason reason = FailReason::None;
  double total_effort_s = 0.0;
  int replans = 0;
  std::vector<nlohmann::json> entries;
  std::vector<ExecSegment> segments;  // executed motion
  std::vector<WorldState> worlds;     // epoch snapshots; worlds[0] = start
  CheckCounters counters;             // revalidation checks

  void dump_jsonl(std::ostream& os) const;
  size_t count(const char* type) const;
};

struct ExecutorConfig {
  double check_step_m = 0.01;
  double connect_tol = 1e-6;  // pose mismatch below this needs no connector
};

// Walks the reachability graph: replays the incumbent while it applies, takes
// pre-encoded branches matched by the runtime state, and replans only when no
// branch fits or the world invalidates the motion underway.
class Executor {
 public:
  explicit Executor(TampEngine& engine, ExecutorConfig cfg = {});

  ExecutionTrace run(const Incumbent& incumbent, const EventTimeline& timeline = {},
                     const std::optional<State>& runtime_state = std::nullopt,
                     const std::optional<WorldOverride>& runtime_world = std::nullopt);

 private:
  struct Step {
    uint32_t parent = 0;
    uint32_t child = 0;
    uint32_t action = 0;
    MotionPath path;
  };

  struct Cursor {
    State sym;
    WorldState world;
    double sim_t = 0.0;
    int actions_done = 0;
  };

  enum class MotionOutcome { Completed, Interrupted };

  void emit(ExecutionTrace& tr, const char* type, nlohmann::json fields);
  MotionOutcome execute_motion(Cursor& cur, const MotionPath& path, ExecutionTrace& tr);
  void apply_event(Cursor& cur, const Event& ev, ExecutionTrace& tr);
  bool remainder_valid(const MotionPath& path, double local_t, const WorldState& w,
                       ExecutionTrace& tr);
  bool replan(Cursor& cur, std::deque<Step>& route, ExecutionTrace& tr,
              ExecutionTrace::FailReason& why);
  static std::deque<Step> route_from(const Incumbent& inc);
  void finish(Cursor& cur, ExecutionTrace& tr);

  TampEngine& m_engine;
  ExecutorConfig m_cfg;
  EventTimeline m_timeline;
  std::vector<size_t> m_time_order;     // indices of time-triggered events
  std::vector<size_t> m_action_events;  // indices of after_action events
  size_t m_next_time_event = 0;
  std::vector<uint32_t> m_banned;
  uint64_t m_seq = 0;
};

}  // namespace etamp

#endif
