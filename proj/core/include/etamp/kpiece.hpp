#ifndef ETAMP_KPIECE_HPP
#define ETAMP_KPIECE_HPP

#include <variant>

#include "etamp/world.hpp"

namespace etamp {

struct PlannerConfig {
  double cell_m = 0.25;
  double step_m = 0.5;
  double goal_bias = 0.05;
  double exterior_bias = 0.7;
  int max_iters = 5000;
  uint64_t seed = 0;
  double goal_tol_xy = 0.05;
  double goal_tol_theta = 0.1;
  double check_step_m = 0.01;
  bool eager = false;    // sweep tree edges at growth time
  bool shortcut = true;  // greedy straightening of the returned branch
};

struct GoalSpec {
  Config target;
  double tol_xy = 0.05;
  double tol_theta = 0.1;
  bool any_theta = false;

  bool reached(const Config& q) const {
    if ((q.pos() - target.pos()).norm() > tol_xy) return false;
    return any_theta || std::fabs(angle_diff(q.theta, target.theta)) <= tol_theta;
  }
};

struct NoPath {};
struct StartInvalid {};
using MotionResult = std::variant<MotionPath, NoPath, StartInvalid>;

struct CellStats {
  int64_t i = 0;
  int64_t j = 0;
  int motions = 0;
  double coverage = 0.0;
  int selections = 0;
  double score = 1.0;
  bool interior = false;
};

struct PlanDebug {
  std::vector<Config> tree;
  std::vector<CellStats> cells;
  int iterations = 0;
};

// Grows a cell-guided tree with point checks only (lazy); the returned path
// carries status Lazy and must be swept by validate() before trusting it.
MotionResult plan_motion(const Config& start, const GoalSpec& goal, const WorldState& w,
                         const PlannerConfig& cfg, CheckCounters* counters = nullptr,
                         PlanDebug* debug = nullptr);

struct ValidateResult {
  bool valid = false;
  HitKind kind = HitKind::None;
  std::string id;
  int segment = -1;
  double s = 0.0;
};

// Sweeps each segment in order against the full world; marks the path.
ValidateResult validate(MotionPath& path, const WorldState& w, double check_step_m = 0.01,
                        CheckCounters* counters = nullptr);

}  // namespace etamp

#endif
