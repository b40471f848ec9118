#include <cmath>
#include <variant>

#include "doctest.h"
#include "etamp/kpiece.hpp"
#include "oracles/raster.hpp"

using namespace etamp;

namespace {

// 10x10 arena split by a wall with a 1.5 m doorway at the top
WorldState doorway_world() {
  const char* j = R"({
    "bounds": [[0, 0], [10, 10]],
    "robot": {"pose": [2, 5, 0], "radius": 0.3, "speed_mps": 0.5, "ang_speed_rps": 2.0},
    "statics": [[[4.8, 0], [5.2, 0], [5.2, 8.5], [4.8, 8.5]]]
  })";
  return load_world(j);
}

WorldState sealed_world() {
  const char* j = R"({
    "bounds": [[0, 0], [10, 10]],
    "robot": {"pose": [2, 5, 0], "radius": 0.3, "speed_mps": 0.5, "ang_speed_rps": 2.0},
    "statics": [[[4.8, 0], [5.2, 0], [5.2, 10], [4.8, 10]]]
  })";
  return load_world(j);
}

PlannerConfig base_cfg(uint64_t seed) {
  PlannerConfig cfg;
  cfg.seed = seed;
  cfg.max_iters = 20000;
  return cfg;
}

GoalSpec far_goal() {
  GoalSpec g;
  g.target = Config(8, 5, 0);
  g.tol_xy = 0.1;
  g.any_theta = true;
  return g;
}

bool waypoints_equal(const MotionPath& a, const MotionPath& b) {
  if (a.waypoints.size() != b.waypoints.size()) return false;
  for (size_t i = 0; i < a.waypoints.size(); ++i) {
    if (a.waypoints[i].q.x != b.waypoints[i].q.x) return false;
    if (a.waypoints[i].q.y != b.waypoints[i].q.y) return false;
    if (a.waypoints[i].q.theta != b.waypoints[i].q.theta) return false;
    if (a.waypoints[i].t != b.waypoints[i].t) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("plans through a doorway and the swept path is collision free") {
  WorldState w = doorway_world();
  MotionResult r = plan_motion(w.robot.pose, far_goal(), w, base_cfg(1));
  REQUIRE(std::holds_alternative<MotionPath>(r));
  MotionPath path = std::get<MotionPath>(r);
  REQUIRE(path.waypoints.size() >= 2);
  CHECK(path.status == PathStatus::Lazy);
  CHECK(path.effort_s > 0.0);
  CHECK(far_goal().reached(path.waypoints.back().q));
  CHECK(path.waypoints.front().t == doctest::Approx(0.0));

  ValidateResult v = validate(path, w, 0.01);
  CHECK(v.valid);
  CHECK(path.status == PathStatus::Valid);
  // independent sweep at 5 mm: every sampled pose keeps positive margin
  for (size_t i = 1; i < path.waypoints.size(); ++i) {
    double m = oracle::raster_segment_clearance(path.waypoints[i - 1].q, path.waypoints[i].q, w);
    CHECK(m > 0.0);
  }
  // the route must thread the doorway above the wall
  bool crossed_high = false;
  for (size_t i = 1; i < path.waypoints.size(); ++i)
    for (int k = 0; k <= 100; ++k) {
      Config q = interpolate(path.waypoints[i - 1].q, path.waypoints[i].q, k / 100.0);
      if (q.x > 4.8 && q.x < 5.2 && q.y > 8.5) crossed_high = true;
    }
  CHECK(crossed_high);
}

TEST_CASE("identical seeds produce identical paths, different seeds may differ") {
  WorldState w = doorway_world();
  MotionResult a = plan_motion(w.robot.pose, far_goal(), w, base_cfg(7));
  MotionResult b = plan_motion(w.robot.pose, far_goal(), w, base_cfg(7));
  REQUIRE(std::holds_alternative<MotionPath>(a));
  REQUIRE(std::holds_alternative<MotionPath>(b));
  CHECK(waypoints_equal(std::get<MotionPath>(a), std::get<MotionPath>(b)));
}

TEST_CASE("invalid start is reported, not planned around") {
  WorldState w = doorway_world();
  MotionResult r = plan_motion(Config(5, 4, 0), far_goal(), w, base_cfg(1));
  CHECK(std::holds_alternative<StartInvalid>(r));
}

TEST_CASE("sealed worlds exhaust iterations into NoPath") {
  WorldState w = sealed_world();
  PlannerConfig cfg = base_cfg(3);
  cfg.max_iters = 800;
  MotionResult r = plan_motion(w.robot.pose, far_goal(), w, cfg);
  CHECK(std::holds_alternative<NoPath>(r));
}

TEST_CASE("goal tolerance gates acceptance") {
  WorldState w = doorway_world();
  GoalSpec g;
  g.target = Config(8, 5, M_PI / 2);
  g.tol_xy = 0.05;
  g.tol_theta = 0.05;
  MotionResult r = plan_motion(w.robot.pose, g, w, base_cfg(5));
  REQUIRE(std::holds_alternative<MotionPath>(r));
  const Config& last = std::get<MotionPath>(r).waypoints.back().q;
  CHECK((last.pos() - g.target.pos()).norm() <= 0.05 + 1e-12);
  CHECK(std::fabs(angle_diff(last.theta, g.target.theta)) <= 0.05 + 1e-12);
}

TEST_CASE("lazy growth spends far fewer sweeps than eager growth") {
  WorldState w = doorway_world();
  CheckCounters lazy, eager;
  PlannerConfig cfg = base_cfg(11);
  cfg.shortcut = false;
  MotionResult r1 = plan_motion(w.robot.pose, far_goal(), w, cfg, &lazy);
  cfg.eager = true;
  MotionResult r2 = plan_motion(w.robot.pose, far_goal(), w, cfg, &eager);
  REQUIRE(std::holds_alternative<MotionPath>(r1));
  REQUIRE(std::holds_alternative<MotionPath>(r2));
  CHECK(lazy.segment_checks < eager.segment_checks);
}

TEST_CASE("validate reports the blocking segment and hit id") {
  WorldState w = doorway_world();
  std::vector<Config> pts = {Config(2, 5, 0), Config(3.5, 5, 0), Config(8, 5, 0)};
  MotionPath path = time_parameterize(pts, w.robot);
  ValidateResult v = validate(path, w, 0.01);
  CHECK_FALSE(v.valid);
  CHECK(path.status == PathStatus::Invalid);
  CHECK(v.kind == HitKind::Static);
  CHECK(v.segment == 1);
  CHECK(path.invalid_segment == 1);
  CHECK(v.id == path.invalid_id);
  CHECK(v.s > 0.0);
  CHECK(v.s < 1.0);
}

TEST_CASE("validate flags movable hits with the object id") {
  WorldState w = doorway_world();
  MovableObject box;
  box.id = "box";
  box.footprint = {{-0.4, -0.4}, {0.4, -0.4}, {0.4, 0.4}, {-0.4, 0.4}};
  box.pose = Config(7, 5, 0);
  w.movables.push_back(box);
  std::vector<Config> pts = {Config(6, 5, 0), Config(8, 5, 0)};
  MotionPath path = time_parameterize(pts, w.robot);
  ValidateResult v = validate(path, w, 0.01);
  CHECK_FALSE(v.valid);
  CHECK(v.kind == HitKind::Movable);
  CHECK(v.id == "box");
}

TEST_CASE("shortcutting never lengthens the path") {
  WorldState w = doorway_world();
  PlannerConfig plain = base_cfg(13);
  plain.shortcut = false;
  PlannerConfig shorted = base_cfg(13);
  MotionResult r1 = plan_motion(w.robot.pose, far_goal(), w, plain);
  MotionResult r2 = plan_motion(w.robot.pose, far_goal(), w, shorted);
  REQUIRE(std::holds_alternative<MotionPath>(r1));
  REQUIRE(std::holds_alternative<MotionPath>(r2));
  double raw = path_length(std::get<MotionPath>(r1).configs());
  double cut = path_length(std::get<MotionPath>(r2).configs());
  CHECK(cut <= raw + 1e-9);
  // the straightened path still clears the world
  MotionPath p = std::get<MotionPath>(r2);
  CHECK(validate(p, w, 0.01).valid);
}

TEST_CASE("debug exposes tree growth and cell bookkeeping") {
  WorldState w = doorway_world();
  PlanDebug dbg;
  MotionResult r = plan_motion(w.robot.pose, far_goal(), w, base_cfg(17), nullptr, &dbg);
  REQUIRE(std::holds_alternative<MotionPath>(r));
  CHECK(dbg.iterations > 0);
  CHECK(dbg.tree.size() > 2);
  CHECK(!dbg.cells.empty());
  int interior = 0;
  size_t motions = 0;
  for (const auto& c : dbg.cells) {
    interior += c.interior ? 1 : 0;
    motions += static_cast<size_t>(c.motions);
    CHECK(c.selections >= 0);
  }
  CHECK(motions >= dbg.tree.size() - 1);
  // a spread tree has both interior and frontier cells
  CHECK(interior > 0);
  CHECK(interior < static_cast<int>(dbg.cells.size()));
}

TEST_CASE("carried footprints constrain the doorway") {
  WorldState w = doorway_world();
  MovableObject slab;
  slab.id = "slab";
  // 3x3 slab: at any in-bounds pose above the wall it still reaches below 8.5
  slab.footprint = {{-1.5, -1.5}, {1.5, -1.5}, {1.5, 1.5}, {-1.5, 1.5}};
  slab.pose = w.robot.pose;
  slab.width = polygon_max_width(slab.footprint);
  w.movables.push_back(slab);
  w.held = "slab";
  PlannerConfig cfg = base_cfg(19);
  cfg.max_iters = 2500;
  MotionResult r = plan_motion(w.robot.pose, far_goal(), w, cfg);
  CHECK(std::holds_alternative<NoPath>(r));
}
