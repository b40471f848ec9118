#ifndef ETAMP_WORLD_HPP
#define ETAMP_WORLD_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "etamp/diag.hpp"
#include "etamp/geom.hpp"
#include "json.hpp"

namespace etamp {

struct RobotSpec {
  Config pose;
  double radius = 0.3;
  double speed_mps = 0.5;
  double ang_speed_rps = 1.0;
  double pick_time_s = 0.0;
  double place_time_s = 0.0;
  double arm_time_s = 0.0;
};

struct MovableObject {
  std::string id;
  Polygon footprint;  // body frame, centered on the object's own origin
  Config pose;
  bool graspable = true;
  double width = 0.0;  // max caliper width

  Polygon world_footprint() const { return transform(footprint, pose); }
};

struct Anchor {
  enum class Kind { Pose, Region, Near };
  Kind kind = Kind::Pose;
  Config pose;          // Pose target, or Region center
  double radius = 0.0;  // Region / Near tolerance
  std::string near_id;  // Near: tracked movable id
};

struct WorldState {
  RobotSpec robot;
  std::vector<Polygon> statics;  // convex; non-convex input is triangulated at load
  std::vector<MovableObject> movables;
  std::vector<Polygon> surfaces;
  std::map<std::string, Anchor> anchors;
  std::optional<std::string> held;
  Aabb bounds{{0.0, 0.0}, {0.0, 0.0}};

  const MovableObject* find_movable(const std::string& id) const;
  MovableObject* find_movable(const std::string& id);
};

enum class HitKind : uint8_t { None = 0, Static = 1, Movable = 2 };

struct CollisionResult {
  HitKind kind = HitKind::None;
  std::string id;  // static index rendered as text, or movable id
  bool clear() const { return kind == HitKind::None; }
};

struct SegmentHit {
  HitKind kind = HitKind::None;
  std::string id;
  double s = 0.0;  // parameter of first hit along [c1, c2]
  bool clear() const { return kind == HitKind::None; }
};

struct CheckCounters {
  uint64_t point_checks = 0;
  uint64_t segment_checks = 0;
};

// Robot body = disc, plus the held object's footprint riding centered on the
// robot. First hit reported statics-then-movables, each in stored order.
// inflate > 0 grows the body conservatively (sweep sampling margin).
CollisionResult collision_free(const Config& c, const WorldState& w,
                               CheckCounters* counters = nullptr, double inflate = 0.0);
SegmentHit segment_status(const Config& c1, const Config& c2, const WorldState& w,
                          double step = 0.01, CheckCounters* counters = nullptr);

// Antipodal two-finger grasps: near-parallel footprint edge pairs (< 10 deg)
// separated by at most gripper_width. Each pair yields two configs at the
// grasp center, heading along +/- the closing axis. Throws on !o.graspable.
std::vector<Config> find_grasps(const MovableObject& o, double gripper_width);

std::optional<Config> sample_placement(const MovableObject& o, const WorldState& w,
                                       std::mt19937_64& rng, double radius,
                                       int max_tries = 200);
std::optional<Config> sample_free_pose(const WorldState& w, std::mt19937_64& rng,
                                       int max_tries = 200);

enum class PathStatus : uint8_t { Lazy, Valid, Invalid };

struct TimedConfig {
  Config q;
  double t = 0.0;
};

struct MotionPath {
  uint32_t action = 0;  // ground action id
  std::vector<TimedConfig> waypoints;
  PathStatus status = PathStatus::Lazy;
  HitKind invalid_kind = HitKind::None;
  std::string invalid_id;
  int invalid_segment = -1;
  double effort_s = 0.0;                  // == last waypoint time - first
  std::optional<Config> place_pose;       // placement bound to this path, if any

  std::vector<Config> configs() const;
  Config config_at(double t) const;  // clamped interpolation
};

double path_length(const std::vector<Config>& pts);
double motion_duration(const std::vector<Config>& pts, const RobotSpec& robot);
double action_surcharge(std::string_view schema_name, const RobotSpec& robot);
// Stamps times from the speed model; a surcharge > 0 appends a dwell waypoint.
MotionPath time_parameterize(const std::vector<Config>& pts, const RobotSpec& robot,
                             double surcharge = 0.0);
double effort(const MotionPath& path, std::string_view schema_name, const RobotSpec& robot);

// Portable uniform doubles: identical across platforms for a fixed seed.
double uniform01(std::mt19937_64& rng);
double uniform_range(std::mt19937_64& rng, double lo, double hi);

uint64_t world_fingerprint(const WorldState& w);

Config config_from_json(const nlohmann::json& j, const std::string& filename);
Polygon polygon_from_json(const nlohmann::json& j, const std::string& filename);
MovableObject movable_from_json(const nlohmann::json& j, const std::string& filename);
WorldState world_from_json(const nlohmann::json& j, const std::string& filename);
WorldState load_world(const std::string& json_text, const std::string& filename = "<world>");
WorldState load_world_file(const std::string& path);

}  // namespace etamp

#endif
