#include "etamp/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "etamp/pddl.hpp"

namespace etamp {

using nlohmann::json;

const MovableObject* WorldState::find_movable(const std::string& id) const {
  for (const auto& m : movables)
    if (m.id == id) return &m;
  return nullptr;
}

MovableObject* WorldState::find_movable(const std::string& id) {
  for (auto& m : movables)
    if (m.id == id) return &m;
  return nullptr;
}

CollisionResult collision_free(const Config& c, const WorldState& w, CheckCounters* counters,
                               double inflate) {
  if (counters) ++counters->point_checks;
  Vec2 p{c.x, c.y};
  const double r = w.robot.radius + inflate;

  Polygon carried;
  if (w.held) {
    const MovableObject* held = w.find_movable(*w.held);
    if (held) carried = inflate_polygon(transform(held->footprint, c), inflate);
  }

  for (size_t i = 0; i < w.statics.size(); ++i) {
    if (disc_intersects_polygon(p, r, w.statics[i]))
      return {HitKind::Static, std::to_string(i)};
    if (!carried.empty() && polygons_intersect(carried, w.statics[i]))
      return {HitKind::Static, std::to_string(i)};
  }
  for (const auto& m : w.movables) {
    if (w.held && m.id == *w.held) continue;
    Polygon fp = m.world_footprint();
    if (disc_intersects_polygon(p, r, fp)) return {HitKind::Movable, m.id};
    if (!carried.empty() && polygons_intersect(carried, fp)) return {HitKind::Movable, m.id};
  }
  return {};
}

SegmentHit segment_status(const Config& c1, const Config& c2, const WorldState& w, double step,
                          CheckCounters* counters) {
  if (counters) ++counters->segment_checks;
  double dist = (Vec2{c2.x, c2.y} - Vec2{c1.x, c1.y}).norm();
  double dtheta = std::fabs(angle_diff(c1.theta, c2.theta));
  double rot_extent = w.robot.radius;
  if (w.held) {
    const MovableObject* held = w.find_movable(*w.held);
    if (held) rot_extent = std::max(rot_extent, polygon_max_width(held->footprint));
  }
  double eff_len = std::max(dist, dtheta * rot_extent);

  if (eff_len <= 0.0) {
    CollisionResult hit = collision_free(c1, w, counters);
    if (!hit.clear()) return {hit.kind, hit.id, 0.0};
    return {};
  }
  int n = std::max(1, static_cast<int>(std::ceil(eff_len / step)));
  // conservative sweep: each sample is checked with half the inter-sample
  // body-motion bound as margin, so a clear sweep certifies the continuum
  double slack = 0.5 * (dist + dtheta * rot_extent) / n;
  for (int k = 0; k <= n; ++k) {
    double s = static_cast<double>(k) / n;
    CollisionResult hit = collision_free(interpolate(c1, c2, s), w, counters, slack);
    if (!hit.clear()) return {hit.kind, hit.id, s};
  }
  return {};
}

std::vector<Config> find_grasps(const MovableObject& o, double gripper_width) {
  if (!o.graspable) throw std::invalid_argument("find_grasps: object '" + o.id + "' not graspable");
  const Polygon fp = o.world_footprint();
  const size_t n = fp.size();
  const double cos_tol = std::cos(10.0 * M_PI / 180.0);

  std::vector<Config> grasps;
  for (size_t i = 0; i < n; ++i) {
    Vec2 ai = fp[i], bi = fp[(i + 1) % n];
    Vec2 di = (bi - ai).normalized();
    if (di.norm2() == 0.0) continue;
    for (size_t j = i + 1; j < n; ++j) {
      Vec2 aj = fp[j], bj = fp[(j + 1) % n];
      Vec2 dj = (bj - aj).normalized();
      if (dj.norm2() == 0.0) continue;
      if (di.dot(dj * -1.0) < cos_tol) continue;  // not antipodal within 10 deg

      Vec2 nrm = di.perp();
      Vec2 mid_i = (ai + bi) * 0.5, mid_j = (aj + bj) * 0.5;
      double sep = (mid_j - mid_i).dot(nrm);
      if (sep < 0.0) {
        nrm = nrm * -1.0;
        sep = -sep;
      }
      if (sep <= 0.0 || sep > gripper_width) continue;

      // fingers must overlap along the shared edge direction
      double lo_i = std::min(ai.dot(di), bi.dot(di)), hi_i = std::max(ai.dot(di), bi.dot(di));
      double lo_j = std::min(aj.dot(di), bj.dot(di)), hi_j = std::max(aj.dot(di), bj.dot(di));
      double lo = std::max(lo_i, lo_j), hi = std::min(hi_i, hi_j);
      if (hi <= lo) continue;

      double t = 0.5 * (lo + hi);
      Vec2 on_i = ai + di * (t - ai.dot(di));
      // closest point on edge j's line to on_i
      Vec2 on_j = aj + dj * (on_i - aj).dot(dj);
      Vec2 center = (on_i + on_j) * 0.5;
      grasps.push_back(Config(center.x, center.y, std::atan2(nrm.y, nrm.x)));
      grasps.push_back(Config(center.x, center.y, std::atan2(-nrm.y, -nrm.x)));
    }
  }
  return grasps;
}

namespace {

bool footprint_inside(const Polygon& fp, const Polygon& surface) {
  for (const Vec2& v : fp)
    if (!point_in_polygon(v, surface)) return false;
  return true;
}

bool placement_ok(const Polygon& fp, const std::string& oid, const WorldState& w) {
  Aabb box = polygon_aabb(fp);
  if (!w.bounds.contains(box.lo) || !w.bounds.contains(box.hi)) return false;
  bool on_surface = false;
  for (const auto& s : w.surfaces)
    if (footprint_inside(fp, s)) {
      on_surface = true;
      break;
    }
  if (!on_surface) return false;
  for (const auto& st : w.statics)
    if (polygons_intersect(fp, st)) return false;
  for (const auto& m : w.movables) {
    if (m.id == oid) continue;
    if (w.held && m.id == *w.held) continue;
    if (polygons_intersect(fp, m.world_footprint())) return false;
  }
  return true;
}

}  // namespace

std::optional<Config> sample_placement(const MovableObject& o, const WorldState& w,
                                       std::mt19937_64& rng, double radius, int max_tries) {
  for (int i = 0; i < max_tries; ++i) {
    double rr = radius * std::sqrt(uniform01(rng));
    double phi = uniform_range(rng, -M_PI, M_PI);
    double theta = uniform_range(rng, -M_PI, M_PI);
    Config pose(o.pose.x + rr * std::cos(phi), o.pose.y + rr * std::sin(phi), theta);
    Polygon fp = transform(o.footprint, pose);
    if (placement_ok(fp, o.id, w)) return pose;
  }
  return std::nullopt;
}

std::optional<Config> sample_free_pose(const WorldState& w, std::mt19937_64& rng, int max_tries) {
  for (int i = 0; i < max_tries; ++i) {
    Config c(uniform_range(rng, w.bounds.lo.x, w.bounds.hi.x),
             uniform_range(rng, w.bounds.lo.y, w.bounds.hi.y), uniform_range(rng, -M_PI, M_PI));
    if (collision_free(c, w).clear()) return c;
  }
  return std::nullopt;
}

std::vector<Config> MotionPath::configs() const {
  std::vector<Config> out;
  out.reserve(waypoints.size());
  for (const auto& wp : waypoints) out.push_back(wp.q);
  return out;
}

Config MotionPath::config_at(double t) const {
  if (waypoints.empty()) return Config();
  if (t <= waypoints.front().t) return waypoints.front().q;
  for (size_t i = 1; i < waypoints.size(); ++i) {
    if (t <= waypoints[i].t) {
      double span = waypoints[i].t - waypoints[i - 1].t;
      double s = span > 0.0 ? (t - waypoints[i - 1].t) / span : 1.0;
      return interpolate(waypoints[i - 1].q, waypoints[i].q, s);
    }
  }
  return waypoints.back().q;
}

double path_length(const std::vector<Config>& pts) {
  double len = 0.0;
  for (size_t i = 1; i < pts.size(); ++i)
    len += (Vec2{pts[i].x, pts[i].y} - Vec2{pts[i - 1].x, pts[i - 1].y}).norm();
  return len;
}

double motion_duration(const std::vector<Config>& pts, const RobotSpec& robot) {
  double t = 0.0;
  for (size_t i = 1; i < pts.size(); ++i) {
    double d = (Vec2{pts[i].x, pts[i].y} - Vec2{pts[i - 1].x, pts[i - 1].y}).norm();
    double a = std::fabs(angle_diff(pts[i - 1].theta, pts[i].theta));
    t += d / robot.speed_mps + a / robot.ang_speed_rps;
  }
  return t;
}

double action_surcharge(std::string_view schema_name, const RobotSpec& robot) {
  if (schema_name == "pick") return robot.pick_time_s;
  if (schema_name == "place") return robot.place_time_s;
  if (schema_name == "move_arm") return robot.arm_time_s;
  return 0.0;
}

MotionPath time_parameterize(const std::vector<Config>& pts, const RobotSpec& robot,
                             double surcharge) {
  MotionPath path;
  double t = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) {
      double d = (Vec2{pts[i].x, pts[i].y} - Vec2{pts[i - 1].x, pts[i - 1].y}).norm();
      double a = std::fabs(angle_diff(pts[i - 1].theta, pts[i].theta));
      double dt = d / robot.speed_mps + a / robot.ang_speed_rps;
      if (dt <= 0.0) continue;  // duplicate waypoint
      t += dt;
    }
    path.waypoints.push_back({pts[i], t});
  }
  if (surcharge > 0.0 && !path.waypoints.empty()) {
    t += surcharge;
    path.waypoints.push_back({path.waypoints.back().q, t});
  }
  path.effort_s = path.waypoints.empty() ? 0.0 : path.waypoints.back().t;
  return path;
}

double effort(const MotionPath& path, std::string_view schema_name, const RobotSpec& robot) {
  return motion_duration(path.configs(), robot) + action_surcharge(schema_name, robot);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

uint64_t world_fingerprint(const WorldState& w) {
  uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ull;
  };
  auto mixd = [&](double d) {
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(d));
    std::memcpy(&bits, &d, sizeof(bits));
    mix(bits);
  };
  mixd(w.robot.pose.x);
  mixd(w.robot.pose.y);
  mixd(w.robot.pose.theta);
  for (const auto& m : w.movables) {
    for (char c : m.id) mix(static_cast<unsigned char>(c));
    mixd(m.pose.x);
    mixd(m.pose.y);
    mixd(m.pose.theta);
  }
  if (w.held) {
    mix(1);
    for (char c : *w.held) mix(static_cast<unsigned char>(c));
  }
  return h;
}

namespace {

[[noreturn]] void world_fail(const std::string& file, const std::string& msg) {
  throw ParseError(DiagKind::SyntaxError, file, 0, 0, msg);
}

double num_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<double>();
}

}  // namespace

Config config_from_json(const json& j, const std::string& filename) {
  if (!j.is_array() || (j.size() != 2 && j.size() != 3))
    world_fail(filename, "pose must be [x, y] or [x, y, theta]");
  double theta = j.size() == 3 ? j[2].get<double>() : 0.0;
  return Config(j[0].get<double>(), j[1].get<double>(), theta);
}

Polygon polygon_from_json(const json& j, const std::string& filename) {
  if (!j.is_array() || j.size() < 3) world_fail(filename, "polygon needs >= 3 vertices");
  Polygon poly;
  for (const auto& v : j) {
    if (!v.is_array() || v.size() != 2) world_fail(filename, "polygon vertex must be [x, y]");
    poly.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  return ccw(poly);
}

MovableObject movable_from_json(const json& j, const std::string& filename) {
  MovableObject m;
  if (!j.contains("id")) world_fail(filename, "movable without id");
  m.id = j.at("id").get<std::string>();
  if (!j.contains("footprint")) world_fail(filename, "movable '" + m.id + "' without footprint");
  m.footprint = polygon_from_json(j.at("footprint"), filename);
  if (j.contains("pose")) m.pose = config_from_json(j.at("pose"), filename);
  m.graspable = j.value("graspable", true);
  m.width = num_or(j, "width", polygon_max_width(m.footprint));
  return m;
}

WorldState world_from_json(const json& j, const std::string& filename) {
  WorldState w;
  if (!j.contains("robot")) world_fail(filename, "world without robot block");
  const json& r = j.at("robot");
  if (r.contains("pose")) w.robot.pose = config_from_json(r.at("pose"), filename);
  w.robot.radius = num_or(r, "radius", 0.3);
  w.robot.speed_mps = num_or(r, "speed_mps", 0.5);
  w.robot.ang_speed_rps = num_or(r, "ang_speed_rps", 1.0);
  w.robot.pick_time_s = num_or(r, "pick_time_s", 0.0);
  w.robot.place_time_s = num_or(r, "place_time_s", 0.0);
  w.robot.arm_time_s = num_or(r, "arm_time_s", 0.0);
  if (w.robot.radius <= 0.0 || w.robot.speed_mps <= 0.0 || w.robot.ang_speed_rps <= 0.0)
    world_fail(filename, "robot radius and speeds must be positive");

  if (!j.contains("bounds")) world_fail(filename, "world without bounds");
  const json& b = j.at("bounds");
  if (!b.is_array() || b.size() != 2) world_fail(filename, "bounds must be [[xmin,ymin],[xmax,ymax]]");
  w.bounds.lo = {b[0][0].get<double>(), b[0][1].get<double>()};
  w.bounds.hi = {b[1][0].get<double>(), b[1][1].get<double>()};
  if (!(w.bounds.lo.x < w.bounds.hi.x && w.bounds.lo.y < w.bounds.hi.y))
    world_fail(filename, "bounds are empty");

  for (const auto& s : j.value("statics", json::array())) {
    Polygon poly = polygon_from_json(s, filename);
    if (polygon_is_convex(poly)) {
      w.statics.push_back(std::move(poly));
    } else {
      for (auto& tri : triangulate(poly)) w.statics.push_back(std::move(tri));
    }
  }
  std::set<std::string> ids;
  for (const auto& m : j.value("movables", json::array())) {
    MovableObject obj = movable_from_json(m, filename);
    if (!ids.insert(obj.id).second) world_fail(filename, "duplicate movable id '" + obj.id + "'");
    w.movables.push_back(std::move(obj));
  }
  std::sort(w.movables.begin(), w.movables.end(),
            [](const MovableObject& a, const MovableObject& b) { return a.id < b.id; });
  for (const auto& s : j.value("surfaces", json::array()))
    w.surfaces.push_back(polygon_from_json(s, filename));

  if (j.contains("anchors")) {
    for (const auto& [sym, spec] : j.at("anchors").items()) {
      Anchor a;
      if (spec.is_array()) {
        a.kind = Anchor::Kind::Pose;
        a.pose = config_from_json(spec, filename);
      } else if (spec.is_object() && spec.contains("near")) {
        a.kind = Anchor::Kind::Near;
        a.near_id = spec.at("near").get<std::string>();
        a.radius = num_or(spec, "radius", 1.0);
        if (!w.find_movable(a.near_id))
          world_fail(filename, "anchor '" + sym + "' references unknown movable '" + a.near_id + "'");
      } else if (spec.is_object() && spec.contains("center")) {
        a.kind = Anchor::Kind::Region;
        a.pose = config_from_json(spec.at("center"), filename);
        a.radius = num_or(spec, "radius", 0.25);
      } else {
        world_fail(filename, "anchor '" + sym + "' must be a pose, region, or near-reference");
      }
      w.anchors.emplace(sym, std::move(a));
    }
  }
  if (j.contains("held")) {
    w.held = j.at("held").get<std::string>();
    if (!w.find_movable(*w.held))
      world_fail(filename, "held references unknown movable '" + *w.held + "'");
  }
  return w;
}

WorldState load_world(const std::string& json_text, const std::string& filename) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(DiagKind::SyntaxError, filename, 0, 0, e.what());
  }
  return world_from_json(j, filename);
}

WorldState load_world_file(const std::string& path) {
  return load_world(read_text_file(path), path);
}

}  // namespace etamp
