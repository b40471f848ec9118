#include "etamp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace etamp {

namespace {

nlohmann::json config_json(const Config& c) { return {c.x, c.y, c.theta}; }

// robot-center distance from p along dir so the disc clears the footprint
double approach_standoff(const Polygon& world_fp, const Vec2& p, const Vec2& dir,
                         double robot_radius, double clearance) {
  double extent = 0.0;
  for (const Vec2& v : world_fp) extent = std::max(extent, (v - p).dot(dir));
  return extent + robot_radius + clearance;
}

}  // namespace

WorldState WorldOverride::applied_to(const WorldState& w) const {
  WorldState out = w;
  for (const auto& m : add_objects) {
    if (!out.find_movable(m.id)) out.movables.push_back(m);
  }
  std::sort(out.movables.begin(), out.movables.end(),
            [](const MovableObject& a, const MovableObject& b) { return a.id < b.id; });
  for (const auto& [id, pose] : move_objects) {
    if (MovableObject* m = out.find_movable(id)) m->pose = pose;
  }
  if (held) {
    if (held->empty()) {
      out.held.reset();
    } else {
      out.held = *held;
    }
  }
  return out;
}

State override_state(const State& s, const std::vector<uint32_t>& add,
                     const std::vector<uint32_t>& remove) {
  std::vector<uint32_t> ad = add;
  std::vector<uint32_t> rm = remove;
  std::sort(ad.begin(), ad.end());
  std::sort(rm.begin(), rm.end());
  State out;
  std::set_difference(s.true_atoms.begin(), s.true_atoms.end(), rm.begin(), rm.end(),
                      std::back_inserter(out.true_atoms));
  std::vector<uint32_t> merged;
  std::set_union(out.true_atoms.begin(), out.true_atoms.end(), ad.begin(), ad.end(),
                 std::back_inserter(merged));
  out.true_atoms = std::move(merged);
  return out;
}

void EngineTrace::emit(const char* type, nlohmann::json fields) {
  fields["seq"] = m_seq++;
  fields["type"] = type;
  m_entries.push_back(std::move(fields));
}

void EngineTrace::dump_jsonl(std::ostream& os) const {
  for (const auto& e : m_entries) os << e.dump() << "\n";
}

size_t EngineTrace::count(const char* type) const {
  size_t n = 0;
  for (const auto& e : m_entries) {
    if (e.at("type").get<std::string>() == type) ++n;
  }
  return n;
}

uint64_t mix_seed(uint64_t seed, std::initializer_list<uint64_t> parts) {
  uint64_t h = 14695981039346656037ull ^ seed;
  auto step = [&h](uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  for (uint64_t p : parts) step(p);
  return h;
}

TampEngine::TampEngine(GroundTask task, WorldState world, EngineConfig cfg)
    : m_task(std::move(task)), m_world0(std::move(world)), m_cfg(cfg), m_ff(m_task) {}

void TampEngine::apply_action_geometry(WorldState& w, const GroundAction& a,
                                       const MotionPath& path) {
  if (!path.waypoints.empty()) w.robot.pose = path.waypoints.back().q;
  if (is_pick(a)) {
    for (const auto& arg : a.args) {
      if (MovableObject* m = w.find_movable(arg)) {
        w.held = m->id;
        m->pose = w.robot.pose;  // rides centered until placed
        break;
      }
    }
  } else if (is_place(a)) {
    for (const auto& arg : a.args) {
      if (MovableObject* m = w.find_movable(arg)) {
        if (path.place_pose) m->pose = *path.place_pose;
        if (w.held && *w.held == m->id) w.held.reset();
        break;
      }
    }
  }
}

PlanResult TampEngine::call_tp(const State& s, const Goal& goal, const FfConfig& fc,
                               const char* purpose) {
  PlanResult pr = m_ff.plan(s, goal, fc);
  const Plan* p = std::get_if<Plan>(&pr);
  m_trace.emit("tp", {{"purpose", purpose},
                      {"solved", p != nullptr},
                      {"len", p ? p->actions.size() : 0}});
  return pr;
}

const MovableObject* TampEngine::action_object(const GroundAction& a,
                                               const WorldState& w) const {
  for (const auto& arg : a.args) {
    if (const MovableObject* m = w.find_movable(arg)) return m;
  }
  return nullptr;
}

std::optional<std::string> TampEngine::action_place_symbol(const GroundAction& a,
                                                           const WorldState& w) const {
  std::optional<std::string> sym;
  for (const auto& arg : a.args) {
    if (w.anchors.count(arg)) sym = arg;  // last anchor argument is the target
  }
  return sym;
}

WorldState TampEngine::growth_world(const WorldState& w) const {
  WorldState g = w;
  std::erase_if(g.movables, [&](const MovableObject& m) {
    if (g.held && *g.held == m.id) return false;
    return m_ledger_ids.count(m.id) == 0;
  });
  return g;
}

double TampEngine::edge_estimate(const VisitCtx& v, uint32_t child) const {
  const RGraphEdge& e = m_graph.edge(v.node, child);
  const GroundAction& a = m_task.actions.at(e.action);
  const RobotSpec& r = v.world.robot;
  double dist = 0.0;
  if (is_move_base(a)) {
    if (auto sym = action_place_symbol(a, v.world)) {
      const Anchor& an = v.world.anchors.at(*sym);
      Vec2 center = an.pose.pos();
      if (an.kind == Anchor::Kind::Near) {
        if (const MovableObject* m = v.world.find_movable(an.near_id)) center = m->pose.pos();
      }
      dist = (center - r.pose.pos()).norm();
    }
  } else if (is_pick(a)) {
    if (const MovableObject* m = action_object(a, v.world)) {
      dist = (m->pose.pos() - r.pose.pos()).norm();
    }
  } else if (is_place(a)) {
    dist = m_cfg.placement_radius;
  }
  return dist / r.speed_mps + action_surcharge(a.name, r);
}

std::vector<TampEngine::GoalCand> TampEngine::edge_goals(const VisitCtx& v,
                                                         const GroundAction& a, uint32_t child,
                                                         bool& goal_error) {
  goal_error = false;
  const RobotSpec& robot = v.world.robot;
  std::vector<GoalCand> out;

  if (is_move_base(a)) {
    auto sym = action_place_symbol(a, v.world);
    if (!sym) {
      goal_error = true;
      return out;
    }
    const Anchor& an = v.world.anchors.at(*sym);
    GoalSpec g;
    switch (an.kind) {
      case Anchor::Kind::Pose:
        g.target = an.pose;
        g.tol_xy = m_cfg.motion.goal_tol_xy;
        g.tol_theta = m_cfg.motion.goal_tol_theta;
        break;
      case Anchor::Kind::Region:
        g.target = an.pose;
        g.tol_xy = an.radius;
        g.any_theta = true;
        break;
      case Anchor::Kind::Near: {
        const MovableObject* m = v.world.find_movable(an.near_id);
        if (!m) {
          goal_error = true;
          return out;
        }
        g.target = Config(m->pose.x, m->pose.y, 0.0);
        g.tol_xy = an.radius;
        g.any_theta = true;
        break;
      }
    }
    out.push_back({g, std::nullopt});
    return out;
  }

  if (is_pick(a)) {
    const MovableObject* o = action_object(a, v.world);
    if (!o || !o->graspable) {
      goal_error = true;
      return out;
    }
    Polygon fp = o->world_footprint();
    for (const Config& grasp : find_grasps(*o, m_cfg.gripper_width)) {
      Vec2 u{std::cos(grasp.theta), std::sin(grasp.theta)};
      double d = approach_standoff(fp, grasp.pos(), Vec2{-u.x, -u.y}, robot.radius,
                                   m_cfg.approach_clearance);
      Config approach(grasp.x - u.x * d, grasp.y - u.y * d, grasp.theta);
      if (!collision_free(approach, v.world, &m_counters).clear()) continue;
      GoalSpec g;
      g.target = approach;
      g.tol_xy = m_cfg.motion.goal_tol_xy;
      g.tol_theta = m_cfg.motion.goal_tol_theta;
      out.push_back({g, std::nullopt});
    }
    // nearest approach first
    std::stable_sort(out.begin(), out.end(), [&](const GoalCand& x, const GoalCand& y) {
      return (x.goal.target.pos() - robot.pose.pos()).norm() <
             (y.goal.target.pos() - robot.pose.pos()).norm();
    });
    if (out.empty()) goal_error = true;
    return out;
  }

  if (is_place(a)) {
    const MovableObject* o = action_object(a, v.world);
    if (!o) {
      goal_error = true;
      return out;
    }
    // the carried object sits at the robot; sample its new pose nearby
    MovableObject probe = *o;
    probe.pose = robot.pose;
    std::mt19937_64 rng(mix_seed(m_cfg.motion.seed, {0x9e3779b97f4a7c15ull, v.node, child}));
    for (int i = 0; i < m_cfg.placement_candidates; ++i) {
      auto place = sample_placement(probe, v.world, rng, m_cfg.placement_radius);
      if (!place) continue;
      Vec2 to_robot = robot.pose.pos() - place->pos();
      Vec2 dir = to_robot.norm() > 1e-9
                     ? to_robot.normalized()
                     : Vec2{-std::cos(robot.pose.theta), -std::sin(robot.pose.theta)};
      double d = approach_standoff(transform(o->footprint, *place), place->pos(), dir,
                                   robot.radius, m_cfg.approach_clearance);
      Config approach(place->x + dir.x * d, place->y + dir.y * d,
                      std::atan2(-dir.y, -dir.x));
      GoalSpec g;
      g.target = approach;
      g.tol_xy = m_cfg.motion.goal_tol_xy;
      g.tol_theta = m_cfg.motion.goal_tol_theta;
      out.push_back({g, place});
    }
    if (out.empty()) goal_error = true;
    return out;
  }

  return out;  // zero-motion schemas are handled before goal resolution
}

TampEngine::EdgeEpisode TampEngine::plan_edge(const VisitCtx& v, uint32_t child,
                                              bool seed_mode) {
  const RGraphEdge& e = m_graph.edge(v.node, child);
  const GroundAction& a = m_task.actions.at(e.action);
  const RobotSpec& robot = v.world.robot;
  double surcharge = action_surcharge(a.name, robot);

  if (!is_move_base(a) && !is_pick(a) && !is_place(a)) {
    // dwell in place (arm motions and unknown schemas)
    MotionPath path = time_parameterize({robot.pose}, robot, surcharge);
    path.action = e.action;
    ValidateResult vr = validate(path, v.world, m_cfg.validate_step_m, &m_counters);
    if (!vr.valid) return {};
    m_graph.annotate(v.node, child, path, path.effort_s);
    return {true, std::move(path), false};
  }

  for (int attempt = 0; attempt <= m_cfg.edge_retries; ++attempt) {
    bool goal_error = false;
    std::vector<GoalCand> cands = edge_goals(v, a, child, goal_error);
    if (goal_error || cands.empty()) {
      m_trace.emit("edge_unresolved", {{"action", a.str()}});
      return {};
    }
    bool respliced = false;
    for (size_t ci = 0; ci < cands.size(); ++ci) {
      PlannerConfig mo = m_cfg.motion;
      mo.seed = mix_seed(m_cfg.motion.seed,
                         {v.node, child, static_cast<uint64_t>(attempt), ci});
      WorldState gw = growth_world(v.world);
      MotionResult mr = plan_motion(robot.pose, cands[ci].goal, gw, mo, &m_counters);
      if (std::holds_alternative<StartInvalid>(mr)) {
        m_trace.emit("motion", {{"action", a.str()},
                                {"attempt", attempt},
                                {"candidate", ci},
                                {"result", "start_invalid"}});
        return {};
      }
      if (std::holds_alternative<NoPath>(mr)) {
        m_trace.emit("motion", {{"action", a.str()},
                                {"attempt", attempt},
                                {"candidate", ci},
                                {"result", "no_path"}});
        continue;
      }

      MotionPath raw = std::get<MotionPath>(std::move(mr));
      MotionPath path = time_parameterize(raw.configs(), robot, surcharge);
      path.action = e.action;
      path.place_pose = cands[ci].place_pose;

      ValidateResult vr = validate(path, v.world, m_cfg.validate_step_m, &m_counters);
      m_trace.emit("motion", {{"action", a.str()},
                              {"attempt", attempt},
                              {"candidate", ci},
                              {"result", vr.valid ? "valid" : "collision"},
                              {"effort_s", path.effort_s}});
      if (vr.valid) {
        m_graph.annotate(v.node, child, path, path.effort_s);
        // a freshly placed object is a known obstacle for later growth
        if (is_place(a)) {
          if (const MovableObject* o = action_object(a, v.world)) m_ledger_ids.insert(o->id);
        }
        return {true, std::move(path), false};
      }

      m_trace.emit("collision", {{"action", a.str()},
                                 {"kind", vr.kind == HitKind::Static ? "static" : "movable"},
                                 {"id", vr.id},
                                 {"segment", vr.segment}});
      if (vr.kind == HitKind::Movable) {
        if (seed_mode) return {false, {}, true};
        if (const MovableObject* m = v.world.find_movable(vr.id)) {
          auto key = std::make_tuple(m->id, m->pose.x, m->pose.y, m->pose.theta);
          if (!m_obstacles.count(key)) {
            generate_subtasks(v, child, *m);
            respliced = true;
            break;  // growth world changed; restart candidates
          }
        }
      }
      // static hit or a known obstacle clipped between samples: reseed and retry
    }
    (void)respliced;
  }
  return {};
}

void TampEngine::generate_subtasks(const VisitCtx& v, uint32_t child,
                                   const MovableObject& obj) {
  auto key = std::make_tuple(obj.id, obj.pose.x, obj.pose.y, obj.pose.theta);
  if (m_obstacles.count(key)) return;
  m_obstacles.insert(key);
  m_ledger_ids.insert(obj.id);
  m_trace.emit("obstacle", {{"id", obj.id},
                            {"pose", config_json(obj.pose)},
                            {"graspable", obj.graspable}});
  if (!obj.graspable) return;

  const State& s_v = m_graph.state(v.node);
  const State& s_child = m_graph.state(child);
  FfConfig fc;
  fc.banned = m_banned;

  for (const GroundAction& a : m_task.actions) {
    if (!is_pick(a) && !is_place(a)) continue;
    if (std::find(a.args.begin(), a.args.end(), obj.id) == a.args.end()) continue;

    PlanResult before = call_tp(s_v, Goal{a.precon_pos, a.precon_neg}, fc, "enable");
    if (std::holds_alternative<Unsolvable>(before)) {
      --m_attempts_left;
      m_trace.emit("splice_unsolvable", {{"action", a.str()}, {"phase", "enable"}});
      continue;
    }
    Plan full = std::get<Plan>(std::move(before));
    if (!applicable(full.states.back(), a)) continue;
    State s_eff = apply(full.states.back(), a);
    full.actions.push_back(a.id);
    full.states.push_back(s_eff);

    PlanResult after = call_tp(s_eff, exact_state_goal(s_child, m_task), fc, "rejoin");
    if (std::holds_alternative<Unsolvable>(after)) {
      --m_attempts_left;
      m_trace.emit("splice_unsolvable", {{"action", a.str()}, {"phase", "rejoin"}});
      continue;
    }
    const Plan& rest = std::get<Plan>(after);
    for (size_t i = 0; i < rest.actions.size(); ++i) {
      full.actions.push_back(rest.actions[i]);
      full.states.push_back(rest.states[i + 1]);
    }

    try {
      m_graph.update(full, m_task);
      m_trace.emit("splice", {{"action", a.str()}, {"len", full.actions.size()}});
    } catch (const RGraphError& err) {
      if (err.kind() != RGraphError::Kind::Cycle) throw;
      m_trace.emit("splice_cycle", {{"action", a.str()}});
    }
  }
}

void TampEngine::record_incumbent(const VisitCtx& v) {
  if (v.cost >= m_cstar) return;
  m_cstar = v.cost;
  m_best = Incumbent{v.nodes, v.actions, v.paths, v.cost};
  m_trace.emit("incumbent", {{"c_star", v.cost}, {"len", v.actions.size()}});
}

void TampEngine::traverse(VisitCtx& v) {
  if (m_attempts_left <= 0) return;
  if (GroundTask::goal_satisfied(m_graph.state(v.node), m_task.goal)) {
    record_incumbent(v);
    return;
  }
  std::set<uint32_t> done;
  for (;;) {
    // children can grow while edges are planned (subtask splices at this node)
    std::vector<uint32_t> wave;
    for (uint32_t c : m_graph.children(v.node)) {
      if (!done.count(c)) wave.push_back(c);
    }
    if (wave.empty()) break;
    std::stable_sort(wave.begin(), wave.end(), [&](uint32_t x, uint32_t y) {
      double ex = edge_estimate(v, x);
      double ey = edge_estimate(v, y);
      if (ex != ey) return ex < ey;
      return x < y;
    });
    for (uint32_t child : wave) {
      done.insert(child);
      if (m_attempts_left <= 0) return;
      const RGraphEdge& e = m_graph.edge(v.node, child);
      if (std::binary_search(m_banned.begin(), m_banned.end(), e.action)) continue;
      EdgeEpisode ep = plan_edge(v, child, false);
      if (!ep.ok) {
        --m_attempts_left;
        m_trace.emit("edge_failed", {{"action", m_task.actions.at(e.action).str()},
                                     {"attempts_left", m_attempts_left}});
        continue;
      }
      double ncost = v.cost + ep.path.effort_s;
      if (ncost >= m_cstar) {
        m_trace.emit("pruned", {{"action", m_task.actions.at(e.action).str()},
                                {"cost", ncost},
                                {"c_star", m_cstar}});
        continue;
      }
      VisitCtx cv;
      cv.node = child;
      cv.world = v.world;
      apply_action_geometry(cv.world, m_task.actions.at(e.action), ep.path);
      cv.cost = ncost;
      cv.nodes = v.nodes;
      cv.nodes.push_back(child);
      cv.actions = v.actions;
      cv.actions.push_back(e.action);
      cv.paths = v.paths;
      cv.paths.push_back(std::move(ep.path));
      traverse(cv);
    }
  }
}

void TampEngine::seed_incumbent(const Plan& p) {
  VisitCtx v;
  v.node = m_graph.root();
  v.world = m_world0;
  v.nodes = {v.node};
  for (uint32_t aid : p.actions) {
    uint32_t child = UINT32_MAX;
    for (uint32_t c : m_graph.children(v.node)) {
      if (m_graph.edge(v.node, c).action == aid) {
        child = c;
        break;
      }
    }
    if (child == UINT32_MAX) return;
    EdgeEpisode ep = plan_edge(v, child, true);
    if (!ep.ok) {
      m_trace.emit("seed_blocked", {{"action", m_task.actions.at(aid).str()},
                                    {"movable", ep.movable_hit}});
      return;  // incumbent stays at +infinity
    }
    VisitCtx nv;
    nv.node = child;
    nv.world = v.world;
    apply_action_geometry(nv.world, m_task.actions.at(aid), ep.path);
    nv.cost = v.cost + ep.path.effort_s;
    nv.nodes = v.nodes;
    nv.nodes.push_back(child);
    nv.actions = v.actions;
    nv.actions.push_back(aid);
    nv.paths = v.paths;
    nv.paths.push_back(std::move(ep.path));
    v = std::move(nv);
  }
  record_incumbent(v);
  m_trace.emit("seeded", {{"c_star", m_cstar}});
}

TmpResult TampEngine::tmp() {
  m_best.reset();
  m_cstar = std::numeric_limits<double>::infinity();
  m_attempts_left = m_cfg.max_attempts;
  m_banned.clear();
  m_trace.emit("tmp_start", {{"atoms", m_task.atoms.size()},
                             {"actions", m_task.actions.size()},
                             {"seed", m_cfg.motion.seed},
                             {"eager", m_cfg.motion.eager}});

  if (m_task.goal_satisfied(m_task.init)) {
    m_graph = RGraph::build({Plan{{}, {m_task.init}}}, m_task);
    Incumbent inc;
    inc.nodes = {m_graph.root()};
    inc.c_star = 0.0;
    m_trace.emit("incumbent", {{"c_star", 0.0}, {"len", 0}});
    return inc;
  }

  PlanResult pr = call_tp(m_task.init, m_task.goal, {}, "root");
  if (std::holds_alternative<Unsolvable>(pr)) {
    m_trace.emit("unsolvable", {});
    return Failure{Failure::Reason::UnsolvableTask};
  }
  const Plan& p0 = std::get<Plan>(pr);
  m_graph = RGraph::build({p0}, m_task);
  seed_incumbent(p0);

  VisitCtx root;
  root.node = m_graph.root();
  root.world = m_world0;
  root.nodes = {root.node};
  traverse(root);

  m_trace.emit("tmp_done", {{"c_star", m_best ? m_cstar : -1.0},
                            {"nodes", m_graph.node_count()},
                            {"edges", m_graph.edge_count()},
                            {"point_checks", m_counters.point_checks},
                            {"segment_checks", m_counters.segment_checks}});
  if (m_best) return *m_best;
  return Failure{Failure::Reason::AttemptsExhausted};
}

TmpResult TampEngine::plan_from(const State& state, const Config& at, const WorldState& world,
                                const std::vector<uint32_t>& banned) {
  m_banned = banned;
  std::sort(m_banned.begin(), m_banned.end());
  m_best.reset();
  m_cstar = std::numeric_limits<double>::infinity();
  m_attempts_left = m_cfg.max_attempts;
  m_trace.emit("replan_start", {{"at", config_json(at)}, {"banned", m_banned.size()}});

  if (GroundTask::goal_satisfied(state, m_task.goal)) {
    auto node = m_graph.find_node(state);
    if (!node) {
      m_graph.add_branch(Plan{{}, {state}}, m_task);
      node = m_graph.find_node(state);
    }
    Incumbent inc;
    inc.nodes = {*node};
    inc.c_star = 0.0;
    return inc;
  }

  // always re-ask the task planner: bans may route around edges the graph
  // already encodes, and add_branch dedups anything it has seen before
  FfConfig fc;
  fc.banned = m_banned;
  PlanResult pr = call_tp(state, m_task.goal, fc, "replan");
  if (std::holds_alternative<Unsolvable>(pr)) {
    m_trace.emit("unsolvable", {});
    return Failure{Failure::Reason::UnsolvableTask};
  }
  try {
    m_graph.add_branch(std::get<Plan>(pr), m_task);
  } catch (const RGraphError& err) {
    if (err.kind() != RGraphError::Kind::Cycle) throw;
    m_trace.emit("replan_cycle", {});
  }
  auto node = m_graph.find_node(state);
  if (!node) {
    m_trace.emit("unsolvable", {});
    return Failure{Failure::Reason::UnsolvableTask};
  }

  VisitCtx v;
  v.node = *node;
  v.world = world;
  v.world.robot.pose = at;
  v.nodes = {*node};
  traverse(v);

  m_trace.emit("replan_done", {{"c_star", m_best ? m_cstar : -1.0}});
  if (m_best) return *m_best;
  return Failure{Failure::Reason::AttemptsExhausted};
}

void TampEngine::enrich(const std::vector<Contingency>& contingencies) {
  for (const Contingency& c : contingencies) {
    State v0 = override_state(m_graph.state(m_graph.root()), c.add, c.remove);
    if (GroundTask::goal_satisfied(v0, m_task.goal)) continue;
    FfConfig fc;
    fc.banned = m_banned;
    PlanResult pr = call_tp(v0, m_task.goal, fc, "contingency");
    if (std::holds_alternative<Unsolvable>(pr)) {
      m_trace.emit("contingency_unsolvable", {});
      continue;
    }
    const Plan& p = std::get<Plan>(pr);
    try {
      m_graph.add_branch(p, m_task);
    } catch (const RGraphError&) {
      m_trace.emit("contingency_rejected", {});
      continue;
    }

    VisitCtx v;
    v.node = *m_graph.find_node(v0);
    v.world = c.world.applied_to(m_world0);
    v.nodes = {v.node};
    bool complete = true;
    for (uint32_t aid : p.actions) {
      uint32_t child = UINT32_MAX;
      for (uint32_t ch : m_graph.children(v.node)) {
        if (m_graph.edge(v.node, ch).action == aid) {
          child = ch;
          break;
        }
      }
      if (child == UINT32_MAX) {
        complete = false;
        break;
      }
      EdgeEpisode ep = plan_edge(v, child, true);
      if (!ep.ok) {
        complete = false;
        m_trace.emit("contingency_blocked",
                     {{"action", m_task.actions.at(aid).str()}});
        break;
      }
      VisitCtx nv;
      nv.node = child;
      nv.world = v.world;
      apply_action_geometry(nv.world, m_task.actions.at(aid), ep.path);
      nv.nodes = v.nodes;
      nv.nodes.push_back(child);
      v = std::move(nv);
    }
    m_trace.emit("contingency", {{"len", p.actions.size()}, {"validated", complete}});
  }
}

}  // namespace etamp
