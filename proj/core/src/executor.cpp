#include "etamp/executor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "etamp/pddl.hpp"

namespace etamp {

namespace {

nlohmann::json config_json(const Config& c) { return {c.x, c.y, c.theta}; }

double config_gap(const Config& a, const Config& b) {
  return std::max((a.pos() - b.pos()).norm(), std::fabs(angle_diff(a.theta, b.theta)));
}

const char* reason_name(ExecutionTrace::FailReason r) {
  switch (r) {
    case ExecutionTrace::FailReason::AttemptsExhausted: return "attempts_exhausted";
    case ExecutionTrace::FailReason::Unsolvable: return "unsolvable";
    case ExecutionTrace::FailReason::RevalidationFailed: return "revalidation_failed";
    case ExecutionTrace::FailReason::None: break;
  }
  return "none";
}

}  // namespace

EventTimeline timeline_from_json(const nlohmann::json& j, const std::string& filename) {
  auto fail = [&](const std::string& msg) {
    throw ParseError(DiagKind::SyntaxError, filename, 0, 0, msg);
  };
  if (!j.is_array()) fail("timeline must be an array");
  EventTimeline out;
  double last_t = -std::numeric_limits<double>::infinity();
  for (const auto& je : j) {
    if (!je.is_object() || !je.contains("kind")) fail("timeline entry needs a kind");
    Event ev;
    bool has_t = je.contains("t");
    bool has_after = je.contains("after_action");
    if (has_t == has_after) fail("timeline entry needs exactly one of t / after_action");
    if (has_t) {
      ev.t = je.at("t").get<double>();
      if (*ev.t < 0.0) fail("event time must be nonnegative");
      if (*ev.t < last_t) fail("event times must be nondecreasing");
      last_t = *ev.t;
    } else {
      ev.after_action = je.at("after_action").get<int>();
      if (*ev.after_action < 0) fail("after_action must be nonnegative");
    }
    std::string kind = je.at("kind").get<std::string>();
    if (kind == "obstacle_appears") {
      if (!je.contains("object")) fail("obstacle_appears needs an object");
      ev.what = ObstacleAppears{movable_from_json(je.at("object"), filename)};
    } else if (kind == "action_failure") {
      if (!ev.after_action) fail("action_failure must trigger on after_action");
      ev.what = ActionFails{};
    } else if (kind == "object_moved") {
      if (!je.contains("id") || !je.contains("pose")) fail("object_moved needs id and pose");
      ev.what = ObjectMoved{je.at("id").get<std::string>(),
                            config_from_json(je.at("pose"), filename)};
    } else {
      fail("unknown event kind: " + kind);
    }
    out.push_back(std::move(ev));
  }
  return out;
}

EventTimeline load_timeline(const std::string& path) {
  std::string text = read_text_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(DiagKind::SyntaxError, path, 0, 0, e.what());
  }
  return timeline_from_json(j, path);
}

void ExecutionTrace::dump_jsonl(std::ostream& os) const {
  for (const auto& e : entries) os << e.dump() << "\n";
}

size_t ExecutionTrace::count(const char* type) const {
  size_t n = 0;
  for (const auto& e : entries) {
    if (e.at("type").get<std::string>() == type) ++n;
  }
  return n;
}

Executor::Executor(TampEngine& engine, ExecutorConfig cfg) : m_engine(engine), m_cfg(cfg) {}

void Executor::emit(ExecutionTrace& tr, const char* type, nlohmann::json fields) {
  fields["seq"] = m_seq++;
  fields["type"] = type;
  fields["v"] = 1;
  tr.entries.push_back(std::move(fields));
}

std::deque<Executor::Step> Executor::route_from(const Incumbent& inc) {
  std::deque<Step> route;
  for (size_t i = 0; i < inc.actions.size(); ++i) {
    route.push_back({inc.nodes[i], inc.nodes[i + 1], inc.actions[i], inc.paths[i]});
  }
  return route;
}

void Executor::apply_event(Cursor& cur, const Event& ev, ExecutionTrace& tr) {
  if (const auto* oa = std::get_if<ObstacleAppears>(&ev.what)) {
    if (MovableObject* m = cur.world.find_movable(oa->object.id)) {
      *m = oa->object;
    } else {
      cur.world.movables.push_back(oa->object);
      std::sort(cur.world.movables.begin(), cur.world.movables.end(),
                [](const MovableObject& a, const MovableObject& b) { return a.id < b.id; });
    }
    emit(tr, "event", {{"kind", "obstacle_appears"},
                       {"id", oa->object.id},
                       {"pose", config_json(oa->object.pose)},
                       {"sim_t", cur.sim_t}});
  } else if (const auto* om = std::get_if<ObjectMoved>(&ev.what)) {
    if (MovableObject* m = cur.world.find_movable(om->id)) m->pose = om->pose;
    emit(tr, "event", {{"kind", "object_moved"},
                       {"id", om->id},
                       {"pose", config_json(om->pose)},
                       {"sim_t", cur.sim_t}});
  }
  tr.worlds.push_back(cur.world);  // new epoch
}

bool Executor::remainder_valid(const MotionPath& path, double local_t, const WorldState& w,
                               ExecutionTrace& tr) {
  Config prev = path.config_at(local_t);
  for (const auto& wp : path.waypoints) {
    if (wp.t <= local_t) continue;
    SegmentHit hit = segment_status(prev, wp.q, w, m_cfg.check_step_m, &tr.counters);
    if (!hit.clear()) {
      emit(tr, "motion_invalidated",
           {{"kind", hit.kind == HitKind::Static ? "static" : "movable"}, {"id", hit.id}});
      return false;
    }
    prev = wp.q;
  }
  return true;
}

Executor::MotionOutcome Executor::execute_motion(Cursor& cur, const MotionPath& path,
                                                 ExecutionTrace& tr) {
  const auto& wps = path.waypoints;
  if (wps.size() < 2) return MotionOutcome::Completed;
  double t0 = cur.sim_t;
  for (size_t i = 0; i + 1 < wps.size(); ++i) {
    double seg_end_abs = t0 + wps[i + 1].t;
    for (;;) {
      if (m_next_time_event >= m_time_order.size()) break;
      const Event& ev = m_timeline[m_time_order[m_next_time_event]];
      if (*ev.t > seg_end_abs) break;
      double et = std::max(*ev.t, cur.sim_t);
      Config halt = path.config_at(et - t0);
      tr.segments.push_back({cur.world.robot.pose, halt, tr.worlds.size() - 1});
      cur.sim_t = et;
      cur.world.robot.pose = halt;
      ++m_next_time_event;
      apply_event(cur, ev, tr);
      if (!remainder_valid(path, et - t0, cur.world, tr)) {
        emit(tr, "halt", {{"at", config_json(halt)}, {"sim_t", cur.sim_t}});
        return MotionOutcome::Interrupted;
      }
    }
    tr.segments.push_back({cur.world.robot.pose, wps[i + 1].q, tr.worlds.size() - 1});
    cur.sim_t = seg_end_abs;
    cur.world.robot.pose = wps[i + 1].q;
  }
  return MotionOutcome::Completed;
}

bool Executor::replan(Cursor& cur, std::deque<Step>& route, ExecutionTrace& tr,
                      ExecutionTrace::FailReason& why) {
  route.clear();
  int budget = m_engine.config().max_attempts;
  while (tr.replans < budget) {
    ++tr.replans;
    emit(tr, "replan", {{"n", tr.replans}, {"sim_t", cur.sim_t}});
    TmpResult r = m_engine.plan_from(cur.sym, cur.world.robot.pose, cur.world, m_banned);
    if (const auto* inc = std::get_if<Incumbent>(&r)) {
      route = route_from(*inc);
      emit(tr, "replan_ok", {{"c_star", inc->c_star}, {"len", inc->actions.size()}});
      return true;
    }
    if (std::get<Failure>(r).reason == Failure::Reason::UnsolvableTask) {
      why = ExecutionTrace::FailReason::Unsolvable;
      return false;
    }
  }
  why = ExecutionTrace::FailReason::AttemptsExhausted;
  return false;
}

void Executor::finish(Cursor& cur, ExecutionTrace& tr) {
  // soundness gate: every executed segment against the world in force at the time
  bool ok = true;
  std::string bad;
  for (const auto& seg : tr.segments) {
    SegmentHit hit =
        segment_status(seg.a, seg.b, tr.worlds.at(seg.epoch), m_cfg.check_step_m, &tr.counters);
    if (!hit.clear()) {
      ok = false;
      bad = hit.id;
      break;
    }
  }
  emit(tr, "revalidate", {{"segments", tr.segments.size()}, {"ok", ok}, {"hit", bad}});
  tr.total_effort_s = cur.sim_t;
  tr.outcome = ok ? ExecOutcome::Success : ExecOutcome::Failure;
  tr.reason =
      ok ? ExecutionTrace::FailReason::None : ExecutionTrace::FailReason::RevalidationFailed;
  emit(tr, "outcome", {{"outcome", ok ? "success" : "failure"},
                       {"reason", reason_name(tr.reason)},
                       {"total_effort_s", tr.total_effort_s},
                       {"replans", tr.replans}});
}

ExecutionTrace Executor::run(const Incumbent& incumbent, const EventTimeline& timeline,
                             const std::optional<State>& runtime_state,
                             const std::optional<WorldOverride>& runtime_world) {
  ExecutionTrace tr;
  m_seq = 0;
  m_banned.clear();
  m_timeline = timeline;
  m_time_order.clear();
  m_action_events.clear();
  for (size_t i = 0; i < m_timeline.size(); ++i) {
    if (m_timeline[i].t) {
      m_time_order.push_back(i);
    } else {
      m_action_events.push_back(i);
    }
  }
  m_next_time_event = 0;

  const GroundTask& task = m_engine.task();
  Cursor cur;
  cur.sym = runtime_state ? *runtime_state : task.init;
  cur.world = runtime_world ? runtime_world->applied_to(m_engine.world()) : m_engine.world();
  tr.worlds.push_back(cur.world);

  emit(tr, "start", {{"variant", runtime_state.has_value() || runtime_world.has_value()},
                     {"events", m_timeline.size()}});

  std::deque<Step> route = route_from(incumbent);
  std::vector<char> fired(m_timeline.size(), 0);

  auto fail_out = [&](ExecutionTrace::FailReason why) {
    tr.reason = why;
    tr.outcome = ExecOutcome::Failure;
    tr.total_effort_s = cur.sim_t;
    emit(tr, "outcome", {{"outcome", "failure"},
                         {"reason", reason_name(why)},
                         {"total_effort_s", tr.total_effort_s},
                         {"replans", tr.replans}});
  };

  for (;;) {
    // events that came due while no motion was running
    while (m_next_time_event < m_time_order.size() &&
           *m_timeline[m_time_order[m_next_time_event]].t <= cur.sim_t) {
      apply_event(cur, m_timeline[m_time_order[m_next_time_event]], tr);
      ++m_next_time_event;
    }

    if (task.goal_satisfied(cur.sym)) {
      finish(cur, tr);
      return tr;
    }

    auto node = m_engine.graph().find_node(cur.sym);

    std::optional<Step> step;
    if (!route.empty() && node && route.front().parent == *node &&
        applicable(cur.sym, task.actions.at(route.front().action))) {
      step = route.front();
      route.pop_front();
    } else {
      if (!route.empty()) {
        route.clear();
        emit(tr, "route_dropped", {{"sim_t", cur.sim_t}});
      }
      if (node) {
        // cheapest pre-encoded branch whose action applies right now
        double best = std::numeric_limits<double>::infinity();
        uint32_t best_child = 0;
        const RGraphEdge* best_edge = nullptr;
        for (uint32_t ch : m_engine.graph().children(*node)) {
          const RGraphEdge& e = m_engine.graph().edge(*node, ch);
          if (!e.path || e.path->status != PathStatus::Valid) continue;
          if (std::binary_search(m_banned.begin(), m_banned.end(), e.action)) continue;
          if (!applicable(cur.sym, task.actions.at(e.action))) continue;
          double eff = e.effort_s.value_or(std::numeric_limits<double>::infinity());
          if (!best_edge || eff < best || (eff == best && ch < best_child)) {
            best = eff;
            best_child = ch;
            best_edge = &e;
          }
        }
        if (best_edge) {
          step = Step{*node, best_child, best_edge->action, *best_edge->path};
          emit(tr, "branch_chosen", {{"node", *node},
                                     {"child", best_child},
                                     {"action", task.actions.at(best_edge->action).str()},
                                     {"effort_s", best_edge->effort_s.value_or(-1.0)}});
        }
      }
    }

    if (!step) {
      emit(tr, "no_applicable_branch", {{"sim_t", cur.sim_t}});
      ExecutionTrace::FailReason why;
      if (!replan(cur, route, tr, why)) {
        fail_out(why);
        return tr;
      }
      continue;
    }

    // the stored sweep may predate runtime world changes
    MotionPath live = step->path;
    ValidateResult vr = validate(live, cur.world, m_cfg.check_step_m, &tr.counters);
    if (!vr.valid) {
      emit(tr, "stale_path",
           {{"action", task.actions.at(step->action).str()}, {"id", vr.id}});
      route.clear();
      ExecutionTrace::FailReason why;
      if (!replan(cur, route, tr, why)) {
        fail_out(why);
        return tr;
      }
      continue;
    }

    // bridge to the stored path's start when dispatch switched branches
    Config start = live.waypoints.front().q;
    if (config_gap(cur.world.robot.pose, start) > m_cfg.connect_tol) {
      MotionPath conn = time_parameterize({cur.world.robot.pose, start}, cur.world.robot, 0.0);
      ValidateResult cv = validate(conn, cur.world, m_cfg.check_step_m, &tr.counters);
      if (!cv.valid) {
        emit(tr, "connect_blocked", {{"id", cv.id}});
        route.clear();
        ExecutionTrace::FailReason why;
        if (!replan(cur, route, tr, why)) {
          fail_out(why);
          return tr;
        }
        continue;
      }
      emit(tr, "connect", {{"from", config_json(cur.world.robot.pose)},
                           {"to", config_json(start)},
                           {"effort_s", conn.effort_s}});
      if (execute_motion(cur, conn, tr) == MotionOutcome::Interrupted) {
        route.clear();
        ExecutionTrace::FailReason why;
        if (!replan(cur, route, tr, why)) {
          fail_out(why);
          return tr;
        }
        continue;
      }
    }

    emit(tr, "action_started", {{"index", cur.actions_done},
                                {"action", task.actions.at(step->action).str()},
                                {"sim_t", cur.sim_t}});
    if (execute_motion(cur, live, tr) == MotionOutcome::Interrupted) {
      route.clear();
      ExecutionTrace::FailReason why;
      if (!replan(cur, route, tr, why)) {
        fail_out(why);
        return tr;
      }
      continue;
    }

    bool action_failed = false;
    for (size_t idx : m_action_events) {
      const Event& ev = m_timeline[idx];
      if (fired[idx] || *ev.after_action != cur.actions_done) continue;
      fired[idx] = 1;
      if (std::holds_alternative<ActionFails>(ev.what)) {
        action_failed = true;
        emit(tr, "action_failed", {{"index", cur.actions_done},
                                   {"action", task.actions.at(step->action).str()},
                                   {"sim_t", cur.sim_t}});
      } else {
        apply_event(cur, ev, tr);
      }
    }

    if (action_failed) {
      // effects withheld, motion time already spent; never retry this action
      m_banned.push_back(step->action);
      std::sort(m_banned.begin(), m_banned.end());
      m_banned.erase(std::unique(m_banned.begin(), m_banned.end()), m_banned.end());
      ++cur.actions_done;
      route.clear();
      ExecutionTrace::FailReason why;
      if (!replan(cur, route, tr, why)) {
        fail_out(why);
        return tr;
      }
      continue;
    }

    cur.sym = apply(cur.sym, task.actions.at(step->action));
    TampEngine::apply_action_geometry(cur.world, task.actions.at(step->action), live);
    tr.worlds.push_back(cur.world);  // pick/place change the obstacle set
    ++cur.actions_done;
    emit(tr, "action_finished",
         {{"index", cur.actions_done - 1}, {"sim_t", cur.sim_t}});
  }
}

}  // namespace etamp
