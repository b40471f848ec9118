#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "etamp/scenario.hpp"

using namespace etamp;

namespace {

const std::string kFix = ETAMP_FIXTURE_DIR;

struct Run {
  Scenario sc;
  std::unique_ptr<TampEngine> eng;
  Incumbent inc;
  ExecutionTrace tr;
};

// plan the scenario, pre-encode its contingencies, execute against its timeline
Run plan_and_run(const std::string& rel, bool use_runtime = true) {
  Run r{load_scenario(kFix + rel), nullptr, {}, {}};
  r.eng = std::make_unique<TampEngine>(r.sc.task, r.sc.world, r.sc.engine);
  TmpResult pr = r.eng->tmp();
  REQUIRE(std::holds_alternative<Incumbent>(pr));
  r.inc = std::get<Incumbent>(pr);
  if (!r.sc.contingencies.empty()) r.eng->enrich(r.sc.contingencies);
  Executor ex(*r.eng);
  r.tr = ex.run(r.inc, r.sc.timeline, use_runtime ? r.sc.runtime_state : std::nullopt,
                use_runtime ? r.sc.runtime_world : std::nullopt);
  return r;
}

size_t count_action_started(const ExecutionTrace& tr, const std::string& schema) {
  size_t n = 0;
  for (const auto& e : tr.entries) {
    if (e.at("type") == "action_started" &&
        e.at("action").get<std::string>().find(schema) != std::string::npos) {
      ++n;
    }
  }
  return n;
}

const nlohmann::json* find_entry(const ExecutionTrace& tr, const char* type) {
  for (const auto& e : tr.entries) {
    if (e.at("type") == type) return &e;
  }
  return nullptr;
}

void check_trace_schema(const ExecutionTrace& tr) {
  REQUIRE(!tr.entries.empty());
  uint64_t expect = 0;
  for (const auto& e : tr.entries) {
    CHECK(e.at("v") == 1);
    CHECK(e.at("type").is_string());
    CHECK(e.at("seq").get<uint64_t>() == expect);
    ++expect;
  }
  CHECK(tr.entries.front().at("type") == "start");
  CHECK(tr.entries.back().at("type") == "outcome");
}

}  // namespace

TEST_CASE("an uneventful run replays the incumbent with zero replans") {
  Run r = plan_and_run("/branch/main.scenario.json");
  CHECK(r.tr.outcome == ExecOutcome::Success);
  CHECK(r.tr.reason == ExecutionTrace::FailReason::None);
  CHECK(r.tr.replans == 0);
  CHECK(r.tr.count("replan") == 0);
  CHECK(r.tr.count("route_dropped") == 0);
  CHECK(r.tr.count("branch_chosen") == 0);
  CHECK(r.tr.count("action_started") == r.inc.actions.size());
  CHECK(r.tr.count("action_finished") == r.inc.actions.size());
  CHECK(r.tr.total_effort_s == doctest::Approx(r.inc.c_star).epsilon(1e-9));
  check_trace_schema(r.tr);

  const nlohmann::json* reval = find_entry(r.tr, "revalidate");
  REQUIRE(reval);
  CHECK(reval->at("ok") == true);

  const nlohmann::json* start = find_entry(r.tr, "start");
  REQUIRE(start);
  CHECK(start->at("variant") == false);
}

TEST_CASE("a pre-encoded contingency executes without any replanning") {
  Run r = plan_and_run("/branch/holding.scenario.json");
  REQUIRE(r.sc.runtime_state.has_value());

  CHECK(r.tr.outcome == ExecOutcome::Success);
  CHECK(r.tr.replans == 0);
  CHECK(r.tr.count("replan") == 0);
  CHECK(r.tr.count("route_dropped") == 1);
  CHECK(r.tr.count("branch_chosen") >= 1);
  check_trace_schema(r.tr);

  const nlohmann::json* start = find_entry(r.tr, "start");
  REQUIRE(start);
  CHECK(start->at("variant") == true);

  // the occupied gripper forces a place before the goal pick
  CHECK(count_action_started(r.tr, "place") >= 1);
  CHECK(count_action_started(r.tr, "pick") >= 1);
}

TEST_CASE("an obstacle appearing on the route forces exactly one replan") {
  Run r = plan_and_run("/onroute/appear.scenario.json");
  REQUIRE(r.sc.timeline.size() == 1);

  CHECK(r.tr.outcome == ExecOutcome::Success);
  CHECK(r.tr.reason == ExecutionTrace::FailReason::None);
  CHECK(r.tr.replans == 1);
  CHECK(r.tr.count("event") == 1);
  CHECK(r.tr.count("motion_invalidated") == 1);
  CHECK(r.tr.count("halt") == 1);
  CHECK(r.tr.count("replan") == 1);
  CHECK(r.tr.count("replan_ok") == 1);
  check_trace_schema(r.tr);

  // the appeared obstacle is part of the final world and the revalidation passes
  CHECK(r.tr.worlds.back().find_movable("blocker") != nullptr);
  CHECK(r.tr.worlds.front().find_movable("blocker") == nullptr);
  const nlohmann::json* reval = find_entry(r.tr, "revalidate");
  REQUIRE(reval);
  CHECK(reval->at("ok") == true);
  CHECK(reval->at("segments").get<size_t>() == r.tr.segments.size());
  REQUIRE(!r.tr.segments.empty());

  // executed segments revalidate against the world in force when they ran
  for (const auto& seg : r.tr.segments) {
    CHECK(seg.epoch < r.tr.worlds.size());
    CHECK(segment_status(seg.a, seg.b, r.tr.worlds.at(seg.epoch), 0.01).clear());
  }

  // the halt happened at the event time, mid-drive
  const nlohmann::json* halt = find_entry(r.tr, "halt");
  REQUIRE(halt);
  CHECK(halt->at("sim_t").get<double>() == doctest::Approx(2.0));
}

TEST_CASE("a failed action is banned and the route re-planned around it") {
  Run r = plan_and_run("/regrasp/failpick.scenario.json");

  CHECK(r.tr.outcome == ExecOutcome::Success);
  CHECK(r.tr.replans == 1);
  CHECK(r.tr.count("action_failed") == 1);
  check_trace_schema(r.tr);

  // the failure hit a pick; success required a second, different pick
  const nlohmann::json* failed = find_entry(r.tr, "action_failed");
  REQUIRE(failed);
  std::string failed_action = failed->at("action").get<std::string>();
  CHECK(failed_action.find("pick") != std::string::npos);
  CHECK(count_action_started(r.tr, "pick") == 2);

  std::vector<std::string> picks;
  for (const auto& e : r.tr.entries) {
    if (e.at("type") == "action_started") {
      std::string a = e.at("action").get<std::string>();
      if (a.find("pick") != std::string::npos) picks.push_back(a);
    }
  }
  REQUIRE(picks.size() == 2);
  CHECK(picks[0] == failed_action);
  CHECK(picks[1] != failed_action);

  // withheld effects: the goal still needed the retry, so the failed pick
  // cannot be the last started action
  CHECK(r.tr.entries.back().at("type") == "outcome");
  const nlohmann::json* reval = find_entry(r.tr, "revalidate");
  REQUIRE(reval);
  CHECK(reval->at("ok") == true);
}

TEST_CASE("a sealed goal pocket exhausts the attempt budget") {
  Run r = plan_and_run("/blocked/blocked.scenario.json");
  REQUIRE(r.sc.engine.max_attempts == 3);

  CHECK(r.tr.outcome == ExecOutcome::Failure);
  CHECK(r.tr.reason == ExecutionTrace::FailReason::AttemptsExhausted);
  CHECK(r.tr.replans == 3);
  CHECK(r.tr.count("replan") == 3);
  CHECK(r.tr.count("replan_ok") == 0);
  check_trace_schema(r.tr);

  const nlohmann::json& out = r.tr.entries.back();
  CHECK(out.at("outcome") == "failure");
  CHECK(out.at("reason") == "attempts_exhausted");
  CHECK(out.at("replans") == 3);
}

TEST_CASE("execution is deterministic end to end") {
  auto dump = [] {
    Run r = plan_and_run("/onroute/appear.scenario.json");
    std::ostringstream os;
    r.tr.dump_jsonl(os);
    return os.str();
  };
  std::string a = dump();
  std::string b = dump();
  CHECK(a == b);
  CHECK(!a.empty());
}

TEST_CASE("simulation time in the trace never runs backwards") {
  Run r = plan_and_run("/onroute/appear.scenario.json");
  double last = 0.0;
  size_t stamped = 0;
  for (const auto& e : r.tr.entries) {
    if (!e.contains("sim_t")) continue;
    double t = e.at("sim_t").get<double>();
    CHECK(t >= last);
    last = t;
    ++stamped;
  }
  CHECK(stamped >= 3);
  CHECK(r.tr.total_effort_s == doctest::Approx(last));
}

TEST_CASE("timeline parsing enforces the event schema") {
  auto parse = [](const char* text) {
    return timeline_from_json(nlohmann::json::parse(text), "<timeline>");
  };

  EventTimeline tl = parse(R"([
    {"t": 1.0, "kind": "object_moved", "id": "box1", "pose": [2, 3, 0]},
    {"after_action": 0, "kind": "action_failure"},
    {"t": 4.0, "kind": "obstacle_appears",
     "object": {"id": "b", "footprint": [[-0.1, -0.1], [0.1, -0.1], [0.1, 0.1], [-0.1, 0.1]],
                "pose": [1, 1, 0], "graspable": false}}
  ])");
  REQUIRE(tl.size() == 3);
  CHECK(tl[0].t == 1.0);
  CHECK(std::holds_alternative<ObjectMoved>(tl[0].what));
  CHECK(tl[1].after_action == 0);
  CHECK(std::holds_alternative<ActionFails>(tl[1].what));
  CHECK(std::holds_alternative<ObstacleAppears>(tl[2].what));

  CHECK_THROWS_AS(parse(R"({"t": 1})"), ParseError);
  CHECK_THROWS_AS(parse(R"([{"kind": "action_failure"}])"), ParseError);
  CHECK_THROWS_AS(parse(R"([{"t": 1, "after_action": 0, "kind": "action_failure"}])"),
                  ParseError);
  CHECK_THROWS_AS(parse(R"([{"t": 1, "kind": "action_failure"}])"), ParseError);
  CHECK_THROWS_AS(parse(R"([{"t": -1, "kind": "object_moved", "id": "x", "pose": [0, 0, 0]}])"),
                  ParseError);
  CHECK_THROWS_AS(parse(R"([{"t": 5, "kind": "object_moved", "id": "x", "pose": [0, 0, 0]},
                            {"t": 4, "kind": "object_moved", "id": "x", "pose": [0, 0, 0]}])"),
                  ParseError);
  CHECK_THROWS_AS(parse(R"([{"t": 1, "kind": "obstacle_appears"}])"), ParseError);
  CHECK_THROWS_AS(parse(R"([{"t": 1, "kind": "teleport"}])"), ParseError);
  CHECK_THROWS_AS(parse(R"([{"after_action": -2, "kind": "action_failure"}])"), ParseError);
}

TEST_CASE("timeline files load through the same validation") {
  EventTimeline tl = load_timeline(kFix + "/onroute/timeline.json");
  REQUIRE(tl.size() == 1);
  REQUIRE(tl[0].t.has_value());
  CHECK(*tl[0].t == 2.0);
  const auto* oa = std::get_if<ObstacleAppears>(&tl[0].what);
  REQUIRE(oa);
  CHECK(oa->object.id == "blocker");
  CHECK(!oa->object.graspable);
}
