#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "etamp/ff.hpp"
#include "etamp/ground.hpp"
#include "etamp/kpiece.hpp"
#include "etamp/pddl.hpp"
#include "etamp/world.hpp"

namespace {

using namespace etamp;

WorldState cluttered_world() {
  WorldState w;
  w.bounds = {{0.0, 0.0}, {10.0, 10.0}};
  w.robot.pose = Config(0.5, 0.5, 0.0);
  w.robot.radius = 0.3;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 12; ++i) {
    double cx = uniform_range(rng, 1.5, 8.5);
    double cy = uniform_range(rng, 1.5, 8.5);
    w.statics.push_back({{cx - 0.3, cy - 0.3}, {cx + 0.3, cy - 0.3},
                         {cx + 0.3, cy + 0.3}, {cx - 0.3, cy + 0.3}});
  }
  return w;
}

const char* kDomain = R"((define (domain towers)
  (:requirements :strips :typing)
  (:types disk peg)
  (:predicates (on ?d - disk ?p - peg) (clear ?p - peg) (smaller ?a - disk ?b - disk))
  (:action move
    :parameters (?d - disk ?from - peg ?to - peg)
    :precondition (and (on ?d ?from) (clear ?to))
    :effect (and (on ?d ?to) (clear ?from) (not (on ?d ?from)) (not (clear ?to))))))";

const char* kProblem = R"((define (problem t1) (:domain towers)
  (:objects d1 d2 d3 - disk p1 p2 p3 p4 - peg)
  (:init (on d1 p1) (on d2 p2) (on d3 p3) (clear p4))
  (:goal (and (on d1 p4)))))";

void BM_PointCheck(benchmark::State& state) {
  WorldState w = cluttered_world();
  Config q(5.0, 5.0, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(collision_free(q, w));
}
BENCHMARK(BM_PointCheck);

void BM_SegmentSweep(benchmark::State& state) {
  WorldState w = cluttered_world();
  Config a(0.5, 0.5, 0.0), b(9.5, 9.5, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(segment_status(a, b, w));
}
BENCHMARK(BM_SegmentSweep);

void BM_Ground(benchmark::State& state) {
  DomainDef d = parse_domain(kDomain);
  ProblemDef p = parse_problem(kProblem, d);
  for (auto _ : state) benchmark::DoNotOptimize(ground(d, p));
}
BENCHMARK(BM_Ground);

void BM_HeuristicEval(benchmark::State& state) {
  DomainDef d = parse_domain(kDomain);
  ProblemDef p = parse_problem(kProblem, d);
  GroundTask task = ground(d, p);
  FfPlanner ff(task);
  FfConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(ff.evaluate(task.init, task.goal, cfg));
}
BENCHMARK(BM_HeuristicEval);

void BM_PlanMotion(benchmark::State& state) {
  WorldState w = cluttered_world();
  PlannerConfig cfg;
  cfg.seed = 11;
  GoalSpec goal;
  goal.target = Config(9.0, 9.0, 0.0);
  goal.any_theta = true;
  for (auto _ : state) {
    CheckCounters counters;
    benchmark::DoNotOptimize(plan_motion(w.robot.pose, goal, w, cfg, &counters));
  }
}
BENCHMARK(BM_PlanMotion);

}  // namespace

BENCHMARK_MAIN();
