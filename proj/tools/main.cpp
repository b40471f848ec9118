#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "etamp/render.hpp"
#include "etamp/scenario.hpp"

namespace {

using namespace etamp;

struct CommonOpts {
  std::string scenario;
  std::optional<uint64_t> seed;
  bool eager = false;
  std::string out = "out";
};

Scenario load_configured(const std::string& path, const std::optional<uint64_t>& seed,
                         bool eager) {
  Scenario sc = load_scenario(path);
  if (seed) sc.engine.motion.seed = *seed;  // flags beat the scenario file
  sc.engine.motion.eager = eager;
  return sc;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ParseError(DiagKind::IoError, p.string(), 0, 0, "cannot open for writing");
  os << content;
}

nlohmann::json config_json(const Config& c) { return {c.x, c.y, c.theta}; }

std::string incumbent_jsonl(const Incumbent& inc, const GroundTask& task) {
  std::string out;
  nlohmann::json head{{"v", 1},
                      {"type", "incumbent"},
                      {"c_star", inc.c_star},
                      {"len", inc.actions.size()}};
  out += head.dump() + "\n";
  for (size_t i = 0; i < inc.actions.size(); ++i) {
    nlohmann::json wps = nlohmann::json::array();
    for (const auto& wp : inc.paths[i].waypoints) {
      wps.push_back({wp.q.x, wp.q.y, wp.q.theta, wp.t});
    }
    nlohmann::json row{{"v", 1},
                       {"type", "edge"},
                       {"index", i},
                       {"action", task.actions.at(inc.actions[i]).str()},
                       {"effort_s", inc.paths[i].effort_s},
                       {"waypoints", wps}};
    if (inc.paths[i].place_pose) row["place_pose"] = config_json(*inc.paths[i].place_pose);
    out += row.dump() + "\n";
  }
  return out;
}

std::string dump_engine_trace(const TampEngine& engine) {
  std::ostringstream ss;
  engine.trace().dump_jsonl(ss);
  return ss.str();
}

std::string dump_rgraph(const TampEngine& engine) {
  std::ostringstream ss;
  engine.graph().dump_jsonl(ss, engine.task());
  return ss.str();
}

int cmd_plan(const CommonOpts& o, bool task_only) {
  Scenario sc = load_configured(o.scenario, o.seed, o.eager);
  std::filesystem::create_directories(o.out);

  if (task_only) {
    FfPlanner ff(sc.task);
    PlanResult pr = ff.plan(sc.task.init, sc.task.goal, {});
    if (const Plan* p = std::get_if<Plan>(&pr)) {
      for (uint32_t aid : p->actions) std::cout << sc.task.actions.at(aid).str() << "\n";
      std::cout << "plan length = " << p->actions.size() << "\n";
      return 0;
    }
    std::cout << "unsolvable\n";
    return 2;
  }

  TampEngine engine(sc.task, sc.world, sc.engine);
  TmpResult result = engine.tmp();
  engine.enrich(sc.contingencies);

  write_file(std::filesystem::path(o.out) / "engine_trace.jsonl", dump_engine_trace(engine));
  write_file(std::filesystem::path(o.out) / "rgraph.jsonl", dump_rgraph(engine));

  if (const Incumbent* inc = std::get_if<Incumbent>(&result)) {
    write_file(std::filesystem::path(o.out) / "incumbent.jsonl",
               incumbent_jsonl(*inc, engine.task()));
    std::printf("c* = %.3f\n", inc->c_star);
    return 0;
  }
  const Failure& f = std::get<Failure>(result);
  std::cout << "failure: "
            << (f.reason == Failure::Reason::UnsolvableTask ? "unsolvable task"
                                                            : "attempts exhausted")
            << "\n";
  return 2;
}

int cmd_run(const CommonOpts& o) {
  Scenario sc = load_configured(o.scenario, o.seed, o.eager);
  std::filesystem::create_directories(o.out);

  TampEngine engine(sc.task, sc.world, sc.engine);
  TmpResult result = engine.tmp();
  engine.enrich(sc.contingencies);
  write_file(std::filesystem::path(o.out) / "rgraph.jsonl", dump_rgraph(engine));

  if (const Failure* f = std::get_if<Failure>(&result)) {
    write_file(std::filesystem::path(o.out) / "engine_trace.jsonl", dump_engine_trace(engine));
    std::cout << "failure: "
              << (f->reason == Failure::Reason::UnsolvableTask ? "unsolvable task"
                                                               : "attempts exhausted")
              << "\n";
    return 2;
  }
  const Incumbent& inc = std::get<Incumbent>(result);
  std::printf("c* = %.3f\n", inc.c_star);
  write_file(std::filesystem::path(o.out) / "incumbent.jsonl",
             incumbent_jsonl(inc, engine.task()));

  Executor exec(engine);
  ExecutionTrace tr = exec.run(inc, sc.timeline, sc.runtime_state, sc.runtime_world);

  write_file(std::filesystem::path(o.out) / "engine_trace.jsonl", dump_engine_trace(engine));
  std::ostringstream ss;
  tr.dump_jsonl(ss);
  write_file(std::filesystem::path(o.out) / "trace.jsonl", ss.str());

  bool ok = tr.outcome == ExecOutcome::Success;
  std::printf("outcome = %s, total_effort = %.3f, replans = %d\n", ok ? "success" : "failure",
              tr.total_effort_s, tr.replans);
  return ok ? 0 : 2;
}

struct BenchRow {
  std::string scenario;
  uint64_t seed = 0;
  double c_star = 0.0;
  bool solved = false;
  double wall_s = 0.0;
  uint64_t point_checks = 0;
  uint64_t segment_checks = 0;
  int replans = 0;
};

int cmd_bench(const std::vector<std::string>& scenarios, int reps, int jobs,
              const std::optional<uint64_t>& seed, bool eager, const std::string& out) {
  std::vector<std::string> files = scenarios;
  std::sort(files.begin(), files.end());
  struct Job {
    std::string file;
    uint64_t seed;
  };
  std::vector<Job> work;
  for (const auto& f : files) {
    uint64_t base = seed.value_or(0);
    for (int r = 0; r < reps; ++r) work.push_back({f, base + static_cast<uint64_t>(r)});
  }

  std::vector<BenchRow> rows(work.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      const Job& jb = work[i];
      BenchRow row;
      row.scenario = std::filesystem::path(jb.file).stem().string();
      row.seed = jb.seed;
      auto t0 = std::chrono::steady_clock::now();
      try {
        Scenario sc = load_configured(jb.file, jb.seed, eager);
        TampEngine engine(sc.task, sc.world, sc.engine);
        TmpResult result = engine.tmp();
        engine.enrich(sc.contingencies);
        if (const Incumbent* inc = std::get_if<Incumbent>(&result)) {
          row.solved = true;
          row.c_star = inc->c_star;
          if (!sc.timeline.empty() || sc.runtime_state || sc.runtime_world) {
            Executor exec(engine);
            ExecutionTrace tr =
                exec.run(*inc, sc.timeline, sc.runtime_state, sc.runtime_world);
            row.replans = tr.replans;
            row.point_checks += tr.counters.point_checks;
            row.segment_checks += tr.counters.segment_checks;
          }
        }
        row.point_checks += engine.counters().point_checks;
        row.segment_checks += engine.counters().segment_checks;
      } catch (const std::exception& e) {
        std::cerr << jb.file << ": " << e.what() << "\n";
      }
      row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rows[i] = std::move(row);
    }
  };

  int n = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string csv = "scenario,seed,c_star,wall_s,point_checks,segment_checks,replans\n";
  for (const auto& r : rows) {
    char cbuf[64];
    if (r.solved) {
      std::snprintf(cbuf, sizeof(cbuf), "%.6f", r.c_star);
    } else {
      std::snprintf(cbuf, sizeof(cbuf), "inf");
    }
    char buf[320];
    std::snprintf(buf, sizeof(buf), "%s,%llu,%s,%.6f,%llu,%llu,%d\n", r.scenario.c_str(),
                  static_cast<unsigned long long>(r.seed), cbuf, r.wall_s,
                  static_cast<unsigned long long>(r.point_checks),
                  static_cast<unsigned long long>(r.segment_checks), r.replans);
    csv += buf;
  }
  std::filesystem::create_directories(out);
  write_file(std::filesystem::path(out) / "bench.csv", csv);
  std::cout << csv;
  return 0;
}

int cmd_render(const CommonOpts& o, const std::string& trace_file) {
  Scenario sc = load_configured(o.scenario, o.seed, o.eager);
  std::vector<std::vector<Config>> paths;
  if (!trace_file.empty()) {
    std::string text = read_text_file(trace_file);
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
      if (line.empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line);
      if (!j.is_object() || j.value("type", "") != "edge" || !j.contains("waypoints")) continue;
      std::vector<Config> path;
      for (const auto& wp : j.at("waypoints")) {
        path.emplace_back(wp.at(0).get<double>(), wp.at(1).get<double>(),
                          wp.at(2).get<double>());
      }
      paths.push_back(std::move(path));
    }
  }
  std::filesystem::create_directories(o.out);
  write_file(std::filesystem::path(o.out) / "scene.svg", render_svg(sc.world, paths));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"effort-minimizing task and motion planner"};
  app.require_subcommand(1);

  CommonOpts plan_o, run_o, render_o;
  bool task_only = false;
  std::string trace_file;
  std::vector<std::string> bench_scenarios;
  int reps = 1, jobs = 1;
  std::optional<uint64_t> bench_seed;
  bool bench_eager = false;
  std::string bench_out = "out";

  auto add_common = [](CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--scenario", o.scenario, "scenario JSON file")->required();
    cmd->add_option("--seed", o.seed, "override the scenario seed");
    cmd->add_flag("--eager", o.eager, "disable lazy validation (sweep at growth time)");
    cmd->add_option("--out", o.out, "output directory");
  };

  CLI::App* plan = app.add_subcommand("plan", "plan a scenario and dump the incumbent");
  add_common(plan, plan_o);
  plan->add_flag("--task-only", task_only, "run only the symbolic task planner");

  CLI::App* run = app.add_subcommand("run", "plan, then execute against the timeline");
  add_common(run, run_o);

  CLI::App* bench = app.add_subcommand("bench", "benchmark scenarios to CSV");
  bench->add_option("--scenario", bench_scenarios, "scenario JSON file(s)");
  bench->add_option("--reps", reps, "repetitions per scenario (seed increments)");
  bench->add_option("--jobs", jobs, "parallel workers");
  bench->add_option("--seed", bench_seed, "base seed");
  bench->add_flag("--eager", bench_eager, "disable lazy validation");
  bench->add_option("--out", bench_out, "output directory");

  CLI::App* render = app.add_subcommand("render", "render the scenario world to SVG");
  add_common(render, render_o);
  render->add_option("--trace", trace_file, "overlay paths from an incumbent dump");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help exits 0; every argument problem is an input error
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(plan)) return cmd_plan(plan_o, task_only);
    if (app.got_subcommand(run)) return cmd_run(run_o);
    if (app.got_subcommand(bench))
      return cmd_bench(bench_scenarios, reps, jobs, bench_seed, bench_eager, bench_out);
    if (app.got_subcommand(render)) return cmd_render(render_o, trace_file);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
