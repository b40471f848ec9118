#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "etamp/pddl.hpp"
#include "nlohmann/json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = ETAMP_CLI_PATH;
const std::string kFix = ETAMP_FIXTURE_DIR;
const fs::path kScratch = "cli_scratch";

const bool kScratchCleared = [] {
  std::error_code ec;
  fs::remove_all(kScratch, ec);
  fs::create_directories(kScratch);
  return true;
}();

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  os << text;
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path dir = kScratch / ("io" + std::to_string(counter++));
  fs::create_directories(dir);
  fs::path so = dir / "stdout.txt";
  fs::path se = dir / "stderr.txt";
  std::string cmd = "\"" + kCli + "\" " + args + " >" + so.string() + " 2>" + se.string();
  int rc = std::system(cmd.c_str());
  CliResult r;
  if (rc != -1 && WIFEXITED(rc)) r.code = WEXITSTATUS(rc);
  r.out = slurp(so);
  r.err = slurp(se);
  return r;
}

std::string out_dir(const std::string& tag) { return (kScratch / tag).string(); }

std::vector<nlohmann::json> parse_jsonl(const std::string& text) {
  std::vector<nlohmann::json> rows;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty()) rows.push_back(nlohmann::json::parse(line));
  }
  return rows;
}

double parse_cstar(const std::string& stdout_text) {
  double v = -1.0;
  REQUIRE(std::sscanf(stdout_text.c_str(), "c* = %lf", &v) == 1);
  return v;
}

}  // namespace

TEST_CASE("usage problems exit 1 and help exits 0") {
  REQUIRE(kScratchCleared);
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("--help").out.find("bench") != std::string::npos);
  CHECK(run_cli("plan --help").code == 0);

  CHECK(run_cli("").code == 1);                // a subcommand is required
  CHECK(run_cli("plan").code == 1);            // --scenario is required
  CHECK(run_cli("frobnicate").code == 1);      // unknown subcommand
  CHECK(run_cli("plan --scenario " + kFix + "/corridor/fast.scenario.json --bogus").code == 1);
}

TEST_CASE("input errors exit 1 with a diagnostic") {
  CliResult r = run_cli("plan --scenario " + (kScratch / "missing.json").string());
  CHECK(r.code == 1);
  CHECK(!r.err.empty());

  spit(kScratch / "bad" / "broken.json", "{ not json");
  r = run_cli("plan --scenario " + (kScratch / "bad" / "broken.json").string());
  CHECK(r.code == 1);
  CHECK(!r.err.empty());

  r = run_cli("render --scenario " + kFix + "/corridor/fast.scenario.json --trace " +
              (kScratch / "bad" / "missing_trace.jsonl").string() + " --out " +
              out_dir("render_bad"));
  CHECK(r.code == 1);
}

TEST_CASE("plan matches the oracle costs stored beside the corridor fixtures") {
  nlohmann::json expected = nlohmann::json::parse(slurp(kFix + "/corridor/expected.json"));

  std::string fast_out = out_dir("plan_fast");
  CliResult fast = run_cli("plan --scenario " + kFix + "/corridor/fast.scenario.json --out " +
                           fast_out);
  REQUIRE(fast.code == 0);
  double c_fast = parse_cstar(fast.out);
  double want_fast = expected.at("fast").at("c_star").get<double>();
  CHECK(std::fabs(c_fast - want_fast) <= 0.05 * want_fast);

  std::string slow_out = out_dir("plan_slow");
  CliResult slow = run_cli("plan --scenario " + kFix + "/corridor/slow.scenario.json --out " +
                           slow_out);
  REQUIRE(slow.code == 0);
  double c_slow = parse_cstar(slow.out);
  double want_slow = expected.at("slow").at("c_star").get<double>();
  CHECK(std::fabs(c_slow - want_slow) <= 0.05 * want_slow);

  // dump contract: header then one edge per action, schema-versioned
  for (const std::string& dir : {fast_out, slow_out}) {
    CHECK(fs::exists(fs::path(dir) / "engine_trace.jsonl"));
    CHECK(fs::exists(fs::path(dir) / "rgraph.jsonl"));
    std::vector<nlohmann::json> rows = parse_jsonl(slurp(fs::path(dir) / "incumbent.jsonl"));
    REQUIRE(!rows.empty());
    CHECK(rows[0].at("type") == "incumbent");
    CHECK(rows[0].at("v") == 1);
    CHECK(rows[0].at("len").get<size_t>() == rows.size() - 1);
    for (size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].at("type") == "edge");
      CHECK(rows[i].at("index").get<size_t>() == i - 1);
      CHECK(rows[i].at("waypoints").size() >= 2);
    }
  }

  // the two parameterizations choose different strategies
  auto has_pick = [](const std::string& dir) {
    for (const nlohmann::json& row : parse_jsonl(slurp(fs::path(dir) / "incumbent.jsonl"))) {
      if (row.at("type") == "edge" &&
          row.at("action").get<std::string>().find("pick") != std::string::npos) {
        return true;
      }
    }
    return false;
  };
  CHECK(has_pick(fast_out));
  CHECK(!has_pick(slow_out));
  CHECK(expected.at("fast").at("strategy") == "relocate");
  CHECK(expected.at("slow").at("strategy") == "detour");
}

TEST_CASE("plan --task-only prints the symbolic plan") {
  CliResult r = run_cli("plan --task-only --scenario " + kFix +
                        "/corridor/fast.scenario.json --out " + out_dir("task_only"));
  CHECK(r.code == 0);
  CHECK(r.out.find("(move_base") != std::string::npos);
  CHECK(r.out.find("plan length = ") != std::string::npos);
}

TEST_CASE("a goal already satisfied reports zero cost") {
  spit(kScratch / "trivial" / "problem.pddl", R"((define (problem noop)
  (:domain mobile-manip)
  (:objects startp - place)
  (:init (robot-at startp))
  (:goal (and (robot-at startp)))))");
  nlohmann::json sc{{"domain", kFix + "/manip/domain.pddl"},
                    {"problem", "problem.pddl"},
                    {"world", kFix + "/corridor/world_fast.json"}};
  spit(kScratch / "trivial" / "sc.json", sc.dump());

  CliResult r = run_cli("plan --scenario " + (kScratch / "trivial" / "sc.json").string() +
                        " --out " + out_dir("trivial"));
  CHECK(r.code == 0);
  CHECK(r.out == "c* = 0.000\n");
}

TEST_CASE("an unsolvable task exits 2") {
  spit(kScratch / "unsat" / "problem.pddl", R"((define (problem stuck)
  (:domain mobile-manip)
  (:objects startp goalp - place)
  (:init (robot-at startp) (linked startp goalp))
  (:goal (and (robot-at startp) (not (robot-at startp))))))");
  nlohmann::json sc{{"domain", kFix + "/manip/domain.pddl"},
                    {"problem", "problem.pddl"},
                    {"world", kFix + "/corridor/world_fast.json"}};
  spit(kScratch / "unsat" / "sc.json", sc.dump());

  CliResult r = run_cli("plan --scenario " + (kScratch / "unsat" / "sc.json").string() +
                        " --out " + out_dir("unsat"));
  CHECK(r.code == 2);
  CHECK(r.out.find("unsolvable task") != std::string::npos);
}

TEST_CASE("the seed flag overrides the scenario seed") {
  std::string with_flag = out_dir("seed_flag");
  REQUIRE(run_cli("plan --scenario " + kFix + "/corridor/fast.scenario.json --seed 7 --out " +
                  with_flag)
              .code == 0);
  std::vector<nlohmann::json> t1 = parse_jsonl(slurp(fs::path(with_flag) / "engine_trace.jsonl"));
  REQUIRE(!t1.empty());
  CHECK(t1[0].at("type") == "tmp_start");
  CHECK(t1[0].at("seed") == 7);

  std::string no_flag = out_dir("seed_file");
  REQUIRE(run_cli("plan --scenario " + kFix + "/corridor/fast.scenario.json --out " + no_flag)
              .code == 0);
  std::vector<nlohmann::json> t2 = parse_jsonl(slurp(fs::path(no_flag) / "engine_trace.jsonl"));
  REQUIRE(!t2.empty());
  CHECK(t2[0].at("seed") == 1);
}

TEST_CASE("consecutive runs produce byte-identical outputs") {
  std::string a = out_dir("det_a");
  std::string b = out_dir("det_b");
  REQUIRE(run_cli("plan --scenario " + kFix + "/corridor/fast.scenario.json --out " + a).code ==
          0);
  REQUIRE(run_cli("plan --scenario " + kFix + "/corridor/fast.scenario.json --out " + b).code ==
          0);
  for (const char* f : {"engine_trace.jsonl", "incumbent.jsonl", "rgraph.jsonl"}) {
    std::string fa = slurp(fs::path(a) / f);
    CHECK(!fa.empty());
    CHECK(fa == slurp(fs::path(b) / f));
  }

  std::string ra = out_dir("render_a");
  std::string rb = out_dir("render_b");
  std::string base = "render --scenario " + kFix + "/corridor/fast.scenario.json --trace " +
                     (fs::path(a) / "incumbent.jsonl").string() + " --out ";
  REQUIRE(run_cli(base + ra).code == 0);
  REQUIRE(run_cli(base + rb).code == 0);
  std::string svg = slurp(fs::path(ra) / "scene.svg");
  CHECK(svg == slurp(fs::path(rb) / "scene.svg"));
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("<polyline") != std::string::npos);  // overlaid route
  CHECK(svg.find(">box1<") != std::string::npos);     // movable label

  // without a trace overlay there is no polyline
  std::string rp = out_dir("render_plain");
  REQUIRE(run_cli("render --scenario " + kFix + "/corridor/fast.scenario.json --out " + rp)
              .code == 0);
  std::string plain = slurp(fs::path(rp) / "scene.svg");
  CHECK(plain.find("<polyline") == std::string::npos);
  CHECK(plain.find("<polygon") != std::string::npos);  // statics still drawn
}

TEST_CASE("run executes the timeline and maps outcome to the exit code") {
  std::string ok_out = out_dir("run_onroute");
  CliResult ok = run_cli("run --scenario " + kFix + "/onroute/appear.scenario.json --out " +
                         ok_out);
  CHECK(ok.code == 0);
  CHECK(ok.out.find("outcome = success") != std::string::npos);
  CHECK(ok.out.find("replans = 1") != std::string::npos);

  std::vector<nlohmann::json> trace = parse_jsonl(slurp(fs::path(ok_out) / "trace.jsonl"));
  REQUIRE(!trace.empty());
  CHECK(trace.front().at("type") == "start");
  CHECK(trace.back().at("type") == "outcome");
  for (const nlohmann::json& e : trace) CHECK(e.at("v") == 1);

  CliResult fail = run_cli("run --scenario " + kFix + "/blocked/blocked.scenario.json --out " +
                           out_dir("run_blocked"));
  CHECK(fail.code == 2);
  CHECK(fail.out.find("outcome = failure") != std::string::npos);
  CHECK(fail.out.find("replans = 3") != std::string::npos);
}

TEST_CASE("run dispatches pre-encoded branches for runtime variants") {
  CliResult main_run = run_cli("run --scenario " + kFix + "/branch/main.scenario.json --out " +
                               out_dir("run_branch_main"));
  CHECK(main_run.code == 0);
  CHECK(main_run.out.find("outcome = success") != std::string::npos);
  CHECK(main_run.out.find("replans = 0") != std::string::npos);

  CliResult holding = run_cli("run --scenario " + kFix + "/branch/holding.scenario.json --out " +
                              out_dir("run_branch_holding"));
  CHECK(holding.code == 0);
  CHECK(holding.out.find("outcome = success") != std::string::npos);
  CHECK(holding.out.find("replans = 0") != std::string::npos);
}

TEST_CASE("bench emits one deterministic CSV row per scenario and seed") {
  std::string d1 = out_dir("bench_j1");
  CliResult r1 = run_cli("bench --scenario " + kFix + "/corridor/fast.scenario.json --scenario " +
                         kFix + "/onroute/appear.scenario.json --reps 2 --seed 5 --out " + d1);
  REQUIRE(r1.code == 0);
  std::string csv = slurp(fs::path(d1) / "bench.csv");
  std::istringstream ss(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(ss, line)) lines.push_back(line);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "scenario,seed,c_star,wall_s,point_checks,segment_checks,replans");
  CHECK(lines[1].rfind("fast.scenario,5,", 0) == 0);
  CHECK(lines[2].rfind("fast.scenario,6,", 0) == 0);
  CHECK(lines[3].rfind("appear.scenario,5,", 0) == 0);
  CHECK(lines[4].rfind("appear.scenario,6,", 0) == 0);
  CHECK(csv.find("inf") == std::string::npos);

  // the onroute rows went through execution: one replan each
  for (size_t i = 3; i <= 4; ++i) {
    CHECK(lines[i].substr(lines[i].size() - 2) == ",1");
  }

  // row contents are independent of the worker count, wall time aside
  std::string d3 = out_dir("bench_j3");
  CliResult r3 = run_cli("bench --scenario " + kFix + "/corridor/fast.scenario.json --scenario " +
                         kFix + "/onroute/appear.scenario.json --reps 2 --seed 5 --jobs 3 --out " +
                         d3);
  REQUIRE(r3.code == 0);
  auto strip_wall = [](const std::string& text) {
    std::istringstream in(text);
    std::string row, out;
    while (std::getline(in, row)) {
      // blank the 4th column
      size_t c1 = row.find(',');
      size_t c2 = row.find(',', c1 + 1);
      size_t c3 = row.find(',', c2 + 1);
      size_t c4 = row.find(',', c3 + 1);
      if (c4 != std::string::npos) row = row.substr(0, c3 + 1) + "-" + row.substr(c4);
      out += row + "\n";
    }
    return out;
  };
  CHECK(strip_wall(csv) == strip_wall(slurp(fs::path(d3) / "bench.csv")));

  // an empty scenario set still yields the header
  std::string d0 = out_dir("bench_empty");
  CliResult r0 = run_cli("bench --out " + d0);
  REQUIRE(r0.code == 0);
  CHECK(slurp(fs::path(d0) / "bench.csv") ==
        "scenario,seed,c_star,wall_s,point_checks,segment_checks,replans\n");
}
