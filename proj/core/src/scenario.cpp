#include "etamp/scenario.hpp"

#include <filesystem>
#include <sstream>

#include "etamp/ground.hpp"

namespace etamp {

namespace {

std::string resolve(const std::string& base_file, const std::string& rel) {
  std::filesystem::path p(rel);
  if (p.is_absolute()) return rel;
  return (std::filesystem::path(base_file).parent_path() / p).string();
}

WorldOverride world_override_from_json(const nlohmann::json& j, const std::string& filename) {
  WorldOverride o;
  if (j.contains("held")) {
    o.held = j.at("held").is_null() ? std::string() : j.at("held").get<std::string>();
  }
  if (j.contains("move")) {
    for (const auto& e : j.at("move")) {
      o.move_objects.emplace_back(e.at("id").get<std::string>(),
                                  config_from_json(e.at("pose"), filename));
    }
  }
  if (j.contains("add")) {
    for (const auto& e : j.at("add")) o.add_objects.push_back(movable_from_json(e, filename));
  }
  return o;
}

void read_planner(const nlohmann::json& j, PlannerConfig& p) {
  if (j.contains("cell_m")) p.cell_m = j.at("cell_m").get<double>();
  if (j.contains("step_m")) p.step_m = j.at("step_m").get<double>();
  if (j.contains("goal_bias")) p.goal_bias = j.at("goal_bias").get<double>();
  if (j.contains("exterior_bias")) p.exterior_bias = j.at("exterior_bias").get<double>();
  if (j.contains("max_iters")) p.max_iters = j.at("max_iters").get<int>();
  if (j.contains("seed")) p.seed = j.at("seed").get<uint64_t>();
  if (j.contains("goal_tol_xy")) p.goal_tol_xy = j.at("goal_tol_xy").get<double>();
  if (j.contains("goal_tol_theta")) p.goal_tol_theta = j.at("goal_tol_theta").get<double>();
  if (j.contains("check_step_m")) p.check_step_m = j.at("check_step_m").get<double>();
}

void read_engine(const nlohmann::json& j, EngineConfig& e) {
  if (j.contains("max_attempts")) e.max_attempts = j.at("max_attempts").get<int>();
  if (j.contains("placement_candidates"))
    e.placement_candidates = j.at("placement_candidates").get<int>();
  if (j.contains("placement_radius")) e.placement_radius = j.at("placement_radius").get<double>();
  if (j.contains("gripper_width")) e.gripper_width = j.at("gripper_width").get<double>();
  if (j.contains("edge_retries")) e.edge_retries = j.at("edge_retries").get<int>();
  if (j.contains("validate_step_m")) e.validate_step_m = j.at("validate_step_m").get<double>();
}

}  // namespace

uint32_t parse_atom(const std::string& text, const GroundTask& task,
                    const std::string& filename) {
  std::string body = text;
  auto l = body.find('(');
  auto r = body.rfind(')');
  if (l != std::string::npos && r != std::string::npos && r > l) {
    body = body.substr(l + 1, r - l - 1);
  }
  std::istringstream ss(body);
  std::string pred;
  ss >> pred;
  std::vector<std::string> args;
  std::string a;
  while (ss >> a) args.push_back(a);
  if (pred.empty()) {
    throw ParseError(DiagKind::SyntaxError, filename, 0, 0, "empty atom: " + text);
  }
  auto id = task.atom_id(pred, args);
  if (!id) {
    throw ParseError(DiagKind::UndeclaredSymbol, filename, 0, 0,
                     "atom not in ground task: " + text);
  }
  return *id;
}

Scenario scenario_from_json(const nlohmann::json& j, const std::string& filename) {
  auto fail = [&](const std::string& msg) {
    throw ParseError(DiagKind::SyntaxError, filename, 0, 0, msg);
  };
  for (const char* key : {"domain", "problem", "world"}) {
    if (!j.contains(key)) fail(std::string("scenario needs \"") + key + "\"");
  }

  Scenario sc;
  sc.name = std::filesystem::path(filename).stem().string();
  sc.domain = parse_domain_file(resolve(filename, j.at("domain").get<std::string>()));
  sc.problem =
      parse_problem_file(resolve(filename, j.at("problem").get<std::string>()), sc.domain);
  sc.task = ground(sc.domain, sc.problem);
  sc.world = load_world_file(resolve(filename, j.at("world").get<std::string>()));
  if (j.contains("timeline")) {
    sc.timeline = load_timeline(resolve(filename, j.at("timeline").get<std::string>()));
  }

  if (j.contains("seed")) sc.engine.motion.seed = j.at("seed").get<uint64_t>();
  if (j.contains("planner")) read_planner(j.at("planner"), sc.engine.motion);
  if (j.contains("engine")) read_engine(j.at("engine"), sc.engine);

  // every symbolic location a move can target needs geometry
  for (const GroundAction& a : sc.task.actions) {
    if (a.name != "move_base") continue;
    for (const auto& arg : a.args) {
      if (!sc.world.anchors.count(arg) && !sc.world.find_movable(arg)) {
        throw ParseError(DiagKind::UndeclaredSymbol, filename, 0, 0,
                         "no anchor for location symbol: " + arg);
      }
    }
  }

  if (j.contains("contingencies")) {
    for (const auto& jc : j.at("contingencies")) {
      Contingency c;
      if (jc.contains("add")) {
        for (const auto& s : jc.at("add"))
          c.add.push_back(parse_atom(s.get<std::string>(), sc.task, filename));
      }
      if (jc.contains("remove")) {
        for (const auto& s : jc.at("remove"))
          c.remove.push_back(parse_atom(s.get<std::string>(), sc.task, filename));
      }
      if (jc.contains("world")) c.world = world_override_from_json(jc.at("world"), filename);
      sc.contingencies.push_back(std::move(c));
    }
  }

  if (j.contains("runtime")) {
    const auto& jr = j.at("runtime");
    std::vector<uint32_t> add, remove;
    if (jr.contains("add")) {
      for (const auto& s : jr.at("add"))
        add.push_back(parse_atom(s.get<std::string>(), sc.task, filename));
    }
    if (jr.contains("remove")) {
      for (const auto& s : jr.at("remove"))
        remove.push_back(parse_atom(s.get<std::string>(), sc.task, filename));
    }
    if (!add.empty() || !remove.empty()) {
      sc.runtime_state = override_state(sc.task.init, add, remove);
    }
    if (jr.contains("world")) {
      sc.runtime_world = world_override_from_json(jr.at("world"), filename);
    }
  }

  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::string text = read_text_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(DiagKind::SyntaxError, path, 0, 0, e.what());
  }
  return scenario_from_json(j, path);
}

}  // namespace etamp
