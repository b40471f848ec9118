#include "etamp/kpiece.hpp"

#include <algorithm>
#include <map>

namespace etamp {

namespace {

struct Cell {
  std::vector<int> motions;
  double coverage = 0.0;
  int selections = 0;
  double score = 1.0;
  bool interior = false;
};

using CellKey = std::pair<int64_t, int64_t>;

struct Grid {
  double cell_m;
  std::map<CellKey, Cell> cells;  // ordered: deterministic tie-breaking

  CellKey key_of(const Config& q) const {
    return {static_cast<int64_t>(std::floor(q.x / cell_m)),
            static_cast<int64_t>(std::floor(q.y / cell_m))};
  }

  Cell& add_motion(const Config& q, int node, double edge_len) {
    CellKey k = key_of(q);
    auto [it, created] = cells.try_emplace(k);
    it->second.motions.push_back(node);
    it->second.coverage += edge_len;
    if (created) refresh_interior_around(k);
    return it->second;
  }

  // interior <=> all 4 neighbors instantiated
  void refresh_interior_around(const CellKey& k) {
    const CellKey neighborhood[5] = {
        k, {k.first - 1, k.second}, {k.first + 1, k.second},
        {k.first, k.second - 1}, {k.first, k.second + 1}};
    for (const CellKey& c : neighborhood) {
      auto it = cells.find(c);
      if (it == cells.end()) continue;
      bool interior = true;
      for (const CellKey& n : {CellKey{c.first - 1, c.second}, CellKey{c.first + 1, c.second},
                               CellKey{c.first, c.second - 1}, CellKey{c.first, c.second + 1}})
        if (!cells.count(n)) {
          interior = false;
          break;
        }
      it->second.interior = interior;
    }
  }

  // highest importance within the class; exterior class used with probability
  // exterior_bias (falls through when the class is empty)
  Cell* select(bool want_exterior) {
    Cell* best = nullptr;
    double best_imp = -1.0;
    bool have_class = false;
    for (auto& [k, cell] : cells)
      if (cell.interior != want_exterior) {
        have_class = true;
        break;
      }
    for (auto& [k, cell] : cells) {
      if (have_class && cell.interior == want_exterior) continue;
      double imp = cell.score / ((1.0 + cell.selections) * (1.0 + cell.coverage));
      if (imp > best_imp) {
        best_imp = imp;
        best = &cell;
      }
    }
    return best;
  }
};

std::vector<Config> shortcut_pass(std::vector<Config> pts, const WorldState& w, double step,
                                  CheckCounters* counters) {
  for (int pass = 0; pass < 3 && pts.size() > 2; ++pass) {
    bool changed = false;
    std::vector<Config> out;
    out.push_back(pts.front());
    size_t i = 0;
    while (i + 1 < pts.size()) {
      size_t j = pts.size() - 1;
      while (j > i + 1 && !segment_status(pts[i], pts[j], w, step, counters).clear()) --j;
      if (j > i + 1) changed = true;
      out.push_back(pts[j]);
      i = j;
    }
    pts = std::move(out);
    if (!changed) break;
  }
  return pts;
}

}  // namespace

MotionResult plan_motion(const Config& start, const GoalSpec& goal, const WorldState& w,
                         const PlannerConfig& cfg, CheckCounters* counters, PlanDebug* debug) {
  if (!collision_free(start, w, counters).clear()) return StartInvalid{};

  auto finish = [&](std::vector<Config> pts) -> MotionPath {
    if (cfg.shortcut) pts = shortcut_pass(std::move(pts), w, cfg.check_step_m, counters);
    MotionPath path = time_parameterize(pts, w.robot, 0.0);
    path.status = PathStatus::Lazy;
    return path;
  };

  if (goal.reached(start)) return finish({start});

  struct Node {
    Config q;
    int parent;
  };
  std::vector<Node> nodes;
  nodes.push_back({start, -1});

  Grid grid{cfg.cell_m, {}};
  grid.add_motion(start, 0, 0.0);

  std::mt19937_64 rng(cfg.seed);
  int result_node = -1;

  int iter = 0;
  for (; iter < cfg.max_iters && result_node < 0; ++iter) {
    bool want_exterior = uniform01(rng) < cfg.exterior_bias;
    Cell* cell = grid.select(want_exterior);
    ++cell->selections;

    int node_idx = cell->motions[static_cast<size_t>(uniform01(rng) * cell->motions.size()) %
                                 cell->motions.size()];
    const Config from = nodes[node_idx].q;

    Config target;
    if (uniform01(rng) < cfg.goal_bias) {
      target = goal.target;
    } else {
      target = Config(uniform_range(rng, w.bounds.lo.x, w.bounds.hi.x),
                      uniform_range(rng, w.bounds.lo.y, w.bounds.hi.y),
                      uniform_range(rng, -M_PI, M_PI));
    }
    double dist = (target.pos() - from.pos()).norm();
    if (dist < 1e-9) {
      cell->score *= 0.5;
      continue;
    }
    double step = std::max(uniform01(rng) * cfg.step_m, 1e-3);
    step = std::min(step, dist);
    Config next = interpolate(from, target, step / dist);

    if (!collision_free(next, w, counters).clear()) {
      cell->score *= 0.5;
      continue;
    }
    if (cfg.eager && !segment_status(from, next, w, cfg.check_step_m, counters).clear()) {
      cell->score *= 0.5;
      continue;
    }
    int new_idx = static_cast<int>(nodes.size());
    nodes.push_back({next, node_idx});
    grid.add_motion(next, new_idx, step);
    // goal nodes must clear an extra margin so the arriving sweep and the
    // next edge's start sample cannot graze an obstacle between samples
    if (goal.reached(next) && collision_free(next, w, counters, cfg.check_step_m).clear())
      result_node = new_idx;
  }

  if (debug) {
    debug->iterations = iter;
    for (const auto& n : nodes) debug->tree.push_back(n.q);
    for (const auto& [k, cell] : grid.cells)
      debug->cells.push_back({k.first, k.second, static_cast<int>(cell.motions.size()),
                              cell.coverage, cell.selections, cell.score, cell.interior});
  }
  if (result_node < 0) return NoPath{};

  std::vector<Config> branch;
  for (int i = result_node; i >= 0; i = nodes[i].parent) branch.push_back(nodes[i].q);
  std::reverse(branch.begin(), branch.end());
  return finish(std::move(branch));
}

ValidateResult validate(MotionPath& path, const WorldState& w, double check_step_m,
                        CheckCounters* counters) {
  for (size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
    SegmentHit hit =
        segment_status(path.waypoints[i].q, path.waypoints[i + 1].q, w, check_step_m, counters);
    if (!hit.clear()) {
      path.status = PathStatus::Invalid;
      path.invalid_kind = hit.kind;
      path.invalid_id = hit.id;
      path.invalid_segment = static_cast<int>(i);
      return {false, hit.kind, hit.id, static_cast<int>(i), hit.s};
    }
  }
  if (path.waypoints.size() == 1) {
    CollisionResult hit = collision_free(path.waypoints[0].q, w, counters);
    if (!hit.clear()) {
      path.status = PathStatus::Invalid;
      path.invalid_kind = hit.kind;
      path.invalid_id = hit.id;
      path.invalid_segment = 0;
      return {false, hit.kind, hit.id, 0, 0.0};
    }
  }
  path.status = PathStatus::Valid;
  return {true, HitKind::None, "", -1, 0.0};
}

}  // namespace etamp
