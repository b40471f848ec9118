#include "etamp/ff.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <unordered_map>

namespace etamp {

namespace {

bool is_banned(const FfConfig& cfg, uint32_t action) {
  return std::binary_search(cfg.banned.begin(), cfg.banned.end(), action);
}

bool goal_neg_ok(const State& s, const Goal& goal) {
  for (uint32_t a : goal.neg)
    if (s.contains(a)) return false;
  return true;
}

}  // namespace

FfPlanner::FfPlanner(const GroundTask& task) : m_task(task) {
  m_precon_index.resize(task.atoms.size());
  for (const auto& a : task.actions) {
    if (a.precon_pos.empty())
      m_no_precon.push_back(a.id);
    else
      for (uint32_t atom : a.precon_pos) m_precon_index[atom].push_back(a.id);
  }
}

Rpg FfPlanner::build_rpg(const State& s, const Goal& goal, const FfConfig& cfg) const {
  Rpg rpg;
  rpg.fact_layer.assign(m_task.atoms.size(), -1);
  rpg.action_layer.assign(m_task.actions.size(), -1);

  std::vector<uint32_t> pending(m_task.actions.size());
  for (const auto& a : m_task.actions) pending[a.id] = static_cast<uint32_t>(a.precon_pos.size());

  auto goal_present = [&]() {
    for (uint32_t g : goal.pos)
      if (rpg.fact_layer[g] < 0) return false;
    return true;
  };

  std::vector<uint32_t> new_facts;
  for (uint32_t atom : s.true_atoms) {
    rpg.fact_layer[atom] = 0;
    new_facts.push_back(atom);
  }

  std::vector<uint32_t> scheduled;  // actions becoming applicable this layer
  for (uint32_t a : m_no_precon)
    if (!is_banned(cfg, a)) scheduled.push_back(a);

  for (int32_t layer = 0;; ++layer) {
    if (goal_present()) {
      rpg.goal_layer = layer;
      rpg.goal_reachable = true;
      return rpg;
    }
    for (uint32_t atom : new_facts)
      for (uint32_t aid : m_precon_index[atom]) {
        if (is_banned(cfg, aid)) continue;
        if (--pending[aid] == 0 && rpg.action_layer[aid] < 0) scheduled.push_back(aid);
      }
    new_facts.clear();
    if (scheduled.empty()) return rpg;  // fixpoint, goal unreachable
    for (uint32_t aid : scheduled) {
      rpg.action_layer[aid] = layer;
      for (uint32_t add : m_task.actions[aid].add)
        if (rpg.fact_layer[add] < 0) {
          rpg.fact_layer[add] = layer + 1;
          new_facts.push_back(add);
        }
    }
    scheduled.clear();
  }
}

std::optional<RelaxedPlan> FfPlanner::extract_relaxed_plan(const Rpg& rpg, const State& s,
                                                           const Goal& goal,
                                                           const FfConfig& cfg) const {
  if (!rpg.goal_reachable) return std::nullopt;
  const int32_t m = rpg.goal_layer;

  RelaxedPlan rp;
  rp.layers.assign(static_cast<size_t>(m), {});
  if (m == 0) return rp;

  // subgoals per fact layer; NOOP-first: each subgoal is pushed to its first layer
  std::vector<std::vector<uint32_t>> goals_at(static_cast<size_t>(m) + 1);
  std::vector<std::vector<bool>> queued(static_cast<size_t>(m) + 1,
                                        std::vector<bool>(m_task.atoms.size(), false));
  std::vector<std::vector<bool>> achieved = queued;

  for (uint32_t g : goal.pos) {
    int32_t l = rpg.fact_layer[g];
    if (l > 0 && !queued[l][g]) {
      queued[l][g] = true;
      goals_at[l].push_back(g);
    }
  }

  auto difficulty = [&](uint32_t aid) {
    int64_t d = 0;
    for (uint32_t p : m_task.actions[aid].precon_pos) d += rpg.fact_layer[p];
    return d;
  };

  for (int32_t t = m; t >= 1; --t) {
    std::sort(goals_at[t].begin(), goals_at[t].end());
    for (size_t gi = 0; gi < goals_at[t].size(); ++gi) {
      uint32_t g = goals_at[t][gi];
      if (achieved[t][g]) continue;
      // achiever at the earliest action layer; ties by difficulty, then id
      int64_t best_diff = 0;
      int32_t best_layer = -1;
      uint32_t best = 0;
      bool found = false;
      for (const auto& a : m_task.actions) {
        if (is_banned(cfg, a.id)) continue;
        if (rpg.action_layer[a.id] < 0 || rpg.action_layer[a.id] >= t) continue;
        if (!std::binary_search(a.add.begin(), a.add.end(), g)) continue;
        int64_t d = difficulty(a.id);
        if (!found || rpg.action_layer[a.id] < best_layer ||
            (rpg.action_layer[a.id] == best_layer && d < best_diff)) {
          found = true;
          best = a.id;
          best_layer = rpg.action_layer[a.id];
          best_diff = d;
        }
      }
      if (!found) return std::nullopt;  // cannot happen on a sound rpg

      auto& layer_actions = rp.layers[static_cast<size_t>(t) - 1];
      if (std::find(layer_actions.begin(), layer_actions.end(), best) == layer_actions.end())
        layer_actions.push_back(best);

      // achiever's preconditions become subgoals at their own first layers (< t)
      for (uint32_t p : m_task.actions[best].precon_pos) {
        int32_t l = rpg.fact_layer[p];
        if (l > 0 && !achieved[l][p] && !queued[l][p]) {
          queued[l][p] = true;
          goals_at[l].push_back(p);
        }
      }
      // adds support strictly later steps only; same-layer support could be
      // circular (an action feeding its own precondition), which would break
      // sequential validity and the h >= h_max bound
      for (uint32_t f : m_task.actions[best].add) achieved[t][f] = true;
    }
  }

  for (auto& layer : rp.layers) {
    std::sort(layer.begin(), layer.end());
    rp.h_value += static_cast<int>(layer.size());
  }

  // helpful: applicable actions achieving a layer-1 subgoal
  if (!goals_at[1].empty()) {
    std::vector<bool> is_goal1(m_task.atoms.size(), false);
    for (uint32_t g : goals_at[1]) is_goal1[g] = true;
    for (const auto& a : m_task.actions) {
      if (is_banned(cfg, a.id)) continue;
      if (!applicable(s, a)) continue;
      for (uint32_t f : a.add)
        if (is_goal1[f]) {
          rp.helpful.push_back(a.id);
          break;
        }
    }
  }
  return rp;
}

std::optional<RelaxedPlan> FfPlanner::evaluate(const State& s, const Goal& goal,
                                               const FfConfig& cfg) const {
  if (cfg.stats) ++cfg.stats->evaluations;
  Rpg rpg = build_rpg(s, goal, cfg);
  std::optional<RelaxedPlan> rp = extract_relaxed_plan(rpg, s, goal, cfg);
  if (!rp) return std::nullopt;
  if (cfg.on_evaluate) cfg.on_evaluate(s, *rp);
  if (rp->h_value == 0 && !goal_neg_ok(s, goal)) {
    // positive goals hold but a negative goal is violated: not a goal state
    rp->h_value = 1;
    for (const auto& a : m_task.actions) {
      if (is_banned(cfg, a.id) || !applicable(s, a)) continue;
      for (uint32_t d : a.del)
        if (std::binary_search(goal.neg.begin(), goal.neg.end(), d) && s.contains(d)) {
          rp->helpful.push_back(a.id);
          break;
        }
    }
    std::sort(rp->helpful.begin(), rp->helpful.end());
    rp->helpful.erase(std::unique(rp->helpful.begin(), rp->helpful.end()), rp->helpful.end());
  }
  return rp;
}

EhcResult FfPlanner::ehc(const State& s0, const Goal& goal, const FfConfig& cfg) const {
  Plan plan;
  plan.states.push_back(s0);

  std::optional<RelaxedPlan> rp = evaluate(s0, goal, cfg);
  if (!rp) return DeadEnd{};
  int h_cur = rp->h_value;
  std::vector<uint32_t> helpful_cur = rp->helpful;

  while (h_cur > 0) {
    struct BfsNode {
      State s;
      std::vector<uint32_t> path;
      std::vector<uint32_t> helpful;
    };
    std::deque<BfsNode> queue;
    std::unordered_map<State, bool, StateHash> visited;
    const State& current = plan.states.back();
    visited.emplace(current, true);
    queue.push_back({current, {}, helpful_cur});

    bool improved = false;
    size_t expansions = 0;
    while (!queue.empty() && !improved) {
      BfsNode node = std::move(queue.front());
      queue.pop_front();
      if (expansions++ >= cfg.ehc_cap) break;
      if (cfg.stats) ++cfg.stats->expansions;
      for (uint32_t aid : node.helpful) {
        State next = apply(node.s, m_task.actions[aid]);
        if (visited.count(next)) continue;
        visited.emplace(next, true);
        std::optional<RelaxedPlan> rp_next = evaluate(next, goal, cfg);
        if (!rp_next) continue;
        std::vector<uint32_t> path = node.path;
        path.push_back(aid);
        if (rp_next->h_value < h_cur) {
          for (uint32_t step : path) {
            plan.actions.push_back(step);
            plan.states.push_back(apply(plan.states.back(), m_task.actions[step]));
          }
          h_cur = rp_next->h_value;
          helpful_cur = rp_next->helpful;
          improved = true;
          break;
        }
        queue.push_back({std::move(next), std::move(path), std::move(rp_next->helpful)});
      }
    }
    if (!improved) return DeadEnd{};
  }
  return plan;
}

PlanResult FfPlanner::best_first(const State& s0, const Goal& goal, const FfConfig& cfg) const {
  std::optional<RelaxedPlan> rp0 = evaluate(s0, goal, cfg);
  if (!rp0) return Unsolvable{};
  if (rp0->h_value == 0) {
    Plan plan;
    plan.states.push_back(s0);
    return plan;
  }

  struct Node {
    State s;
    int64_t parent;
    uint32_t action;
  };
  std::vector<Node> nodes;
  nodes.push_back({s0, -1, 0});
  std::unordered_map<State, size_t, StateHash> seen;
  seen.emplace(s0, 0);

  using Entry = std::tuple<int, uint64_t, size_t>;  // (h, insertion seq, node)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  uint64_t seq = 0;
  open.emplace(rp0->h_value, seq++, 0);

  auto reconstruct = [&](size_t leaf) {
    std::vector<uint32_t> actions;
    for (int64_t i = static_cast<int64_t>(leaf); nodes[i].parent >= 0; i = nodes[i].parent)
      actions.push_back(nodes[i].action);
    std::reverse(actions.begin(), actions.end());
    Plan plan;
    plan.states.push_back(s0);
    for (uint32_t a : actions) {
      plan.actions.push_back(a);
      plan.states.push_back(apply(plan.states.back(), m_task.actions[a]));
    }
    return plan;
  };

  size_t expansions = 0;
  while (!open.empty()) {
    auto [h, _, idx] = open.top();
    open.pop();
    if (expansions++ >= cfg.best_first_cap) return Unsolvable{};
    if (cfg.stats) ++cfg.stats->expansions;
    State s = nodes[idx].s;  // copy: nodes may reallocate below
    for (const auto& a : m_task.actions) {
      if (is_banned(cfg, a.id) || !applicable(s, a)) continue;
      State next = apply(s, a);
      if (seen.count(next)) continue;
      std::optional<RelaxedPlan> rp = evaluate(next, goal, cfg);
      size_t nid = nodes.size();
      nodes.push_back({next, static_cast<int64_t>(idx), a.id});
      seen.emplace(std::move(next), nid);
      if (!rp) continue;
      if (rp->h_value == 0) return reconstruct(nid);
      open.emplace(rp->h_value, seq++, nid);
    }
  }
  return Unsolvable{};
}

PlanResult FfPlanner::plan(const State& s0, const Goal& goal, const FfConfig& cfg) const {
  EhcResult r = ehc(s0, goal, cfg);
  if (auto* p = std::get_if<Plan>(&r)) {
    if (plan_valid(*p, s0, goal, m_task)) return std::move(*p);
  }
  return best_first(s0, goal, cfg);
}

bool plan_valid(const Plan& p, const State& s0, const Goal& goal, const GroundTask& task) {
  if (p.states.size() != p.actions.size() + 1) return false;
  if (!(p.states.front() == s0)) return false;
  for (size_t i = 0; i < p.actions.size(); ++i) {
    const GroundAction& a = task.actions[p.actions[i]];
    if (!applicable(p.states[i], a)) return false;
    if (!(apply(p.states[i], a) == p.states[i + 1])) return false;
  }
  return GroundTask::goal_satisfied(p.states.back(), goal);
}

Rpg build_rpg(const State& s, const GroundTask& task) {
  return FfPlanner(task).build_rpg(s, task.goal);
}

std::optional<RelaxedPlan> extract_relaxed_plan(const Rpg& rpg, const State& s,
                                                const GroundTask& task) {
  return FfPlanner(task).extract_relaxed_plan(rpg, s, task.goal);
}

EhcResult ehc(const GroundTask& task, const FfConfig& cfg) {
  return FfPlanner(task).ehc(task.init, task.goal, cfg);
}

PlanResult best_first(const GroundTask& task, const FfConfig& cfg) {
  return FfPlanner(task).best_first(task.init, task.goal, cfg);
}

PlanResult tp(const State& s0, const Goal& goal, const GroundTask& task, const FfConfig& cfg) {
  return FfPlanner(task).plan(s0, goal, cfg);
}

}  // namespace etamp
