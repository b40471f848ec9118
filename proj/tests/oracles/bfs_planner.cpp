#include "oracles/bfs_planner.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace etamp::oracle {

namespace {

uint64_t to_mask(const std::vector<uint32_t>& atoms) {
  uint64_t m = 0;
  for (uint32_t a : atoms) m |= uint64_t{1} << a;
  return m;
}

}  // namespace

std::optional<std::vector<uint32_t>> bfs_plan(const GroundTask& task) {
  if (task.atoms.size() > 64) throw std::invalid_argument("bfs_plan: > 64 atoms");

  struct MaskAction {
    uint32_t id;
    uint64_t pre_pos, pre_neg, add, del;
  };
  std::vector<MaskAction> acts;
  acts.reserve(task.actions.size());
  for (const auto& a : task.actions)
    acts.push_back({a.id, to_mask(a.precon_pos), to_mask(a.precon_neg), to_mask(a.add),
                    to_mask(a.del)});

  uint64_t goal_pos = to_mask(task.goal.pos);
  uint64_t goal_neg = to_mask(task.goal.neg);
  uint64_t start = to_mask(task.init.true_atoms);

  auto is_goal = [&](uint64_t s) {
    return (s & goal_pos) == goal_pos && (s & goal_neg) == 0;
  };

  // predecessor map doubles as the visited set
  std::unordered_map<uint64_t, std::pair<uint64_t, uint32_t>> parent;
  parent.emplace(start, std::make_pair(start, UINT32_MAX));
  std::deque<uint64_t> queue{start};

  while (!queue.empty()) {
    uint64_t s = queue.front();
    queue.pop_front();
    if (is_goal(s)) {
      std::vector<uint32_t> plan;
      uint64_t cur = s;
      for (;;) {
        auto [prev, aid] = parent.at(cur);
        if (aid == UINT32_MAX) break;
        plan.push_back(aid);
        cur = prev;
      }
      std::reverse(plan.begin(), plan.end());
      return plan;
    }
    for (const auto& a : acts) {
      if ((s & a.pre_pos) != a.pre_pos || (s & a.pre_neg) != 0) continue;
      uint64_t next = (s & ~a.del) | a.add;
      if (parent.emplace(next, std::make_pair(s, a.id)).second) queue.push_back(next);
    }
  }
  return std::nullopt;
}

}  // namespace etamp::oracle
