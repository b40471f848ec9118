#include "oracles/hmax.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace etamp::oracle {

int hmax_value(const GroundTask& task, const State& s, const Goal& goal) {
  constexpr int kInf = std::numeric_limits<int>::max() / 2;
  std::vector<int> cost(task.atoms.size(), kInf);
  for (uint32_t a : s.true_atoms) cost[a] = 0;

  // Bellman-Ford style fixpoint; at most |atoms| sweeps are needed
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& a : task.actions) {
      int pre = 0;
      for (uint32_t p : a.precon_pos) pre = std::max(pre, cost[p]);
      if (pre >= kInf) continue;
      int ca = pre + 1;
      for (uint32_t f : a.add)
        if (ca < cost[f]) {
          cost[f] = ca;
          changed = true;
        }
    }
  }

  int h = 0;
  for (uint32_t g : goal.pos) {
    if (cost[g] >= kInf) return -1;
    h = std::max(h, cost[g]);
  }
  return h;
}

}  // namespace etamp::oracle
