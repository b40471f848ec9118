#ifndef ETAMP_GROUND_HPP
#define ETAMP_GROUND_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "etamp/pddl.hpp"

namespace etamp {

// Closed-world symbolic state: sorted, deduplicated atom indices.
struct State {
  std::vector<uint32_t> true_atoms;

  bool contains(uint32_t atom) const;
  bool operator==(const State&) const = default;
  bool operator<(const State& o) const { return true_atoms < o.true_atoms; }
};

struct StateHash {
  size_t operator()(const State& s) const {
    size_t h = 0x9e3779b97f4a7c15ull;
    for (uint32_t a : s.true_atoms) h = (h ^ a) * 0x100000001b3ull;
    return h;
  }
};

struct GroundAtom {
  std::string pred;
  std::vector<std::string> args;
  bool operator==(const GroundAtom&) const = default;
  bool operator<(const GroundAtom& o) const {
    if (pred != o.pred) return pred < o.pred;
    return args < o.args;
  }
  std::string str() const;
};

struct GroundAction {
  uint32_t id = 0;
  std::string name;  // schema name
  std::vector<std::string> args;
  // all sorted ascending
  std::vector<uint32_t> precon_pos;
  std::vector<uint32_t> precon_neg;
  std::vector<uint32_t> add;
  std::vector<uint32_t> del;
  std::string str() const;
};

struct Goal {
  std::vector<uint32_t> pos;  // sorted
  std::vector<uint32_t> neg;  // sorted
  bool operator==(const Goal&) const = default;
};

struct GroundTask {
  std::vector<GroundAtom> atoms;
  std::vector<GroundAction> actions;
  State init;
  Goal goal;

  std::optional<uint32_t> atom_id(const std::string& pred,
                                  const std::vector<std::string>& args) const;
  bool goal_satisfied(const State& s) const { return goal_satisfied(s, goal); }
  static bool goal_satisfied(const State& s, const Goal& g);
};

struct GroundOptions {
  bool prune_static = true;
  size_t max_actions = 1000000;
};

class GroundingExplosion : public std::runtime_error {
 public:
  explicit GroundingExplosion(size_t cap)
      : std::runtime_error("grounding exceeds action cap of " + std::to_string(cap)) {}
};

class NotApplicable : public std::logic_error {
 public:
  explicit NotApplicable(const std::string& action)
      : std::logic_error("action not applicable: " + action) {}
};

GroundTask ground(const DomainDef& d, const ProblemDef& p, const GroundOptions& opt = {});

bool applicable(const State& s, const GroundAction& a);
State apply(const State& s, const GroundAction& a);  // throws NotApplicable

// Exact-state goal: reaching `target` and nothing else. neg = complement of
// target over the atom universe.
Goal exact_state_goal(const State& target, const GroundTask& task);

}  // namespace etamp

#endif
