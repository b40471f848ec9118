#ifndef ETAMP_RGRAPH_HPP
#define ETAMP_RGRAPH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>

#include "etamp/ff.hpp"
#include "etamp/world.hpp"

namespace etamp {

class RGraphError : public std::runtime_error {
 public:
  enum class Kind { InvalidPlan, DisconnectedPlan, UnknownEdge, Cycle };
  RGraphError(Kind kind, const std::string& msg) : std::runtime_error(msg), m_kind(kind) {}
  Kind kind() const { return m_kind; }

 private:
  Kind m_kind;
};

struct RGraphEdge {
  uint32_t action = 0;
  std::optional<MotionPath> path;
  std::optional<double> effort_s;
};

// Nodes are symbolic states (deduplicated, so converging branches re-merge);
// edges carry the ground action plus motion annotations. Growth is monotone
// and acyclic: a splice that would close a cycle is rejected.
class RGraph {
 public:
  static RGraph build(const std::vector<Plan>& plans, const GroundTask& task);

  // splice p into the graph; p's first state must already be a node
  void update(const Plan& p, const GroundTask& task);
  // splice without the connectivity requirement (pre-encoded contingencies)
  void add_branch(const Plan& p, const GroundTask& task);

  // records a motion path; overwrites only with strictly lower effort
  void annotate(uint32_t parent, uint32_t child, const MotionPath& path, double effort_s);

  uint32_t root() const { return m_root; }
  size_t node_count() const { return m_states.size(); }
  size_t edge_count() const { return m_edges.size(); }
  const State& state(uint32_t node) const { return m_states.at(node); }
  std::optional<uint32_t> find_node(const State& s) const;
  const std::vector<uint32_t>& children(uint32_t node) const { return m_children.at(node); }
  const RGraphEdge& edge(uint32_t parent, uint32_t child) const;
  const RGraphEdge* find_edge(uint32_t parent, uint32_t child) const;

  const std::optional<WorldState>& geom(uint32_t node) const { return m_geom.at(node); }
  void set_geom(uint32_t node, WorldState w) { m_geom.at(node) = std::move(w); }

  void dump_jsonl(std::ostream& os, const GroundTask& task) const;

 private:
  uint32_t intern(const State& s);
  bool reaches(uint32_t from, uint32_t to) const;
  void splice(const Plan& p, const GroundTask& task);

  std::vector<State> m_states;
  std::vector<std::optional<WorldState>> m_geom;
  std::map<State, uint32_t> m_index;
  std::vector<std::vector<uint32_t>> m_children;  // insertion order
  std::map<std::pair<uint32_t, uint32_t>, RGraphEdge> m_edges;
  uint32_t m_root = 0;
};

}  // namespace etamp

#endif
