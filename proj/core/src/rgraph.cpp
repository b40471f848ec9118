#include "etamp/rgraph.hpp"

#include <algorithm>

namespace etamp {

using nlohmann::json;

uint32_t RGraph::intern(const State& s) {
  auto it = m_index.find(s);
  if (it != m_index.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(m_states.size());
  m_states.push_back(s);
  m_geom.emplace_back();
  m_children.emplace_back();
  m_index.emplace(s, id);
  return id;
}

std::optional<uint32_t> RGraph::find_node(const State& s) const {
  auto it = m_index.find(s);
  if (it == m_index.end()) return std::nullopt;
  return it->second;
}

const RGraphEdge* RGraph::find_edge(uint32_t parent, uint32_t child) const {
  auto it = m_edges.find({parent, child});
  return it == m_edges.end() ? nullptr : &it->second;
}

const RGraphEdge& RGraph::edge(uint32_t parent, uint32_t child) const {
  const RGraphEdge* e = find_edge(parent, child);
  if (!e)
    throw RGraphError(RGraphError::Kind::UnknownEdge,
                      "no edge " + std::to_string(parent) + " -> " + std::to_string(child));
  return *e;
}

bool RGraph::reaches(uint32_t from, uint32_t to) const {
  if (from == to) return true;
  std::vector<uint32_t> stack{from};
  std::vector<bool> seen(m_states.size(), false);
  seen[from] = true;
  while (!stack.empty()) {
    uint32_t u = stack.back();
    stack.pop_back();
    for (uint32_t v : m_children[u]) {
      if (v == to) return true;
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return false;
}

void RGraph::splice(const Plan& p, const GroundTask& task) {
  if (p.states.size() != p.actions.size() + 1)
    throw RGraphError(RGraphError::Kind::InvalidPlan, "malformed plan");
  for (size_t i = 0; i < p.actions.size(); ++i) {
    const GroundAction& a = task.actions.at(p.actions[i]);
    if (!applicable(p.states[i], a) || !(apply(p.states[i], a) == p.states[i + 1]))
      throw RGraphError(RGraphError::Kind::InvalidPlan,
                        "plan step " + std::to_string(i) + " (" + a.str() +
                            ") violates the apply chain");
  }
  for (size_t i = 0; i < p.actions.size(); ++i) {
    uint32_t u = intern(p.states[i]);
    std::optional<uint32_t> v_existing = find_node(p.states[i + 1]);
    if (v_existing && reaches(*v_existing, u))
      throw RGraphError(RGraphError::Kind::Cycle,
                        "edge " + std::to_string(u) + " -> " + std::to_string(*v_existing) +
                            " would close a cycle");
    uint32_t v = intern(p.states[i + 1]);
    auto [it, created] = m_edges.try_emplace({u, v});
    if (created) {
      it->second.action = p.actions[i];
      m_children[u].push_back(v);
    }
  }
  // a zero-action plan still registers its single state
  if (p.actions.empty() && !p.states.empty()) intern(p.states[0]);
}

RGraph RGraph::build(const std::vector<Plan>& plans, const GroundTask& task) {
  if (plans.empty() || plans.front().states.empty())
    throw RGraphError(RGraphError::Kind::InvalidPlan, "build requires at least one plan");
  RGraph g;
  g.m_root = g.intern(plans.front().states.front());
  for (const auto& p : plans) {
    if (!(p.states.front() == g.m_states[g.m_root]))
      throw RGraphError(RGraphError::Kind::InvalidPlan, "plans do not share an initial state");
    g.splice(p, task);
  }
  return g;
}

void RGraph::update(const Plan& p, const GroundTask& task) {
  if (p.states.empty())
    throw RGraphError(RGraphError::Kind::InvalidPlan, "empty plan");
  if (!find_node(p.states.front()))
    throw RGraphError(RGraphError::Kind::DisconnectedPlan,
                      "plan's first state is not a node of the graph");
  splice(p, task);
}

void RGraph::add_branch(const Plan& p, const GroundTask& task) {
  if (p.states.empty())
    throw RGraphError(RGraphError::Kind::InvalidPlan, "empty plan");
  splice(p, task);
}

void RGraph::annotate(uint32_t parent, uint32_t child, const MotionPath& path, double effort_s) {
  auto it = m_edges.find({parent, child});
  if (it == m_edges.end())
    throw RGraphError(RGraphError::Kind::UnknownEdge,
                      "no edge " + std::to_string(parent) + " -> " + std::to_string(child));
  if (it->second.effort_s && *it->second.effort_s <= effort_s) return;
  it->second.path = path;
  it->second.effort_s = effort_s;
}

void RGraph::dump_jsonl(std::ostream& os, const GroundTask& task) const {
  for (uint32_t id = 0; id < m_states.size(); ++id) {
    json node;
    node["type"] = "node";
    node["id"] = id;
    node["root"] = (id == m_root);
    json atoms = json::array();
    for (uint32_t a : m_states[id].true_atoms) atoms.push_back(task.atoms[a].str());
    node["atoms"] = std::move(atoms);
    os << node.dump() << "\n";
  }
  for (const auto& [key, e] : m_edges) {
    json edge;
    edge["type"] = "edge";
    edge["parent"] = key.first;
    edge["child"] = key.second;
    edge["action"] = task.actions[e.action].str();
    if (e.effort_s)
      edge["effort_s"] = *e.effort_s;
    else
      edge["effort_s"] = nullptr;
    edge["validated"] = e.path && e.path->status == PathStatus::Valid;
    os << edge.dump() << "\n";
  }
}

}  // namespace etamp
