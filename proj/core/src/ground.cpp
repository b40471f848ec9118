#include "etamp/ground.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace etamp {

bool State::contains(uint32_t atom) const {
  return std::binary_search(true_atoms.begin(), true_atoms.end(), atom);
}

std::string GroundAtom::str() const {
  std::string s = "(" + pred;
  for (const auto& a : args) s += " " + a;
  return s + ")";
}

std::string GroundAction::str() const {
  std::string s = "(" + name;
  for (const auto& a : args) s += " " + a;
  return s + ")";
}

std::optional<uint32_t> GroundTask::atom_id(const std::string& pred,
                                            const std::vector<std::string>& args) const {
  GroundAtom key{pred, args};
  auto it = std::lower_bound(atoms.begin(), atoms.end(), key);
  if (it != atoms.end() && *it == key)
    return static_cast<uint32_t>(std::distance(atoms.begin(), it));
  return std::nullopt;
}

bool GroundTask::goal_satisfied(const State& s, const Goal& g) {
  if (!std::includes(s.true_atoms.begin(), s.true_atoms.end(), g.pos.begin(), g.pos.end()))
    return false;
  for (uint32_t a : g.neg)
    if (s.contains(a)) return false;
  return true;
}

bool applicable(const State& s, const GroundAction& a) {
  if (!std::includes(s.true_atoms.begin(), s.true_atoms.end(), a.precon_pos.begin(),
                     a.precon_pos.end()))
    return false;
  for (uint32_t atom : a.precon_neg)
    if (s.contains(atom)) return false;
  return true;
}

State apply(const State& s, const GroundAction& a) {
  if (!applicable(s, a)) throw NotApplicable(a.str());
  State out;
  out.true_atoms.reserve(s.true_atoms.size() + a.add.size());
  std::set_difference(s.true_atoms.begin(), s.true_atoms.end(), a.del.begin(), a.del.end(),
                      std::back_inserter(out.true_atoms));
  std::vector<uint32_t> merged;
  merged.reserve(out.true_atoms.size() + a.add.size());
  std::set_union(out.true_atoms.begin(), out.true_atoms.end(), a.add.begin(), a.add.end(),
                 std::back_inserter(merged));
  out.true_atoms = std::move(merged);
  return out;
}

Goal exact_state_goal(const State& target, const GroundTask& task) {
  Goal g;
  g.pos = target.true_atoms;
  g.neg.reserve(task.atoms.size() - target.true_atoms.size());
  for (uint32_t a = 0; a < task.atoms.size(); ++a)
    if (!target.contains(a)) g.neg.push_back(a);
  return g;
}

namespace {

struct GroundingContext {
  const DomainDef& domain;
  const GroundOptions& opt;
  std::vector<TypedName> objects;                 // constants + problem objects
  std::map<GroundAtom, uint32_t> atom_index;      // provisional ids
  std::vector<GroundAtom> atom_list;
  std::set<std::string> static_preds;             // in no add/del set
  std::set<GroundAtom> init_atoms;

  uint32_t intern(GroundAtom atom) {
    auto it = atom_index.find(atom);
    if (it != atom_index.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(atom_list.size());
    atom_index.emplace(atom, id);
    atom_list.push_back(std::move(atom));
    return id;
  }

  std::vector<std::string> candidates(const std::string& type) const {
    std::vector<std::string> out;
    for (const auto& o : objects)
      if (domain.is_subtype(o.type, type)) out.push_back(o.name);
    return out;
  }
};

GroundAtom bind_literal(const Literal& lit, const std::vector<TypedName>& params,
                        const std::vector<std::string>& binding) {
  GroundAtom g;
  g.pred = lit.pred;
  g.args.reserve(lit.args.size());
  for (const auto& arg : lit.args) {
    if (!arg.empty() && arg[0] == '?') {
      size_t k = 0;
      for (; k < params.size(); ++k)
        if (params[k].name == arg) break;
      g.args.push_back(binding[k]);
    } else {
      g.args.push_back(arg);
    }
  }
  return g;
}

}  // namespace

GroundTask ground(const DomainDef& d, const ProblemDef& p, const GroundOptions& opt) {
  GroundingContext ctx{d, opt};
  ctx.objects = d.constants;
  for (const auto& o : p.objects) ctx.objects.push_back(o);
  std::sort(ctx.objects.begin(), ctx.objects.end(),
            [](const TypedName& a, const TypedName& b) { return a.name < b.name; });

  for (const auto& pred : d.predicates) ctx.static_preds.insert(pred.name);
  for (const auto& a : d.actions) {
    for (const auto& lit : a.add) ctx.static_preds.erase(lit.pred);
    for (const auto& lit : a.del) ctx.static_preds.erase(lit.pred);
  }
  for (const auto& lit : p.init) ctx.init_atoms.insert(GroundAtom{lit.pred, lit.args});

  struct ProtoAction {
    std::string name;
    std::vector<std::string> args;
    std::vector<GroundAtom> precon_pos, precon_neg, add, del;
  };
  std::vector<ProtoAction> protos;

  for (const auto& schema : d.actions) {
    std::vector<std::vector<std::string>> cands;
    cands.reserve(schema.params.size());
    for (const auto& prm : schema.params) cands.push_back(ctx.candidates(prm.type));

    std::vector<std::string> binding(schema.params.size());
    // depth-first enumeration in candidate (lexicographic) order
    auto enumerate = [&](auto&& self, size_t depth) -> void {
      if (depth == schema.params.size()) {
        ProtoAction proto;
        proto.name = schema.name;
        proto.args = binding;
        for (const auto& lit : schema.precon_pos)
          proto.precon_pos.push_back(bind_literal(lit, schema.params, binding));
        for (const auto& lit : schema.precon_neg)
          proto.precon_neg.push_back(bind_literal(lit, schema.params, binding));
        for (const auto& lit : schema.add)
          proto.add.push_back(bind_literal(lit, schema.params, binding));
        for (const auto& lit : schema.del)
          proto.del.push_back(bind_literal(lit, schema.params, binding));

        if (opt.prune_static) {
          for (const auto& atom : proto.precon_pos)
            if (ctx.static_preds.count(atom.pred) && !ctx.init_atoms.count(atom)) return;
          for (const auto& atom : proto.precon_neg)
            if (ctx.static_preds.count(atom.pred) && ctx.init_atoms.count(atom)) return;
        }
        if (protos.size() >= opt.max_actions) throw GroundingExplosion(opt.max_actions);
        protos.push_back(std::move(proto));
        return;
      }
      for (const auto& obj : cands[depth]) {
        binding[depth] = obj;
        self(self, depth + 1);
      }
    };
    enumerate(enumerate, 0);
  }

  for (const auto& atom : ctx.init_atoms) ctx.intern(atom);
  for (const auto& proto : protos) {
    for (const auto& a : proto.precon_pos) ctx.intern(a);
    for (const auto& a : proto.precon_neg) ctx.intern(a);
    for (const auto& a : proto.add) ctx.intern(a);
    for (const auto& a : proto.del) ctx.intern(a);
  }
  for (const auto& lit : p.goal_pos) ctx.intern(GroundAtom{lit.pred, lit.args});
  for (const auto& lit : p.goal_neg) ctx.intern(GroundAtom{lit.pred, lit.args});

  // canonical atom order: lexicographic by predicate then arguments
  GroundTask task;
  task.atoms = ctx.atom_list;
  std::sort(task.atoms.begin(), task.atoms.end());
  std::vector<uint32_t> remap(task.atoms.size());
  for (uint32_t old = 0; old < ctx.atom_list.size(); ++old) {
    auto it = std::lower_bound(task.atoms.begin(), task.atoms.end(), ctx.atom_list[old]);
    remap[old] = static_cast<uint32_t>(std::distance(task.atoms.begin(), it));
  }
  auto ids_of = [&](const std::vector<GroundAtom>& atoms) {
    std::vector<uint32_t> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) out.push_back(remap[ctx.atom_index.at(a)]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  std::sort(protos.begin(), protos.end(), [](const ProtoAction& a, const ProtoAction& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.args < b.args;
  });
  task.actions.reserve(protos.size());
  for (const auto& proto : protos) {
    GroundAction ga;
    ga.id = static_cast<uint32_t>(task.actions.size());
    ga.name = proto.name;
    ga.args = proto.args;
    ga.precon_pos = ids_of(proto.precon_pos);
    ga.precon_neg = ids_of(proto.precon_neg);
    ga.add = ids_of(proto.add);
    ga.del = ids_of(proto.del);
    task.actions.push_back(std::move(ga));
  }

  std::vector<GroundAtom> init_sorted(ctx.init_atoms.begin(), ctx.init_atoms.end());
  task.init.true_atoms = ids_of(init_sorted);

  std::vector<GroundAtom> gp, gn;
  for (const auto& lit : p.goal_pos) gp.push_back(GroundAtom{lit.pred, lit.args});
  for (const auto& lit : p.goal_neg) gn.push_back(GroundAtom{lit.pred, lit.args});
  task.goal.pos = ids_of(gp);
  task.goal.neg = ids_of(gn);
  return task;
}

}  // namespace etamp
