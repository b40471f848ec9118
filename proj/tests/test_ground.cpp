#include <algorithm>
#include <string>

#include "doctest.h"
#include "etamp/ground.hpp"
#include "etamp/pddl.hpp"

using namespace etamp;

namespace {

const std::string kFix = ETAMP_FIXTURE_DIR;

const char* kDomain = R"((define (domain hop)
  (:requirements :strips :typing :negative-preconditions)
  (:types node)
  (:predicates (at ?n - node) (edge ?a ?b - node) (seen ?n - node))
  (:action hop
    :parameters (?from ?to - node)
    :precondition (and (at ?from) (edge ?from ?to) (not (seen ?to)))
    :effect (and (at ?to) (seen ?to) (not (at ?from)))))
)";

const char* kProblem = R"((define (problem hop-1)
  (:domain hop)
  (:objects n1 n2 n3 - node)
  (:init (at n1) (edge n1 n2) (edge n2 n3))
  (:goal (at n3)))
)";

GroundTask make_task(const GroundOptions& opt = {}) {
  DomainDef d = parse_domain(kDomain);
  ProblemDef p = parse_problem(kProblem, d);
  return ground(d, p, opt);
}

const GroundAction& find_action(const GroundTask& t, const std::string& name,
                                const std::vector<std::string>& args) {
  for (const auto& a : t.actions)
    if (a.name == name && a.args == args) return a;
  REQUIRE(false);
  return t.actions.front();
}

}  // namespace

TEST_CASE("static preconditions prune unreachable ground actions") {
  GroundTask t = make_task();
  // edge is static: only n1->n2 and n2->n3 hops survive out of 9 pairs
  CHECK(t.actions.size() == 2);
  GroundTask loose = make_task({.prune_static = false});
  CHECK(loose.actions.size() == 9);
}

TEST_CASE("atoms of pruned actions never reach the atom table") {
  GroundTask t = make_task();
  // edge(n1,n3) only appears in pruned protos, so it is never interned
  CHECK_FALSE(t.atom_id("edge", {"n1", "n3"}).has_value());
  CHECK(t.atom_id("edge", {"n1", "n2"}).has_value());
  CHECK(t.atom_id("at", {"n1"}).has_value());
  CHECK(t.atom_id("seen", {"n3"}).has_value());
  for (const auto& a : t.actions) {
    CHECK(std::is_sorted(a.precon_pos.begin(), a.precon_pos.end()));
    CHECK(std::is_sorted(a.add.begin(), a.add.end()));
    CHECK(std::is_sorted(a.del.begin(), a.del.end()));
  }
}

TEST_CASE("init and goal are mapped to atom ids") {
  GroundTask t = make_task();
  // statics stay in init: surviving actions still name them in precon_pos
  REQUIRE(t.init.true_atoms.size() == 3);
  CHECK(t.init.contains(*t.atom_id("at", {"n1"})));
  CHECK(t.init.contains(*t.atom_id("edge", {"n1", "n2"})));
  CHECK(t.init.contains(*t.atom_id("edge", {"n2", "n3"})));
  REQUIRE(t.goal.pos.size() == 1);
  CHECK(t.goal.pos[0] == *t.atom_id("at", {"n3"}));
  CHECK(t.goal.neg.empty());
}

TEST_CASE("applicable respects positive and negative preconditions") {
  GroundTask t = make_task();
  const GroundAction& h12 = find_action(t, "hop", {"n1", "n2"});
  const GroundAction& h23 = find_action(t, "hop", {"n2", "n3"});
  CHECK(applicable(t.init, h12));
  CHECK_FALSE(applicable(t.init, h23));

  State s2 = apply(t.init, h12);
  CHECK(s2.contains(*t.atom_id("at", {"n2"})));
  CHECK(s2.contains(*t.atom_id("seen", {"n2"})));
  CHECK_FALSE(s2.contains(*t.atom_id("at", {"n1"})));

  // negative precondition: hopping back onto a seen node is barred
  State s3 = apply(s2, h23);
  State loop = s3;
  loop.true_atoms = {*t.atom_id("at", {"n2"}), *t.atom_id("seen", {"n3"})};
  CHECK_FALSE(applicable(loop, h23));
  CHECK(t.goal_satisfied(s3));
  CHECK_FALSE(t.goal_satisfied(s2));
}

TEST_CASE("apply on an inapplicable action throws") {
  GroundTask t = make_task();
  CHECK_THROWS_AS(apply(t.init, find_action(t, "hop", {"n2", "n3"})), NotApplicable);
}

TEST_CASE("goal_satisfied honours negative goals") {
  GroundTask t = make_task();
  Goal g;
  g.neg = {*t.atom_id("at", {"n1"})};
  CHECK_FALSE(GroundTask::goal_satisfied(t.init, g));
  g.neg = {*t.atom_id("at", {"n2"})};
  CHECK(GroundTask::goal_satisfied(t.init, g));
}

TEST_CASE("exact_state_goal complements the atom universe") {
  GroundTask t = make_task();
  Goal g = exact_state_goal(t.init, t);
  CHECK(g.pos == t.init.true_atoms);
  CHECK(g.pos.size() + g.neg.size() == t.atoms.size());
  CHECK(GroundTask::goal_satisfied(t.init, g));
  State other = t.init;
  other.true_atoms.push_back(*t.atom_id("seen", {"n2"}));
  std::sort(other.true_atoms.begin(), other.true_atoms.end());
  CHECK_FALSE(GroundTask::goal_satisfied(other, g));
}

TEST_CASE("grounding is deterministic") {
  GroundTask a = make_task();
  GroundTask b = make_task();
  REQUIRE(a.atoms.size() == b.atoms.size());
  for (size_t i = 0; i < a.atoms.size(); ++i) CHECK(a.atoms[i] == b.atoms[i]);
  REQUIRE(a.actions.size() == b.actions.size());
  for (size_t i = 0; i < a.actions.size(); ++i) {
    CHECK(a.actions[i].id == i);
    CHECK(a.actions[i].name == b.actions[i].name);
    CHECK(a.actions[i].args == b.actions[i].args);
  }
}

TEST_CASE("action cap aborts oversized groundings") {
  DomainDef d = parse_domain(kDomain);
  ProblemDef p = parse_problem(kProblem, d);
  CHECK_THROWS_AS(ground(d, p, {.prune_static = false, .max_actions = 3}), GroundingExplosion);
}

TEST_CASE("subtypes ground into ancestor-typed parameters") {
  const char* dom = "(define (domain sub) (:types car - vehicle vehicle) "
                    "(:predicates (parked ?v - vehicle)) "
                    "(:action park :parameters (?v - vehicle) "
                    ":precondition (not (parked ?v)) :effect (parked ?v)))";
  const char* prob = "(define (problem s1) (:domain sub) (:objects c - car) "
                     "(:init) (:goal (parked c)))";
  DomainDef d = parse_domain(dom);
  ProblemDef p = parse_problem(prob, d);
  GroundTask t = ground(d, p);
  REQUIRE(t.actions.size() == 1);
  CHECK(t.actions[0].args == std::vector<std::string>{"c"});
}

TEST_CASE("manipulation fixture grounds with pruned link atoms") {
  DomainDef d = parse_domain_file(kFix + "/manip/domain.pddl");
  ProblemDef p = parse_problem_file(kFix + "/corridor/problem.pddl", d);
  GroundTask t = ground(d, p);
  // 6 linked moves + move_arm + 1 pick (near prunes the rest) + 3 places
  CHECK(t.actions.size() == 11);
  CHECK_FALSE(t.atom_id("near", {"box1", "startp"}).has_value());
  State s = t.init;
  int applied = 0;
  for (const auto& a : t.actions)
    if (applicable(s, a)) ++applied;
  CHECK(applied >= 3);  // two moves and the arm extension at minimum
}
