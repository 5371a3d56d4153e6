#include <doctest.h>

#include <optional>
#include <vector>

#include <drama/resource.hpp>
#include <drama/rng.hpp>

namespace {

drama::AgentObject make_agent(int ix, drama::AgentLifecycle state) {
  drama::AgentObject a;
  a.id = drama::ResourceId{drama::ResourceKind::Agent, ix};
  a.capabilities = {"carry"};
  a.location = "kitchen";
  a.state = state;
  return a;
}

drama::TaskObject make_task(int ix) {
  drama::TaskObject t;
  t.id = drama::ResourceId{drama::ResourceKind::Task, ix};
  t.goal.object_kind = "apple";
  t.goal.surface = "desk";
  t.goal.count = 1;
  t.required_capabilities = {"carry"};
  t.priority = ix;
  return t;
}

drama::ResourceId agent_ref(int ix) {
  return drama::ResourceId{drama::ResourceKind::Agent, ix};
}

}  // namespace

TEST_CASE("assigned requires an agent reference") {
  auto t = make_task(0);
  CHECK_THROWS_AS(drama::transition(t, drama::TaskLifecycle::Assigned, 3),
                  drama::IllegalTransition);
  CHECK_THROWS_AS(
      drama::transition(t, drama::TaskLifecycle::Assigned, 3,
                        drama::ResourceId{drama::ResourceKind::Task, 1}),
      drama::IllegalTransition);

  auto bound = drama::transition(t, drama::TaskLifecycle::Assigned, 3, agent_ref(2));
  CHECK(bound.state == drama::TaskLifecycle::Assigned);
  REQUIRE(bound.assignee.has_value());
  CHECK(bound.assignee->index == 2);
  CHECK(bound.last_progress_tick == 3);
}

TEST_CASE("eviction and completion clear the assignee") {
  auto t = drama::transition(make_task(0), drama::TaskLifecycle::Assigned, 0, agent_ref(1));

  auto evicted = drama::transition(t, drama::TaskLifecycle::Evicted);
  CHECK(evicted.state == drama::TaskLifecycle::Evicted);
  CHECK_FALSE(evicted.assignee.has_value());

  auto started = drama::transition(t, drama::TaskLifecycle::InProgress, 5);
  started.progress = 0.5;
  auto done = drama::transition(started, drama::TaskLifecycle::Completed);
  CHECK(done.state == drama::TaskLifecycle::Completed);
  CHECK_FALSE(done.assignee.has_value());
  CHECK(done.progress == 1.0);
}

TEST_CASE("agent transition helper enforces the edge set") {
  auto a = make_agent(0, drama::AgentLifecycle::Active);
  CHECK_THROWS_AS(drama::transition(a, drama::AgentLifecycle::Dead),
                  drama::IllegalTransition);
  auto suspect = drama::transition(a, drama::AgentLifecycle::Suspect);
  CHECK(suspect.state == drama::AgentLifecycle::Suspect);
  CHECK(drama::transition(suspect, drama::AgentLifecycle::Dead).state ==
        drama::AgentLifecycle::Dead);
}

TEST_CASE("registry rejects duplicate registration") {
  drama::Registry reg;
  reg.register_agent(make_agent(0, drama::AgentLifecycle::Active));
  CHECK_THROWS_AS(reg.register_agent(make_agent(0, drama::AgentLifecycle::Active)),
                  drama::DuplicateAgent);
  reg.register_task(make_task(0));
  CHECK_THROWS_AS(reg.register_task(make_task(0)), drama::Error);
}

TEST_CASE("record_progress is monotonic and leaves completion to the transition") {
  drama::Registry reg;
  reg.register_agent(make_agent(0, drama::AgentLifecycle::Active));
  reg.register_task(make_task(0));
  reg.transition_task(0, drama::TaskLifecycle::Assigned, 1, agent_ref(0));
  reg.transition_task(0, drama::TaskLifecycle::InProgress, 2);

  reg.record_progress(0, 0.5, 4);
  CHECK(reg.task(0).progress == 0.5);
  CHECK(reg.task(0).last_progress_tick == 4);

  reg.record_progress(0, 0.25, 6);  // regression ignored
  CHECK(reg.task(0).progress == 0.5);
  CHECK(reg.task(0).last_progress_tick == 4);

  reg.record_progress(0, 0.5, 7);  // no change, no touch
  CHECK(reg.task(0).last_progress_tick == 4);

  reg.record_progress(0, 1.0, 8);  // completion only via the lifecycle edge
  CHECK(reg.task(0).progress == 0.5);
  CHECK(reg.task(0).state == drama::TaskLifecycle::InProgress);

  reg.transition_task(0, drama::TaskLifecycle::Completed, 8);
  CHECK(reg.task(0).progress == 1.0);
  CHECK(reg.check_invariants() == std::nullopt);
}

TEST_CASE("workload always equals the count of bound tasks") {
  drama::Registry reg;
  reg.register_agent(make_agent(0, drama::AgentLifecycle::Active));
  reg.register_agent(make_agent(1, drama::AgentLifecycle::Active));
  for (int i = 0; i < 4; ++i) reg.register_task(make_task(i));

  reg.transition_task(0, drama::TaskLifecycle::Assigned, 0, agent_ref(0));
  reg.transition_task(1, drama::TaskLifecycle::Assigned, 0, agent_ref(0));
  reg.transition_task(2, drama::TaskLifecycle::Assigned, 0, agent_ref(1));
  CHECK(reg.agent(0).workload == 2);
  CHECK(reg.agent(1).workload == 1);
  CHECK(reg.check_invariants() == std::nullopt);

  reg.transition_task(1, drama::TaskLifecycle::Evicted);
  CHECK(reg.agent(0).workload == 1);

  reg.transition_task(2, drama::TaskLifecycle::InProgress, 1);
  CHECK(reg.agent(1).workload == 1);

  reg.transition_task(2, drama::TaskLifecycle::Completed, 2);
  CHECK(reg.agent(1).workload == 0);
  CHECK(reg.check_invariants() == std::nullopt);
}

TEST_CASE("random legal mutation walks keep the registry invariants") {
  drama::Rng rng(0xfeedULL);
  drama::Registry reg;
  for (int i = 0; i < 3; ++i)
    reg.register_agent(make_agent(i, drama::AgentLifecycle::Active));
  for (int i = 0; i < 5; ++i) reg.register_task(make_task(i));

  for (drama::Tick now = 1; now <= 400; ++now) {
    const int tix = static_cast<int>(rng.uniform(0, 4));
    const auto& t = reg.task(tix);
    std::vector<drama::TaskLifecycle> nexts;
    for (auto to : drama::kTaskStates) {
      if (drama::legal_transition(t.state, to)) nexts.push_back(to);
    }
    if (nexts.empty()) continue;
    const auto to = nexts[static_cast<std::size_t>(
        rng.uniform(0, static_cast<std::int64_t>(nexts.size()) - 1))];
    const int aix = static_cast<int>(rng.uniform(0, 2));
    reg.transition_task(tix, to, now,
                        to == drama::TaskLifecycle::Assigned
                            ? std::optional<drama::ResourceId>(agent_ref(aix))
                            : std::nullopt);
    if (t.state == drama::TaskLifecycle::InProgress && rng.uniform01() < 0.5) {
      reg.record_progress(tix, rng.uniform01(), now);
    }
    auto violation = reg.check_invariants();
    CAPTURE(now);
    CHECK(violation == std::nullopt);
  }
}

TEST_CASE("snapshot partitions live and terminal objects") {
  drama::Registry reg;
  reg.register_agent(make_agent(0, drama::AgentLifecycle::Active));
  reg.register_agent(make_agent(1, drama::AgentLifecycle::Active));
  reg.transition_agent(1, drama::AgentLifecycle::Suspect);
  reg.transition_agent(1, drama::AgentLifecycle::Dead);
  reg.register_task(make_task(0));
  reg.register_task(make_task(1));
  reg.transition_task(1, drama::TaskLifecycle::Assigned, 1, agent_ref(0));
  reg.transition_task(1, drama::TaskLifecycle::InProgress, 2);
  reg.transition_task(1, drama::TaskLifecycle::Completed, 3);

  auto snap = drama::snapshot(reg, 4);
  CHECK(snap.tick == 4);
  CHECK(snap.agents.size() == 1);
  CHECK(snap.agents.count(0) == 1);
  CHECK(snap.archived_agents.count(1) == 1);
  CHECK(snap.tasks.size() == 1);
  CHECK(snap.tasks.count(0) == 1);
  CHECK(snap.archived_tasks.count(1) == 1);

  CHECK(snap.find_agent(0) != nullptr);
  CHECK(snap.find_agent(1) != nullptr);  // archived still findable
  CHECK(snap.find_agent(7) == nullptr);
}

TEST_CASE("snapshot refuses dangling assignee references") {
  drama::Registry reg;
  reg.register_agent(make_agent(0, drama::AgentLifecycle::Active));
  auto t = make_task(0);
  t.state = drama::TaskLifecycle::Assigned;
  t.assignee = agent_ref(9);  // never registered
  reg.register_task(t);
  CHECK_THROWS_AS(drama::snapshot(reg, 1), drama::DanglingReference);
}
