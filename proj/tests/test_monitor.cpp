#include <doctest.h>

#include <drama/monitor.hpp>

namespace {

drama::Registry three_agent_registry() {
  drama::Registry reg;
  for (int i = 0; i < 3; ++i) {
    drama::AgentObject a;
    a.id = drama::ResourceId{drama::ResourceKind::Agent, i};
    a.location = "kitchen";
    a.state = drama::AgentLifecycle::Active;
    a.last_heartbeat = 0;
    reg.register_agent(a);
  }
  return reg;
}

void add_in_progress_task(drama::Registry& reg, int ix, drama::Tick progress_tick) {
  drama::TaskObject t;
  t.id = drama::ResourceId{drama::ResourceKind::Task, ix};
  t.goal.object_kind = "apple";
  t.goal.surface = "desk";
  t.goal.count = 1;
  reg.register_task(t);
  reg.transition_task(ix, drama::TaskLifecycle::Assigned, progress_tick,
                      drama::ResourceId{drama::ResourceKind::Agent, 0});
  reg.transition_task(ix, drama::TaskLifecycle::InProgress, progress_tick);
}

}  // namespace

TEST_CASE("monitor config bounds") {
  drama::MonitorConfig bad;
  bad.heartbeat_period = 0;
  CHECK_THROWS_AS(bad.validate(), drama::ConfigError);

  bad = {};
  bad.suspect_after = 6;
  bad.dead_after = 6;
  CHECK_THROWS_AS(bad.validate(), drama::ConfigError);

  bad = {};
  bad.stall_after = 0;
  CHECK_THROWS_AS(bad.validate(), drama::ConfigError);

  CHECK_NOTHROW(drama::MonitorConfig{}.validate());
}

TEST_CASE("silence crosses suspect_after then dead_after") {
  auto reg = three_agent_registry();
  drama::Monitor mon;  // suspect 3, dead 6
  mon.record_heartbeat(reg, 1, 3);
  mon.record_heartbeat(reg, 2, 5);

  // agent 0 last beat at 0: silent 4 >= 3 at tick 4, below dead_after
  auto events = mon.detect_failures(reg, 4);
  CHECK(events.empty());
  CHECK(reg.agent(0).state == drama::AgentLifecycle::Suspect);
  CHECK(reg.agent(1).state == drama::AgentLifecycle::Active);

  // silent 6 >= 6 at tick 6: through Suspect to Dead, one event
  events = mon.detect_failures(reg, 6);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == drama::TriggerEvent::Kind::AgentDead);
  CHECK(events[0].subject.index == 0);
  CHECK(events[0].tick == 6);
  CHECK(reg.agent(0).state == drama::AgentLifecycle::Dead);

  // re-running the sweep at the same tick is quiet
  CHECK(mon.detect_failures(reg, 6).empty());
}

TEST_CASE("active goes dead only via suspect even in one sweep") {
  auto reg = three_agent_registry();
  drama::Monitor mon;
  // No intermediate sweep: agent 0 is Active and already past dead_after.
  auto events = mon.detect_failures(reg, 9);
  // all three were registered with last_heartbeat 0, so all die
  CHECK(events.size() == 3);
  for (const auto& e : events) CHECK(e.kind == drama::TriggerEvent::Kind::AgentDead);
  CHECK(reg.agent(0).state == drama::AgentLifecycle::Dead);
}

TEST_CASE("fresh heartbeat rescues a suspect silently") {
  auto reg = three_agent_registry();
  drama::Monitor mon;
  mon.record_heartbeat(reg, 1, 4);
  mon.record_heartbeat(reg, 2, 4);
  mon.detect_failures(reg, 4);
  REQUIRE(reg.agent(0).state == drama::AgentLifecycle::Suspect);

  mon.record_heartbeat(reg, 0, 5);
  CHECK(reg.agent(0).state == drama::AgentLifecycle::Active);
  CHECK(reg.agent(0).last_heartbeat == 5);
  CHECK(mon.detect_failures(reg, 5).empty());
}

TEST_CASE("a stale heartbeat does not rescue") {
  auto reg = three_agent_registry();
  drama::Monitor mon;
  mon.record_heartbeat(reg, 0, 2);
  mon.record_heartbeat(reg, 1, 6);
  mon.record_heartbeat(reg, 2, 6);
  mon.detect_failures(reg, 6);  // agent 0 silent 4 -> Suspect
  REQUIRE(reg.agent(0).state == drama::AgentLifecycle::Suspect);

  mon.record_heartbeat(reg, 0, 2);  // replay of the old beat
  CHECK(reg.agent(0).state == drama::AgentLifecycle::Suspect);
  CHECK(reg.agent(0).last_heartbeat == 2);
}

TEST_CASE("dead agents stay dead on late heartbeats") {
  auto reg = three_agent_registry();
  drama::Monitor mon;
  mon.record_heartbeat(reg, 1, 8);
  mon.record_heartbeat(reg, 2, 8);
  mon.detect_failures(reg, 8);
  REQUIRE(reg.agent(0).state == drama::AgentLifecycle::Dead);

  mon.record_heartbeat(reg, 0, 9);
  CHECK(reg.agent(0).state == drama::AgentLifecycle::Dead);
  CHECK(reg.agent(0).last_heartbeat == 9);
  CHECK(mon.detect_failures(reg, 9).empty());
}

TEST_CASE("joining agents are not subject to failure detection") {
  drama::Registry reg;
  drama::AgentObject a;
  a.id = drama::ResourceId{drama::ResourceKind::Agent, 0};
  a.state = drama::AgentLifecycle::Joining;
  reg.register_agent(a);
  drama::Monitor mon;
  CHECK(mon.detect_failures(reg, 100).empty());
  CHECK(reg.agent(0).state == drama::AgentLifecycle::Joining);
}

TEST_CASE("stalls fire once per plateau and re-arm on progress") {
  auto reg = three_agent_registry();
  add_in_progress_task(reg, 0, 0);
  drama::Monitor mon;  // stall_after 15
  auto keep_alive = [&](drama::Tick t) {
    for (int i = 0; i < 3; ++i) mon.record_heartbeat(reg, i, t);
  };

  keep_alive(14);
  CHECK(mon.detect_failures(reg, 14).empty());

  keep_alive(15);
  auto events = mon.detect_failures(reg, 15);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == drama::TriggerEvent::Kind::TaskStalled);
  CHECK(events[0].subject.index == 0);

  keep_alive(16);
  CHECK(mon.detect_failures(reg, 16).empty());  // same plateau, no repeat

  reg.record_progress(0, 0.5, 20);
  keep_alive(34);
  CHECK(mon.detect_failures(reg, 34).empty());  // 14 ticks since progress
  keep_alive(35);
  events = mon.detect_failures(reg, 35);
  REQUIRE(events.size() == 1);  // new plateau, fires again
  CHECK(events[0].kind == drama::TriggerEvent::Kind::TaskStalled);
}

TEST_CASE("only in-progress tasks can stall") {
  auto reg = three_agent_registry();
  drama::TaskObject t;
  t.id = drama::ResourceId{drama::ResourceKind::Task, 0};
  t.goal.object_kind = "apple";
  t.goal.surface = "desk";
  t.goal.count = 1;
  reg.register_task(t);  // Pending, last_progress_tick 0
  drama::Monitor mon;
  for (int i = 0; i < 3; ++i) mon.record_heartbeat(reg, i, 40);
  CHECK(mon.detect_failures(reg, 40).empty());
}
