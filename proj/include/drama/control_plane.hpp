#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "drama/bus.hpp"
#include "drama/monitor.hpp"
#include "drama/scheduler.hpp"
#include "drama/world.hpp"

namespace drama {

enum class AllocatorKind { Drama, Static, CompletionRealloc };

inline const char* to_string(AllocatorKind k) {
  switch (k) {
    case AllocatorKind::Drama: return "drama";
    case AllocatorKind::Static: return "static";
    case AllocatorKind::CompletionRealloc: return "completion";
  }
  return "?";
}

struct ControlConfig {
  MonitorConfig monitor;
  SchedulerConfig scheduler;

  void validate() const {
    monitor.validate();
    scheduler.validate();
  }
};

// Fraction of a task's goal currently satisfied by ground-truth world state.
inline double task_fraction(const WorldState& world, const TaskObject& task) {
  return goal_progress(world, {task.goal}).per_goal.at(0).fraction;
}

// The centralized side of the system: resource registry, liveness monitor,
// planner-critic scheduler, and the per-event reallocation policy. One
// instance drives one episode over one bus.
class ControlPlane {
 public:
  struct TickReport {
    std::vector<TriggerEvent> events;
    int epochs = 0;
  };

  ControlPlane(ControlConfig cfg, AllocatorKind allocator, Bus* bus)
      : cfg_(cfg), allocator_(allocator), bus_(bus), monitor_(cfg.monitor) {
    cfg_.validate();
  }

  Registry& registry() { return registry_; }
  const Registry& registry() const { return registry_; }
  std::int64_t epochs() const { return epoch_; }
  const std::vector<nlohmann::json>& epoch_log() const { return epoch_log_; }
  const Assignment& current_assignment() const { return current_; }

  // Runs one scheduling epoch against the live registry and applies the
  // resulting mapping: lifecycle edges for moved tasks plus Assign/Evict
  // directives on the bus. Returns the applied assignment.
  Assignment schedule(const WorldState& world, Tick now, const std::string& trigger) {
    AttributeSnapshot snap = snapshot(registry_, now);
    ScheduleOutcome outcome = schedule_rounds(snap, world, cfg_.scheduler);
    outcome.assignment.epoch = ++epoch_;
    apply_assignment(outcome.assignment, now);
    nlohmann::json map = nlohmann::json::object();
    for (const auto& [tix, aix] : outcome.assignment.map) {
      map[std::to_string(tix)] = aix;
    }
    epoch_log_.push_back({{"epoch", outcome.assignment.epoch},
                          {"tick", now},
                          {"trigger", trigger},
                          {"map", std::move(map)},
                          {"violations_repaired", outcome.repaired}});
    current_ = outcome.assignment;
    return current_;
  }

  // Reallocation policy for one trigger event. Applies the event's
  // bookkeeping (idempotent if the monitor already did it), then decides
  // whether this event warrants a fresh epoch. Only the reactive allocator
  // reschedules here; the baselines' reactions live in process_tick.
  std::optional<Assignment> handle_event(const TriggerEvent& event,
                                         const WorldState& world, Tick now) {
    bookkeep(event);
    switch (event.kind) {
      case TriggerEvent::Kind::AgentDead:
      case TriggerEvent::Kind::AgentDeparted: {
        evict_tasks_of(event.subject.index);
        return schedule(world, now, to_string(event.kind));
      }
      case TriggerEvent::Kind::AgentJoined:
      case TriggerEvent::Kind::TaskArrived:
        return schedule(world, now, to_string(event.kind));
      case TriggerEvent::Kind::TaskStalled: {
        const TaskObject& t = registry_.task(event.subject.index);
        if (t.state != TaskLifecycle::Assigned && t.state != TaskLifecycle::InProgress) {
          return std::nullopt;  // resolved in the meantime
        }
        evict_one(event.subject.index);
        return schedule(world, now, to_string(event.kind));
      }
      case TriggerEvent::Kind::TaskCompleted: {
        for (const auto& [ix, t] : registry_.tasks()) {
          if (t.state == TaskLifecycle::Pending || t.state == TaskLifecycle::Evicted) {
            return schedule(world, now, to_string(event.kind));
          }
        }
        return std::nullopt;  // nothing waiting for capacity
      }
    }
    return std::nullopt;
  }

  // One lockstep control turn: drain the mailbox, refresh ground-truth task
  // progress, sweep for failures, then react to every event this tick under
  // the configured allocator. `injected` carries scenario events (joins,
  // arrivals, departures) surfaced by the harness.
  TickReport process_tick(Tick now, const WorldState& world,
                          const std::vector<TriggerEvent>& injected = {}) {
    TickReport report;
    const std::int64_t epochs_before = epoch_;

    for (const Message& m : bus_->drain(EndpointId::control(), now)) {
      if (const auto* hb = std::get_if<Heartbeat>(&m.payload)) {
        monitor_.record_heartbeat(registry_, hb->agent, hb->tick);
      } else if (const auto* sr = std::get_if<StatusReport>(&m.payload)) {
        apply_report(*sr);
      }
    }

    for (const TriggerEvent& e : injected) bookkeep(e);

    // Ground truth beats self-reports: completion and progress are read off
    // the world so a silent worker cannot wedge a finished task.
    std::vector<TriggerEvent> events;
    for (const auto& [ix, t] : registry_.tasks()) {
      if (!t.incomplete()) continue;
      const double f = task_fraction(world, t);
      if (f >= 1.0) {
        complete_task(ix, now);
        events.push_back({now, TriggerEvent::Kind::TaskCompleted, task_id(ix)});
      } else if (f > t.progress) {
        registry_.record_progress(ix, f, now);
      }
    }

    for (const TriggerEvent& e : monitor_.detect_failures(registry_, now)) {
      events.push_back(e);
    }
    for (const TriggerEvent& e : injected) events.push_back(e);

    for (const TriggerEvent& e : events) {
      switch (allocator_) {
        case AllocatorKind::Drama:
          handle_event(e, world, now);
          break;
        case AllocatorKind::CompletionRealloc:
          // Reallocates only at completions, and only while work remains;
          // joins and failures pass unnoticed until the next completion.
          if (e.kind == TriggerEvent::Kind::TaskCompleted && work_remains()) {
            schedule(world, now, to_string(e.kind));
          }
          break;
        case AllocatorKind::Static:
          break;
      }
    }

    report.events = std::move(events);
    report.epochs = static_cast<int>(epoch_ - epochs_before);
    return report;
  }

  // Registry edges for an event, without any rescheduling. Safe to repeat.
  void bookkeep(const TriggerEvent& event) {
    const int ix = event.subject.index;
    if (event.subject.kind == ResourceKind::Agent ? !registry_.has_agent(ix)
                                                  : !registry_.has_task(ix)) {
      throw UnknownSubject(event.subject);
    }
    switch (event.kind) {
      case TriggerEvent::Kind::AgentJoined: {
        AgentObject& a = registry_.agent(event.subject.index);
        if (a.state == AgentLifecycle::Joining) {
          registry_.transition_agent(a.id.index, AgentLifecycle::Active);
        }
        break;
      }
      case TriggerEvent::Kind::AgentDead: {
        AgentObject& a = registry_.agent(event.subject.index);
        if (a.state == AgentLifecycle::Active) {
          registry_.transition_agent(a.id.index, AgentLifecycle::Suspect);
        }
        if (a.state == AgentLifecycle::Suspect) {
          registry_.transition_agent(a.id.index, AgentLifecycle::Dead);
        }
        break;
      }
      case TriggerEvent::Kind::AgentDeparted: {
        AgentObject& a = registry_.agent(event.subject.index);
        if (a.live()) {
          registry_.transition_agent(a.id.index, AgentLifecycle::Departed);
        }
        break;
      }
      case TriggerEvent::Kind::TaskArrived:
        registry_.task(event.subject.index);  // must exist; throws otherwise
        break;
      case TriggerEvent::Kind::TaskCompleted:
        complete_task(event.subject.index, event.tick);
        break;
      case TriggerEvent::Kind::TaskStalled:
        break;
    }
  }

 private:
  bool work_remains() const {
    for (const auto& [_, t] : registry_.tasks()) {
      if (t.incomplete()) return true;
    }
    return false;
  }

  void apply_report(const StatusReport& r) {
    AgentObject& a = registry_.agent(r.agent);
    a.location = r.location;
    a.carrying = r.carrying;
    if (r.task) {
      auto& tasks = registry_.tasks();
      auto it = tasks.find(*r.task);
      if (it != tasks.end() && it->second.state == TaskLifecycle::Assigned &&
          it->second.assignee && it->second.assignee->index == r.agent) {
        registry_.transition_task(*r.task, TaskLifecycle::InProgress, r.tick);
      }
    }
  }

  void complete_task(int ix, Tick now) {
    const TaskLifecycle state = registry_.task(ix).state;
    if (state == TaskLifecycle::Completed) return;
    if (state == TaskLifecycle::Pending || state == TaskLifecycle::Evicted) {
      // Goal satisfied while unassigned, e.g. a worker shed the right object
      // onto the goal surface. Completed is only reachable from InProgress,
      // so attribute the work to the lowest live agent for the edges.
      int formal = -1;
      for (const auto& [aix, agent] : registry_.agents()) {
        if (agent.live()) {
          formal = aix;
          break;
        }
      }
      if (formal < 0) return;  // nobody alive to attribute it to
      registry_.transition_task(ix, TaskLifecycle::Assigned, now, agent_id(formal));
    }
    if (registry_.task(ix).state == TaskLifecycle::Assigned) {
      registry_.transition_task(ix, TaskLifecycle::InProgress, now);
    }
    registry_.transition_task(ix, TaskLifecycle::Completed, now);
  }

  void evict_one(int task_ix) {
    const TaskObject& t = registry_.task(task_ix);
    const std::optional<ResourceId> old = t.assignee;
    if (t.state == TaskLifecycle::Assigned || t.state == TaskLifecycle::InProgress) {
      registry_.transition_task(task_ix, TaskLifecycle::Evicted);
      send_evict(task_ix, old);
    }
  }

  void evict_tasks_of(int agent_ix) {
    std::vector<int> hit;
    for (const auto& [ix, t] : registry_.tasks()) {
      if ((t.state == TaskLifecycle::Assigned || t.state == TaskLifecycle::InProgress) &&
          t.assignee && t.assignee->index == agent_ix) {
        hit.push_back(ix);
      }
    }
    for (int ix : hit) evict_one(ix);
  }

  void send_evict(int task_ix, std::optional<ResourceId> old_assignee) {
    if (!old_assignee) return;
    const int aix = old_assignee->index;
    if (!registry_.agent(aix).live()) return;  // nobody home to notify
    Directive d;
    d.kind = Directive::Kind::Evict;
    d.task = task_ix;
    d.agent = aix;
    bus_->send({0, EndpointId::control(), EndpointId::agent(aix), now_, d});
  }

  // Diffs the candidate against current registry bindings and walks each
  // moved task through its lifecycle edges, notifying workers over the bus.
  void apply_assignment(const Assignment& a, Tick now) {
    now_ = now;
    // Unmap: bound tasks the new assignment no longer covers.
    std::vector<int> to_evict;
    for (const auto& [ix, t] : registry_.tasks()) {
      if (t.state != TaskLifecycle::Assigned && t.state != TaskLifecycle::InProgress) continue;
      auto entry = a.map.find(ix);
      if (entry == a.map.end() || entry->second != t.assignee->index) {
        to_evict.push_back(ix);
      }
    }
    for (int ix : to_evict) evict_one(ix);

    for (const auto& [tix, aix] : a.map) {
      const TaskObject& t = registry_.task(tix);
      if (t.state == TaskLifecycle::Completed) continue;
      if ((t.state == TaskLifecycle::Assigned || t.state == TaskLifecycle::InProgress) &&
          t.assignee && t.assignee->index == aix) {
        continue;  // unchanged binding, work continues
      }
      registry_.transition_task(tix, TaskLifecycle::Assigned, now, agent_id(aix));
      if (registry_.agent(aix).live()) {
        Directive d;
        d.kind = Directive::Kind::Assign;
        d.task = tix;
        d.agent = aix;
        d.task_view = registry_.task(tix);
        bus_->send({0, EndpointId::control(), EndpointId::agent(aix), now, d});
      }
    }
  }

  ControlConfig cfg_;
  AllocatorKind allocator_;
  Bus* bus_;
  Monitor monitor_;
  Registry registry_;
  std::int64_t epoch_ = 0;
  Tick now_ = 0;
  Assignment current_;
  std::vector<nlohmann::json> epoch_log_;
};

}  // namespace drama
