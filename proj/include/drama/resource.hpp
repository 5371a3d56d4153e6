#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "drama/errors.hpp"
#include "drama/goal.hpp"
#include "drama/ids.hpp"
#include "drama/lifecycle.hpp"

namespace drama {

// Control-plane record of one worker. `location`, `carrying`, `workload` and
// `last_heartbeat` track the latest reported/monitored values; `policy`
// names the pluggable behavior driving the worker.
struct AgentObject {
  ResourceId id{ResourceKind::Agent, 0};
  std::set<Capability> capabilities;
  RoomId location;
  std::vector<ObjectId> carrying;
  int hand_capacity = 2;
  int workload = 0;
  AgentLifecycle state = AgentLifecycle::Joining;
  Tick last_heartbeat = 0;
  std::string policy = "reference";

  auto operator<=>(const AgentObject&) const = default;

  bool live() const {
    return state == AgentLifecycle::Active || state == AgentLifecycle::Suspect;
  }
  bool terminal() const {
    return state == AgentLifecycle::Dead || state == AgentLifecycle::Departed;
  }
};

struct TaskObject {
  ResourceId id{ResourceKind::Task, 0};
  GoalPredicate goal;
  std::set<Capability> required_capabilities;
  int priority = 0;
  TaskLifecycle state = TaskLifecycle::Pending;
  std::optional<ResourceId> assignee;
  double progress = 0.0;
  Tick last_progress_tick = 0;

  auto operator<=>(const TaskObject&) const = default;

  bool incomplete() const { return state != TaskLifecycle::Completed; }
  bool schedulable() const { return state != TaskLifecycle::Completed; }
};

// Applies one lifecycle edge to a copy and re-establishes the type
// invariants (Evicted/Completed clear the assignee, Completed pins
// progress to 1). Throws IllegalTransition outside the legal edge set.
inline AgentObject transition(AgentObject agent, AgentLifecycle to) {
  require_legal(agent.state, to);
  agent.state = to;
  return agent;
}

inline TaskObject transition(TaskObject task, TaskLifecycle to, Tick now = 0,
                             std::optional<ResourceId> assignee = std::nullopt) {
  require_legal(task.state, to);
  task.state = to;
  switch (to) {
    case TaskLifecycle::Assigned:
      if (!assignee || assignee->kind != ResourceKind::Agent) {
        throw IllegalTransition(to_string(task.state), "assigned (no agent)");
      }
      task.assignee = assignee;
      task.last_progress_tick = now;
      break;
    case TaskLifecycle::Evicted:
      task.assignee.reset();
      break;
    case TaskLifecycle::Completed:
      task.assignee.reset();
      task.progress = 1.0;
      break;
    case TaskLifecycle::InProgress:
      task.last_progress_tick = now;
      break;
    case TaskLifecycle::Pending:
      break;
  }
  return task;
}

// Immutable projection of the registry at one tick: everything still
// schedulable plus an archival list of terminal objects.
struct AttributeSnapshot {
  Tick tick = 0;
  std::map<int, AgentObject> agents;           // non-terminal
  std::map<int, TaskObject> tasks;             // non-Completed
  std::map<int, AgentObject> archived_agents;  // Dead / Departed
  std::map<int, TaskObject> archived_tasks;    // Completed

  auto operator<=>(const AttributeSnapshot&) const = default;

  const AgentObject* find_agent(int index) const {
    if (auto it = agents.find(index); it != agents.end()) return &it->second;
    if (auto it = archived_agents.find(index); it != archived_agents.end()) {
      return &it->second;
    }
    return nullptr;
  }
};

// Owns every resource object. Single-writer: all mutation happens on the
// control plane's event loop; snapshots are the shareable views.
class Registry {
 public:
  AgentObject& register_agent(AgentObject agent) {
    if (agents_.count(agent.id.index)) throw DuplicateAgent(agent.id.index);
    agent.id.kind = ResourceKind::Agent;
    return agents_.emplace(agent.id.index, std::move(agent)).first->second;
  }

  TaskObject& register_task(TaskObject task) {
    if (tasks_.count(task.id.index)) {
      throw Error("task already present: " + std::to_string(task.id.index));
    }
    task.id.kind = ResourceKind::Task;
    return tasks_.emplace(task.id.index, std::move(task)).first->second;
  }

  bool has_agent(int index) const { return agents_.count(index) > 0; }
  bool has_task(int index) const { return tasks_.count(index) > 0; }

  AgentObject& agent(int index) {
    auto it = agents_.find(index);
    if (it == agents_.end()) throw UnknownAgent(index);
    return it->second;
  }
  const AgentObject& agent(int index) const {
    return const_cast<Registry*>(this)->agent(index);
  }

  TaskObject& task(int index) {
    auto it = tasks_.find(index);
    if (it == tasks_.end()) throw UnknownTask(index);
    return it->second;
  }
  const TaskObject& task(int index) const {
    return const_cast<Registry*>(this)->task(index);
  }

  const std::map<int, AgentObject>& agents() const { return agents_; }
  const std::map<int, TaskObject>& tasks() const { return tasks_; }

  void transition_agent(int index, AgentLifecycle to) {
    AgentObject& a = agent(index);
    a = transition(a, to);
    refresh_workloads();
  }

  void transition_task(int index, TaskLifecycle to, Tick now = 0,
                       std::optional<ResourceId> assignee = std::nullopt) {
    TaskObject& t = task(index);
    t = transition(t, to, now, assignee);
    refresh_workloads();
  }

  // Monotonic ground-truth progress update. Fractions at or above 1 go
  // through the Completed transition instead, which owns progress = 1.
  void record_progress(int index, double fraction, Tick now) {
    TaskObject& t = task(index);
    if (fraction >= 1.0 || fraction <= t.progress) return;
    t.progress = fraction;
    t.last_progress_tick = now;
  }

  // workload is defined as the count of Assigned/InProgress tasks per agent;
  // recomputing after every mutation keeps it an invariant, not a cache
  void refresh_workloads() {
    for (auto& [_, a] : agents_) a.workload = 0;
    for (const auto& [_, t] : tasks_) {
      if (!t.assignee) continue;
      if (t.state != TaskLifecycle::Assigned && t.state != TaskLifecycle::InProgress)
        continue;
      auto it = agents_.find(t.assignee->index);
      if (it != agents_.end()) it->second.workload += 1;
    }
  }

  // Returns the first violated invariant, or nothing. Tests run this after
  // every mutation.
  std::optional<std::string> check_invariants() const {
    for (const auto& [ix, a] : agents_) {
      if (static_cast<int>(a.carrying.size()) > a.hand_capacity) {
        return "agent " + std::to_string(ix) + " over hand capacity";
      }
      int count = 0;
      for (const auto& [_, t] : tasks_) {
        if (t.assignee && t.assignee->index == ix &&
            (t.state == TaskLifecycle::Assigned ||
             t.state == TaskLifecycle::InProgress)) {
          ++count;
        }
      }
      if (count != a.workload) {
        return "agent " + std::to_string(ix) + " workload " +
               std::to_string(a.workload) + " != assigned count " +
               std::to_string(count);
      }
    }
    for (const auto& [ix, t] : tasks_) {
      const bool bound = t.state == TaskLifecycle::Assigned ||
                         t.state == TaskLifecycle::InProgress;
      if (bound) {
        if (!t.assignee) return "task " + std::to_string(ix) + " bound without assignee";
        auto it = agents_.find(t.assignee->index);
        if (it == agents_.end()) {
          return "task " + std::to_string(ix) + " assignee unregistered";
        }
      }
      if ((t.state == TaskLifecycle::Pending ||
           t.state == TaskLifecycle::Completed) &&
          t.assignee) {
        return "task " + std::to_string(ix) + " must not have assignee";
      }
      if ((t.progress == 1.0) != (t.state == TaskLifecycle::Completed)) {
        return "task " + std::to_string(ix) + " progress/state mismatch";
      }
    }
    return std::nullopt;
  }

 private:
  std::map<int, AgentObject> agents_;
  std::map<int, TaskObject> tasks_;
};

// Aggregates the attribute sets of every resource object at `tick`.
// Terminal objects land in the archival lists; everything else is
// schedulable input for the planner.
inline AttributeSnapshot snapshot(const Registry& registry, Tick tick) {
  AttributeSnapshot snap;
  snap.tick = tick;
  for (const auto& [ix, t] : registry.tasks()) {
    if (t.assignee && !registry.has_agent(t.assignee->index)) {
      throw DanglingReference(ix, t.assignee->index);
    }
    if (t.state == TaskLifecycle::Completed) {
      snap.archived_tasks.emplace(ix, t);
    } else {
      snap.tasks.emplace(ix, t);
    }
  }
  for (const auto& [ix, a] : registry.agents()) {
    if (a.terminal()) {
      snap.archived_agents.emplace(ix, a);
    } else {
      snap.agents.emplace(ix, a);
    }
  }
  return snap;
}

}  // namespace drama
