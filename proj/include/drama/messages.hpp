#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "drama/ids.hpp"
#include "drama/resource.hpp"

namespace drama {

// Discrete system change that is the only legal cause of rescheduling.
struct TriggerEvent {
  enum class Kind {
    AgentDead,
    AgentDeparted,
    AgentJoined,
    TaskStalled,
    TaskCompleted,
    TaskArrived,
  };

  Tick tick = 0;
  Kind kind = Kind::AgentDead;
  ResourceId subject;

  auto operator<=>(const TriggerEvent&) const = default;

  bool subject_kind_matches() const {
    const bool agent_event = kind == Kind::AgentDead ||
                             kind == Kind::AgentDeparted ||
                             kind == Kind::AgentJoined;
    return agent_event ? subject.kind == ResourceKind::Agent
                       : subject.kind == ResourceKind::Task;
  }
};

inline const char* to_string(TriggerEvent::Kind k) {
  using K = TriggerEvent::Kind;
  switch (k) {
    case K::AgentDead: return "agent_dead";
    case K::AgentDeparted: return "agent_departed";
    case K::AgentJoined: return "agent_joined";
    case K::TaskStalled: return "task_stalled";
    case K::TaskCompleted: return "task_completed";
    case K::TaskArrived: return "task_arrived";
  }
  return "?";
}

struct Heartbeat {
  int agent = 0;
  Tick tick = 0;
};

struct StatusReport {
  int agent = 0;
  Tick tick = 0;
  RoomId location;
  std::vector<ObjectId> carrying;
  std::optional<int> task;        // task currently being worked, if any
  std::optional<double> progress; // that task's goal fraction
  std::vector<ObjectId> intentions;
};

// Control-plane order to a worker. Assign carries a task view so the worker
// can decompose without another round trip.
struct Directive {
  enum class Kind { Assign, Evict };

  Kind kind = Kind::Assign;
  int task = 0;
  int agent = 0;
  TaskObject task_view;  // populated for Assign
};

// A worker's current grab targets, broadcast so peers can avoid contention.
struct IntentionClaim {
  int agent = 0;
  Tick tick = 0;
  std::vector<ObjectId> targets;
};

using Payload =
    std::variant<Heartbeat, StatusReport, Directive, TriggerEvent, IntentionClaim>;

struct Message {
  std::uint64_t seq = 0;  // per-sender, strictly increasing; set by the bus
  EndpointId sender;
  std::optional<EndpointId> recipient;  // nullopt = broadcast
  Tick sent_tick = 0;
  Payload payload;
};

}  // namespace drama
