#pragma once

#include <array>
#include <string>

#include "drama/errors.hpp"

namespace drama {

// Agent phases. Suspect sits between Active and Dead so a late heartbeat can
// rescue an agent before its tasks are evicted.
enum class AgentLifecycle { Joining, Active, Suspect, Dead, Departed };

// Task phases. Completed is terminal; Evicted tasks go back through Assigned.
enum class TaskLifecycle { Pending, Assigned, InProgress, Completed, Evicted };

inline const char* to_string(AgentLifecycle s) {
  switch (s) {
    case AgentLifecycle::Joining: return "joining";
    case AgentLifecycle::Active: return "active";
    case AgentLifecycle::Suspect: return "suspect";
    case AgentLifecycle::Dead: return "dead";
    case AgentLifecycle::Departed: return "departed";
  }
  return "?";
}

inline const char* to_string(TaskLifecycle s) {
  switch (s) {
    case TaskLifecycle::Pending: return "pending";
    case TaskLifecycle::Assigned: return "assigned";
    case TaskLifecycle::InProgress: return "in_progress";
    case TaskLifecycle::Completed: return "completed";
    case TaskLifecycle::Evicted: return "evicted";
  }
  return "?";
}

constexpr bool legal_transition(AgentLifecycle from, AgentLifecycle to) {
  using L = AgentLifecycle;
  switch (from) {
    case L::Joining: return to == L::Active;
    case L::Active: return to == L::Suspect || to == L::Departed;
    case L::Suspect:
      return to == L::Active || to == L::Dead || to == L::Departed;
    case L::Dead: return false;
    case L::Departed: return false;
  }
  return false;
}

constexpr bool legal_transition(TaskLifecycle from, TaskLifecycle to) {
  using L = TaskLifecycle;
  switch (from) {
    case L::Pending: return to == L::Assigned;
    case L::Assigned: return to == L::InProgress || to == L::Evicted;
    case L::InProgress: return to == L::Evicted || to == L::Completed;
    case L::Completed: return false;
    case L::Evicted: return to == L::Assigned;
  }
  return false;
}

template <typename State>
void require_legal(State from, State to) {
  if (!legal_transition(from, to)) {
    throw IllegalTransition(to_string(from), to_string(to));
  }
}

constexpr std::array<AgentLifecycle, 5> kAgentStates = {
    AgentLifecycle::Joining, AgentLifecycle::Active, AgentLifecycle::Suspect,
    AgentLifecycle::Dead, AgentLifecycle::Departed};

constexpr std::array<TaskLifecycle, 5> kTaskStates = {
    TaskLifecycle::Pending, TaskLifecycle::Assigned, TaskLifecycle::InProgress,
    TaskLifecycle::Completed, TaskLifecycle::Evicted};

}  // namespace drama
