#pragma once

#include <algorithm>
#include <optional>

#include "drama/resource.hpp"
#include "drama/world.hpp"

namespace drama {

struct AffinityWeights {
  double w_loc = 0.5;
  double w_load = 0.5;
};

// Hop distance from the agent's last known room to the task's goal surface.
// Unknown rooms score as one past the house diameter so they rank behind
// every reachable agent instead of dividing by zero.
inline int goal_distance(const AgentObject& agent, const TaskObject& task,
                         const WorldState& world) {
  auto surface = world.surfaces.find(task.goal.surface);
  if (surface == world.surfaces.end()) return static_cast<int>(world.rooms.size());
  int d = world.hop_distance(agent.location, surface->second.room);
  if (d < 0) d = static_cast<int>(world.rooms.size());
  return d;
}

// Match score between an agent and a task. Empty when the agent lacks a
// required capability; otherwise a proximity term plus a free-capacity term.
// Scaling both weights by the same positive factor scales every score
// equally, so relative rankings never depend on the weight magnitude.
inline std::optional<double> affinity(const AgentObject& agent,
                                      const TaskObject& task,
                                      const WorldState& world,
                                      const AffinityWeights& w = {}) {
  if (!std::includes(agent.capabilities.begin(), agent.capabilities.end(),
                     task.required_capabilities.begin(),
                     task.required_capabilities.end())) {
    return std::nullopt;
  }
  const int d = goal_distance(agent, task, world);
  return w.w_loc / (1.0 + d) + w.w_load / (1.0 + agent.workload);
}

}  // namespace drama
