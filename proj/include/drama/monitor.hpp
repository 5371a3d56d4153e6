#pragma once

#include <map>
#include <vector>

#include "drama/messages.hpp"
#include "drama/resource.hpp"

namespace drama {

struct MonitorConfig {
  Tick heartbeat_period = 1;
  Tick suspect_after = 3;
  Tick dead_after = 6;
  Tick stall_after = 15;

  void validate() const {
    if (!(0 < heartbeat_period && heartbeat_period <= suspect_after &&
          suspect_after < dead_after)) {
      throw ConfigError("/control",
                        "need 0 < heartbeat_period <= suspect_after < dead_after");
    }
    if (stall_after <= 0) throw ConfigError("/control/stall_after", "must be > 0");
  }
};

// Liveness and progress watchdog. Owns only the stall-emission flags; agent
// heartbeat state lives on the resource objects themselves.
class Monitor {
 public:
  explicit Monitor(MonitorConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }

  const MonitorConfig& config() const { return cfg_; }

  // Records a heartbeat. A fresh beat rescues a Suspect agent back to
  // Active without emitting any event. Dead and Departed agents keep the
  // recorded tick but cannot be rescued.
  void record_heartbeat(Registry& registry, int agent, Tick tick) const {
    AgentObject& a = registry.agent(agent);
    const Tick previous = a.last_heartbeat;
    a.last_heartbeat = std::max(previous, tick);
    if (a.state == AgentLifecycle::Suspect && tick > previous) {
      registry.transition_agent(agent, AgentLifecycle::Active);
    }
  }

  // One failure sweep. Crossing dead_after takes Active agents through
  // Suspect to Dead (two legal edges) and emits AgentDead; crossing only
  // suspect_after moves Active to Suspect silently. InProgress tasks whose
  // progress has not advanced for stall_after ticks emit TaskStalled once
  // per stall. Re-running at the same tick emits nothing new.
  std::vector<TriggerEvent> detect_failures(Registry& registry, Tick now) {
    std::vector<TriggerEvent> events;
    for (const auto& [ix, agent] : registry.agents()) {
      const Tick silent = now - agent.last_heartbeat;
      if (agent.live() && silent >= cfg_.dead_after) {
        if (registry.agent(ix).state == AgentLifecycle::Active) {
          registry.transition_agent(ix, AgentLifecycle::Suspect);
        }
        registry.transition_agent(ix, AgentLifecycle::Dead);
        events.push_back({now, TriggerEvent::Kind::AgentDead, agent_id(ix)});
      } else if (agent.state == AgentLifecycle::Active &&
                 silent >= cfg_.suspect_after) {
        registry.transition_agent(ix, AgentLifecycle::Suspect);
      }
    }
    for (const auto& [ix, task] : registry.tasks()) {
      if (task.state != TaskLifecycle::InProgress) continue;
      if (now - task.last_progress_tick < cfg_.stall_after) continue;
      auto flagged = stall_flags_.find(ix);
      if (flagged != stall_flags_.end() &&
          flagged->second == task.last_progress_tick) {
        continue;  // already reported this stall
      }
      stall_flags_[ix] = task.last_progress_tick;
      events.push_back({now, TriggerEvent::Kind::TaskStalled, task_id(ix)});
    }
    return events;
  }

 private:
  MonitorConfig cfg_;
  std::map<int, Tick> stall_flags_;  // task -> last_progress_tick at emission
};

}  // namespace drama
