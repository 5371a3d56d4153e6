#pragma once

#include <string>

#include <json.hpp>

#include "drama/actions.hpp"
#include "drama/messages.hpp"
#include "drama/resource.hpp"

namespace drama {

// Stable JSON field names for trace logs and debugging dumps. Keys are
// serialized in alphabetical order by the json library, which is part of
// the byte-reproducibility contract.

inline nlohmann::json to_json(const ResourceId& id) {
  return std::string(to_string(id.kind)) + ":" + std::to_string(id.index);
}

inline nlohmann::json to_json(const GoalPredicate& g) {
  return {{"kind", "on_surface"},
          {"object_kind", g.object_kind},
          {"surface", g.surface},
          {"count", g.count}};
}

inline nlohmann::json to_json(const AgentObject& a) {
  nlohmann::json caps = nlohmann::json::array();
  for (const Capability& c : a.capabilities) caps.push_back(c);
  return {{"id", a.id.index},
          {"capabilities", std::move(caps)},
          {"location", a.location},
          {"carrying", a.carrying},
          {"workload", a.workload},
          {"state", to_string(a.state)},
          {"last_heartbeat", a.last_heartbeat},
          {"policy", a.policy}};
}

inline nlohmann::json to_json(const TaskObject& t) {
  nlohmann::json caps = nlohmann::json::array();
  for (const Capability& c : t.required_capabilities) caps.push_back(c);
  nlohmann::json j = {{"id", t.id.index},
                      {"goal", to_json(t.goal)},
                      {"required_capabilities", std::move(caps)},
                      {"priority", t.priority},
                      {"state", to_string(t.state)},
                      {"progress", t.progress},
                      {"last_progress_tick", t.last_progress_tick}};
  if (t.assignee) j["assignee"] = t.assignee->index;
  return j;
}

inline nlohmann::json to_json(const TriggerEvent& e) {
  return {{"tick", e.tick}, {"kind", to_string(e.kind)}, {"subject", to_json(e.subject)}};
}

inline nlohmann::json to_json(const PrimitiveAction& a) {
  nlohmann::json j = {{"type", to_string(a.type)}};
  if (!a.target.empty()) j["target"] = a.target;
  if (!a.dest.empty()) j["dest"] = a.dest;
  return j;
}

inline nlohmann::json to_json(const ActionOutcome& o) {
  nlohmann::json j = {{"success", o.success}};
  if (o.reason) j["reason"] = *o.reason;
  return j;
}

}  // namespace drama
