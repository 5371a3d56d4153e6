#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace drama {

using Tick = std::int64_t;

// Rooms, containers, surfaces, objects and capability tags are all named
// entities coming from config files, so plain strings keep the whole world
// human-readable in traces.
using RoomId = std::string;
using ContainerId = std::string;
using SurfaceId = std::string;
using ObjectId = std::string;
using ObjectKind = std::string;
using Capability = std::string;

enum class ResourceKind { Agent, Task };

inline const char* to_string(ResourceKind k) {
  return k == ResourceKind::Agent ? "agent" : "task";
}

// Identity of a registered resource object. (kind, index) is unique within
// a registry.
struct ResourceId {
  ResourceKind kind = ResourceKind::Agent;
  int index = 0;

  auto operator<=>(const ResourceId&) const = default;
};

inline ResourceId agent_id(int index) { return {ResourceKind::Agent, index}; }
inline ResourceId task_id(int index) { return {ResourceKind::Task, index}; }

inline std::string to_string(const ResourceId& r) {
  return std::string(to_string(r.kind)) + ":" + std::to_string(r.index);
}

// Bus endpoints: the control plane plus one endpoint per agent. Control
// sorts before agents so per-tick drain order is stable.
struct EndpointId {
  enum class Kind { Control, Agent } kind = Kind::Control;
  int index = 0;

  auto operator<=>(const EndpointId&) const = default;

  static EndpointId control() { return {Kind::Control, 0}; }
  static EndpointId agent(int ix) { return {Kind::Agent, ix}; }
};

inline std::string to_string(const EndpointId& e) {
  if (e.kind == EndpointId::Kind::Control) return "control";
  return "agent:" + std::to_string(e.index);
}

}  // namespace drama
