#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "drama/control_plane.hpp"
#include "drama/goal.hpp"
#include "drama/world.hpp"

namespace drama {

enum class DynamicsKind { None, Dropout, Addition };

inline const char* to_string(DynamicsKind k) {
  switch (k) {
    case DynamicsKind::None: return "none";
    case DynamicsKind::Dropout: return "dropout";
    case DynamicsKind::Addition: return "addition";
  }
  return "?";
}

struct AgentSpec {
  int id = 0;
  std::set<Capability> capabilities;
  std::optional<RoomId> room;  // spawn room when absent
};

struct TaskSpec {
  int id = 0;
  GoalPredicate goal;
  std::set<Capability> required_capabilities;
  int priority = 0;
};

// Everything one episode needs, minus the per-run knobs (allocator, seed,
// trace) that the CLI fills in.
struct ScenarioSpec {
  std::string name;
  nlohmann::json world_config;
  std::vector<AgentSpec> agents;
  std::vector<TaskSpec> tasks;
  DynamicsKind dynamics = DynamicsKind::None;
  Tick change_min = 5;
  Tick change_max = 10;
  std::optional<AgentSpec> joiner;  // the agent Addition introduces
  Tick step_budget = 200;
  ControlConfig control;

  AllocatorKind allocator = AllocatorKind::Drama;
  std::uint64_t seed = 0;

  void validate() const {
    control.validate();
    if (agents.empty()) throw ConfigError("/agents", "at least one agent required");
    if (dynamics == DynamicsKind::Dropout && agents.size() < 2) {
      throw ConfigError("/agents", "dropout needs at least 2 initial agents");
    }
    if (dynamics == DynamicsKind::Addition && !joiner) {
      throw ConfigError("/dynamics/agent", "addition needs the joining agent's spec");
    }
    if (change_min < 0 || change_max < change_min) {
      throw ConfigError("/dynamics/change_window", "need 0 <= min <= max");
    }
    if (step_budget <= 0) throw ConfigError("/step_budget", "must be > 0");
  }
};

namespace detail {

inline std::set<Capability> parse_caps(const nlohmann::json& j, const std::string& ptr,
                                       const char* key) {
  std::set<Capability> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw ConfigError(ptr + "/" + key, "expected array");
  for (const auto& c : j.at(key)) out.insert(c.get<std::string>());
  return out;
}

inline AgentSpec parse_agent(const nlohmann::json& j, const std::string& ptr) {
  AgentSpec a;
  if (!j.contains("id") || !j.at("id").is_number_integer()) {
    throw ConfigError(ptr + "/id", "expected integer id");
  }
  a.id = j.at("id").get<int>();
  if (a.id < 0) throw ConfigError(ptr + "/id", "must be >= 0");
  a.capabilities = parse_caps(j, ptr, "capabilities");
  if (j.contains("room")) a.room = j.at("room").get<std::string>();
  return a;
}

inline GoalPredicate parse_goal(const nlohmann::json& j, const std::string& ptr) {
  GoalPredicate g;
  const std::string kind = require_string(j, ptr, "kind");
  if (kind != "on_surface") {
    throw ConfigError(ptr + "/kind", "unsupported goal kind: " + kind);
  }
  g.kind = GoalPredicate::Kind::OnSurface;
  g.object_kind = require_string(j, ptr, "object_kind");
  g.surface = require_string(j, ptr, "surface");
  g.count = j.value("count", 1);
  if (g.count < 1) throw ConfigError(ptr + "/count", "must be >= 1");
  return g;
}

}  // namespace detail

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("/", "invalid json in " + path + ": " + e.what());
  }
  return j;
}

inline AllocatorKind parse_allocator(const std::string& s,
                                     const std::string& ptr) {
  if (s == "drama") return AllocatorKind::Drama;
  if (s == "static") return AllocatorKind::Static;
  if (s == "completion") return AllocatorKind::CompletionRealloc;
  throw ConfigError(ptr, "unknown allocator: " + s);
}

// Parses the control block: {heartbeat_period, suspect_after, dead_after,
// stall_after, max_load, w_loc, w_load, max_rounds}, all optional. Keys
// missing from the block keep their value in `base`.
inline ControlConfig parse_control(const nlohmann::json& j,
                                   ControlConfig base = {}) {
  ControlConfig c = base;
  c.monitor.heartbeat_period = j.value("heartbeat_period", c.monitor.heartbeat_period);
  c.monitor.suspect_after = j.value("suspect_after", c.monitor.suspect_after);
  c.monitor.dead_after = j.value("dead_after", c.monitor.dead_after);
  c.monitor.stall_after = j.value("stall_after", c.monitor.stall_after);
  c.scheduler.max_load = j.value("max_load", c.scheduler.max_load);
  c.scheduler.max_rounds = j.value("max_rounds", c.scheduler.max_rounds);
  c.scheduler.weights.w_loc = j.value("w_loc", c.scheduler.weights.w_loc);
  c.scheduler.weights.w_load = j.value("w_load", c.scheduler.weights.w_load);
  c.validate();
  return c;
}

// Loads a scenario file. The world may be inline (object) or a path
// relative to the scenario file's directory.
inline ScenarioSpec load_scenario(const std::string& path) {
  const nlohmann::json j = load_json_file(path);
  ScenarioSpec spec;
  spec.name = j.value("name", std::filesystem::path(path).stem().string());

  if (!j.contains("world")) throw ConfigError("/world", "missing field");
  if (j.at("world").is_string()) {
    const auto base = std::filesystem::path(path).parent_path();
    spec.world_config = load_json_file((base / j.at("world").get<std::string>()).string());
  } else if (j.at("world").is_object()) {
    spec.world_config = j.at("world");
  } else {
    throw ConfigError("/world", "expected object or path string");
  }

  if (!j.contains("agents") || !j.at("agents").is_array() || j.at("agents").empty()) {
    throw ConfigError("/agents", "at least one agent required");
  }
  std::set<int> agent_ids;
  std::size_t i = 0;
  for (const auto& a : j.at("agents")) {
    const std::string ptr = "/agents/" + std::to_string(i++);
    AgentSpec parsed = detail::parse_agent(a, ptr);
    if (!agent_ids.insert(parsed.id).second) {
      throw ConfigError(ptr + "/id", "duplicate agent id");
    }
    spec.agents.push_back(std::move(parsed));
  }

  if (!j.contains("tasks") || !j.at("tasks").is_array() || j.at("tasks").empty()) {
    throw ConfigError("/tasks", "at least one task required");
  }
  std::set<int> task_ids;
  i = 0;
  for (const auto& t : j.at("tasks")) {
    const std::string ptr = "/tasks/" + std::to_string(i++);
    TaskSpec ts;
    if (!t.contains("id") || !t.at("id").is_number_integer()) {
      throw ConfigError(ptr + "/id", "expected integer id");
    }
    ts.id = t.at("id").get<int>();
    if (!task_ids.insert(ts.id).second) {
      throw ConfigError(ptr + "/id", "duplicate task id");
    }
    if (!t.contains("goal")) throw ConfigError(ptr + "/goal", "missing field");
    ts.goal = detail::parse_goal(t.at("goal"), ptr + "/goal");
    ts.required_capabilities = detail::parse_caps(t, ptr, "required_capabilities");
    ts.priority = t.value("priority", 0);
    spec.tasks.push_back(std::move(ts));
  }

  if (j.contains("dynamics")) {
    const auto& d = j.at("dynamics");
    const std::string kind = detail::require_string(d, "/dynamics", "kind");
    if (kind == "none") {
      spec.dynamics = DynamicsKind::None;
    } else if (kind == "dropout") {
      spec.dynamics = DynamicsKind::Dropout;
    } else if (kind == "addition") {
      spec.dynamics = DynamicsKind::Addition;
    } else {
      throw ConfigError("/dynamics/kind", "unknown dynamics: " + kind);
    }
    if (d.contains("change_window")) {
      const auto& w = d.at("change_window");
      if (!w.is_array() || w.size() != 2) {
        throw ConfigError("/dynamics/change_window", "expected [min, max]");
      }
      spec.change_min = w.at(0).get<Tick>();
      spec.change_max = w.at(1).get<Tick>();
    }
    if (d.contains("agent")) {
      spec.joiner = detail::parse_agent(d.at("agent"), "/dynamics/agent");
      if (agent_ids.count(spec.joiner->id)) {
        throw ConfigError("/dynamics/agent/id", "id collides with an initial agent");
      }
    }
  }

  spec.step_budget = j.value("step_budget", spec.step_budget);
  if (j.contains("control")) spec.control = parse_control(j.at("control"));
  if (j.contains("allocator")) {
    spec.allocator = parse_allocator(j.at("allocator").get<std::string>(), "/allocator");
  }
  spec.seed = j.value("seed", spec.seed);

  // Goals must be jointly satisfiable: per object kind, the world has to
  // hold at least as many instances as all tasks of that kind demand.
  std::map<ObjectKind, int> demanded;
  for (const TaskSpec& t : spec.tasks) demanded[t.goal.object_kind] += t.goal.count;
  std::map<ObjectKind, int> available;
  if (spec.world_config.contains("objects")) {
    for (const auto& o : spec.world_config.at("objects")) {
      if (o.contains("kind")) available[o.at("kind").get<std::string>()] += 1;
    }
  }
  for (const auto& [kind, need] : demanded) {
    if (available[kind] < need) {
      throw ConfigError("/tasks", "goals demand " + std::to_string(need) + " x " +
                                      kind + " but the world holds " +
                                      std::to_string(available[kind]));
    }
  }

  spec.validate();
  return spec;
}

}  // namespace drama
