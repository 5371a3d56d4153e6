#pragma once

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "drama/actions.hpp"
#include "drama/errors.hpp"
#include "drama/goal.hpp"
#include "drama/ids.hpp"

#include <json.hpp>

namespace drama {

// Where an object instance currently rests. Exactly one place at all times;
// the step() resolver is the only mutator, so conservation is structural.
struct ObjectPlace {
  enum class Where { Room, Container, Surface, Carried };

  Where where = Where::Room;
  std::string id;   // room / container / surface id
  int agent = -1;   // for Carried

  auto operator<=>(const ObjectPlace&) const = default;

  static ObjectPlace in_room(RoomId r) { return {Where::Room, std::move(r), -1}; }
  static ObjectPlace in_container(ContainerId c) {
    return {Where::Container, std::move(c), -1};
  }
  static ObjectPlace on_surface(SurfaceId s) {
    return {Where::Surface, std::move(s), -1};
  }
  static ObjectPlace carried_by(int agent) { return {Where::Carried, {}, agent}; }
};

struct WorldObject {
  ObjectKind kind;
  ObjectPlace place;

  auto operator<=>(const WorldObject&) const = default;
};

struct Container {
  RoomId room;
  bool open = false;

  auto operator<=>(const Container&) const = default;
};

struct Surface {
  RoomId room;

  auto operator<=>(const Surface&) const = default;
};

struct EnvAgent {
  RoomId room;
  std::vector<ObjectId> carrying;
  bool dropped = false;

  auto operator<=>(const EnvAgent&) const = default;
};

// What one agent perceives from inside its current room. Closed containers
// hide their contents; carried objects are invisible to everyone else.
struct ObservedObject {
  ObjectId id;
  ObjectKind kind;
  ObjectPlace place;
};

struct Observation {
  Tick tick = 0;
  RoomId room;
  std::vector<ObservedObject> visible_objects;
  std::vector<std::pair<ContainerId, bool>> visible_containers;  // (id, open)
  std::vector<int> co_located_agents;
};

struct GoalProgressEntry {
  int satisfied = 0;
  double fraction = 0.0;
};

struct GoalStatus {
  std::vector<GoalProgressEntry> per_goal;
  bool all_done = false;
};

// The grid-house world: a connected room graph, containers, surfaces and
// loose objects, plus the embodied agents. All maps are ordered so every
// iteration is deterministic.
struct WorldState {
  Tick tick = 0;
  std::map<RoomId, std::set<RoomId>> rooms;  // adjacency, symmetric
  std::map<ContainerId, Container> containers;
  std::map<SurfaceId, Surface> surfaces;
  std::map<ObjectId, WorldObject> objects;
  std::map<int, EnvAgent> agents_env;
  RoomId spawn_room;
  int hand_capacity = 2;
  std::uint64_t rng_seed = 0;
  std::uint64_t rng_state = 0;

  // all-pairs hop distances, rebuilt at init
  std::map<RoomId, std::map<RoomId, int>> hop;

  auto operator<=>(const WorldState&) const = default;

  bool has_room(const RoomId& r) const { return rooms.count(r) > 0; }

  int hop_distance(const RoomId& a, const RoomId& b) const {
    auto it = hop.find(a);
    if (it == hop.end()) return -1;
    auto jt = it->second.find(b);
    return jt == it->second.end() ? -1 : jt->second;
  }

  // Room an object is reachable from, or the carrier's room for carried ones.
  RoomId room_of(const ObjectPlace& p) const {
    switch (p.where) {
      case ObjectPlace::Where::Room: return p.id;
      case ObjectPlace::Where::Container: {
        auto it = containers.find(p.id);
        return it == containers.end() ? RoomId{} : it->second.room;
      }
      case ObjectPlace::Where::Surface: {
        auto it = surfaces.find(p.id);
        return it == surfaces.end() ? RoomId{} : it->second.room;
      }
      case ObjectPlace::Where::Carried: {
        auto it = agents_env.find(p.agent);
        return it == agents_env.end() ? RoomId{} : it->second.room;
      }
    }
    return {};
  }

  // Visible from `room`: loose in it, on one of its surfaces, or inside one
  // of its open containers.
  bool visible_from(const RoomId& room, const ObjectId& obj) const {
    auto it = objects.find(obj);
    if (it == objects.end()) return false;
    const ObjectPlace& p = it->second.place;
    switch (p.where) {
      case ObjectPlace::Where::Room: return p.id == room;
      case ObjectPlace::Where::Surface: return room_of(p) == room;
      case ObjectPlace::Where::Container: {
        auto c = containers.find(p.id);
        return c != containers.end() && c->second.open && c->second.room == room;
      }
      case ObjectPlace::Where::Carried: return false;
    }
    return false;
  }

  void rebuild_distances() {
    hop.clear();
    for (const auto& [start, _] : rooms) {
      auto& dist = hop[start];
      dist[start] = 0;
      std::deque<RoomId> frontier{start};
      while (!frontier.empty()) {
        RoomId cur = frontier.front();
        frontier.pop_front();
        for (const RoomId& next : rooms.at(cur)) {
          if (dist.count(next)) continue;
          dist[next] = dist[cur] + 1;
          frontier.push_back(next);
        }
      }
    }
  }

  // One hop along a shortest path toward `target`; ties resolved by smallest
  // room id so movement is reproducible.
  std::optional<RoomId> next_hop(const RoomId& from, const RoomId& target) const {
    if (from == target) return std::nullopt;
    int best = -1;
    std::optional<RoomId> pick;
    for (const RoomId& n : rooms.at(from)) {
      int d = hop_distance(n, target);
      if (d < 0) continue;
      if (!pick || d < best) {
        best = d;
        pick = n;
      }
    }
    return pick;
  }
};

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j,
                                           const std::string& ptr,
                                           const char* key) {
  if (!j.contains(key)) throw ConfigError(ptr + "/" + key, "missing field");
  return j.at(key);
}

inline std::string require_string(const nlohmann::json& j, const std::string& ptr,
                                  const char* key) {
  const auto& v = require_field(j, ptr, key);
  if (!v.is_string()) throw ConfigError(ptr + "/" + key, "expected string");
  return v.get<std::string>();
}

}  // namespace detail

// Builds a world from the documented JSON schema:
//   {rooms:[{id, adjacent:[...]}], containers:[{id, room, open, contents:[...]}],
//    surfaces:[{id, room}], objects:[{id, kind, location}], spawn_room,
//    hand_capacity?}
// Identical (config, seed) yields a value-identical world.
inline WorldState init_world(const nlohmann::json& config, std::uint64_t seed) {
  WorldState w;
  w.rng_seed = seed;
  w.rng_state = seed;

  if (!config.contains("rooms") || !config.at("rooms").is_array() ||
      config.at("rooms").empty()) {
    throw ConfigError("/rooms", "at least one room required");
  }
  size_t i = 0;
  for (const auto& room : config.at("rooms")) {
    const std::string ptr = "/rooms/" + std::to_string(i++);
    RoomId id = detail::require_string(room, ptr, "id");
    if (w.rooms.count(id)) throw ConfigError(ptr + "/id", "duplicate room id");
    w.rooms[id];  // ensure present even with no adjacency
    if (room.contains("adjacent")) {
      for (const auto& adj : room.at("adjacent")) {
        w.rooms[id].insert(adj.get<std::string>());
      }
    }
  }
  // adjacency may be declared one-sided in config; symmetrize, then validate
  for (auto& [id, adj] : w.rooms) {
    for (const RoomId& n : adj) {
      if (!w.rooms.count(n)) {
        throw ConfigError("/rooms", "adjacency references unknown room: " + n);
      }
    }
  }
  {
    std::map<RoomId, std::set<RoomId>> sym = w.rooms;
    for (const auto& [id, adj] : w.rooms) {
      for (const RoomId& n : adj) sym[n].insert(id);
    }
    w.rooms = std::move(sym);
  }

  i = 0;
  if (config.contains("containers")) {
    for (const auto& c : config.at("containers")) {
      const std::string ptr = "/containers/" + std::to_string(i++);
      ContainerId id = detail::require_string(c, ptr, "id");
      RoomId room = detail::require_string(c, ptr, "room");
      if (!w.has_room(room)) throw ConfigError(ptr + "/room", "unknown room: " + room);
      if (w.containers.count(id)) throw ConfigError(ptr + "/id", "duplicate container id");
      w.containers[id] = Container{room, c.value("open", false)};
    }
  }

  i = 0;
  if (config.contains("surfaces")) {
    for (const auto& s : config.at("surfaces")) {
      const std::string ptr = "/surfaces/" + std::to_string(i++);
      SurfaceId id = detail::require_string(s, ptr, "id");
      RoomId room = detail::require_string(s, ptr, "room");
      if (!w.has_room(room)) throw ConfigError(ptr + "/room", "unknown room: " + room);
      if (w.surfaces.count(id) || w.containers.count(id)) {
        throw ConfigError(ptr + "/id", "duplicate surface id");
      }
      w.surfaces[id] = Surface{room};
    }
  }

  i = 0;
  if (config.contains("objects")) {
    for (const auto& o : config.at("objects")) {
      const std::string ptr = "/objects/" + std::to_string(i++);
      ObjectId id = detail::require_string(o, ptr, "id");
      ObjectKind kind = detail::require_string(o, ptr, "kind");
      std::string loc = detail::require_string(o, ptr, "location");
      if (w.objects.count(id)) throw ConfigError(ptr + "/id", "duplicate object id");
      ObjectPlace place;
      if (w.has_room(loc)) {
        place = ObjectPlace::in_room(loc);
      } else if (w.containers.count(loc)) {
        place = ObjectPlace::in_container(loc);
      } else if (w.surfaces.count(loc)) {
        place = ObjectPlace::on_surface(loc);
      } else {
        throw ConfigError(ptr + "/location", "unknown location: " + loc);
      }
      w.objects[id] = WorldObject{kind, place};
    }
  }

  // container "contents" lists are a readability aid; they must agree with
  // the objects' own location fields
  i = 0;
  if (config.contains("containers")) {
    for (const auto& c : config.at("containers")) {
      const std::string ptr = "/containers/" + std::to_string(i++);
      if (!c.contains("contents")) continue;
      ContainerId id = c.at("id").get<std::string>();
      for (const auto& obj : c.at("contents")) {
        ObjectId oid = obj.get<std::string>();
        auto it = w.objects.find(oid);
        if (it == w.objects.end() ||
            it->second.place != ObjectPlace::in_container(id)) {
          throw ConfigError(ptr + "/contents",
                            "object not located in this container: " + oid);
        }
      }
    }
  }

  w.spawn_room = detail::require_string(config, "", "spawn_room");
  if (!w.has_room(w.spawn_room)) {
    throw ConfigError("/spawn_room", "unknown room: " + w.spawn_room);
  }
  w.hand_capacity = config.value("hand_capacity", 2);
  if (w.hand_capacity < 1) throw ConfigError("/hand_capacity", "must be >= 1");

  w.rebuild_distances();
  for (const auto& [id, _] : w.rooms) {
    if (w.hop_distance(w.spawn_room, id) < 0) {
      throw ConfigError("/rooms", "room graph is not connected at: " + id);
    }
  }
  return w;
}

// Adds an embodied agent at the spawn room (or an explicit room).
inline void add_agent(WorldState& w, int agent, Tick /*tick*/,
                      std::optional<RoomId> room = std::nullopt) {
  if (w.agents_env.count(agent)) throw DuplicateAgent(agent);
  RoomId r = room.value_or(w.spawn_room);
  if (!w.has_room(r)) throw ConfigError("/spawn", "unknown room: " + r);
  w.agents_env[agent] = EnvAgent{r, {}, false};
}

// Silent removal: the agent stops acting and anything it carried falls
// loose in its room, so every goal stays reachable.
inline void drop_agent(WorldState& w, int agent, Tick /*tick*/) {
  auto it = w.agents_env.find(agent);
  if (it == w.agents_env.end() || it->second.dropped) throw UnknownAgent(agent);
  for (const ObjectId& obj : it->second.carrying) {
    w.objects.at(obj).place = ObjectPlace::in_room(it->second.room);
  }
  it->second.carrying.clear();
  it->second.dropped = true;
}

// Simultaneous submission, sequential resolution in ascending agent id.
// Conflicting grabs on one instance: the lowest id wins, later ones fail
// with "contended".
inline std::map<int, ActionOutcome> step(
    WorldState& w, const std::map<int, PrimitiveAction>& actions) {
  std::map<int, ActionOutcome> outcomes;
  std::set<ObjectId> grabbed_this_tick;

  for (const auto& [agent, action] : actions) {
    auto it = w.agents_env.find(agent);
    if (it == w.agents_env.end() || it->second.dropped) throw UnknownAgent(agent);
    EnvAgent& env = it->second;

    auto fail = [&](std::string why) {
      outcomes.emplace(agent, ActionOutcome::fail(agent, action, std::move(why)));
    };
    auto ok = [&]() { outcomes.emplace(agent, ActionOutcome::ok(agent, action)); };

    switch (action.type) {
      case PrimitiveAction::Type::Idle:
        ok();
        break;
      case PrimitiveAction::Type::MoveTo: {
        if (!w.has_room(action.target)) {
          fail("invalid_target");
          break;
        }
        if (auto next = w.next_hop(env.room, action.target)) env.room = *next;
        ok();
        break;
      }
      case PrimitiveAction::Type::Open:
      case PrimitiveAction::Type::Close: {
        auto c = w.containers.find(action.target);
        if (c == w.containers.end()) {
          fail("invalid_target");
          break;
        }
        if (c->second.room != env.room) {
          fail("not_colocated");
          break;
        }
        c->second.open = action.type == PrimitiveAction::Type::Open;
        ok();
        break;
      }
      case PrimitiveAction::Type::Grab: {
        auto obj = w.objects.find(action.target);
        if (obj == w.objects.end()) {
          fail("invalid_target");
          break;
        }
        if (grabbed_this_tick.count(action.target)) {
          fail("contended");
          break;
        }
        if (!w.visible_from(env.room, action.target)) {
          fail("not_visible");
          break;
        }
        if (static_cast<int>(env.carrying.size()) >= w.hand_capacity) {
          fail("hands_full");
          break;
        }
        obj->second.place = ObjectPlace::carried_by(agent);
        env.carrying.push_back(action.target);
        grabbed_this_tick.insert(action.target);
        ok();
        break;
      }
      case PrimitiveAction::Type::PutOn:
      case PrimitiveAction::Type::PutIn: {
        auto carried = std::find(env.carrying.begin(), env.carrying.end(),
                                 action.target);
        if (carried == env.carrying.end()) {
          fail("not_carrying");
          break;
        }
        if (action.type == PrimitiveAction::Type::PutOn) {
          auto s = w.surfaces.find(action.dest);
          if (s == w.surfaces.end()) {
            fail("invalid_target");
            break;
          }
          if (s->second.room != env.room) {
            fail("not_colocated");
            break;
          }
          w.objects.at(action.target).place = ObjectPlace::on_surface(action.dest);
        } else {
          auto c = w.containers.find(action.dest);
          if (c == w.containers.end()) {
            fail("invalid_target");
            break;
          }
          if (c->second.room != env.room) {
            fail("not_colocated");
            break;
          }
          if (!c->second.open) {
            fail("closed");
            break;
          }
          w.objects.at(action.target).place = ObjectPlace::in_container(action.dest);
        }
        env.carrying.erase(carried);
        ok();
        break;
      }
    }
  }

  w.tick += 1;
  return outcomes;
}

// Counts goal-kind instances on the goal surface, capped at the requirement.
inline GoalStatus goal_progress(const WorldState& w,
                                const std::vector<GoalPredicate>& goals) {
  GoalStatus status;
  status.all_done = true;
  for (const GoalPredicate& g : goals) {
    int placed = 0;
    for (const auto& [id, obj] : w.objects) {
      if (obj.kind == g.object_kind &&
          obj.place == ObjectPlace::on_surface(g.surface)) {
        ++placed;
      }
    }
    GoalProgressEntry entry;
    entry.satisfied = std::min(placed, g.count);
    entry.fraction = g.count == 0 ? 1.0
                                  : static_cast<double>(entry.satisfied) /
                                        static_cast<double>(g.count);
    if (entry.fraction < 1.0) status.all_done = false;
    status.per_goal.push_back(entry);
  }
  return status;
}

inline Observation observe(const WorldState& w, int agent) {
  auto it = w.agents_env.find(agent);
  if (it == w.agents_env.end()) throw UnknownAgent(agent);
  Observation obs;
  obs.tick = w.tick;
  obs.room = it->second.room;
  for (const auto& [id, obj] : w.objects) {
    if (w.visible_from(obs.room, id)) {
      obs.visible_objects.push_back({id, obj.kind, obj.place});
    }
  }
  for (const auto& [id, c] : w.containers) {
    if (c.room == obs.room) obs.visible_containers.emplace_back(id, c.open);
  }
  for (const auto& [other, env] : w.agents_env) {
    if (other != agent && !env.dropped && env.room == obs.room) {
      obs.co_located_agents.push_back(other);
    }
  }
  return obs;
}

// FNV-1a over a canonical dump; pinned by the fixture digest test.
inline std::string world_digest(const WorldState& w) {
  std::string dump;
  for (const auto& [id, adj] : w.rooms) {
    dump += "R" + id + ":";
    for (const auto& n : adj) dump += n + ",";
  }
  for (const auto& [id, c] : w.containers) {
    dump += "C" + id + "@" + c.room + (c.open ? "+" : "-");
  }
  for (const auto& [id, s] : w.surfaces) dump += "S" + id + "@" + s.room;
  for (const auto& [id, o] : w.objects) {
    dump += "O" + id + "#" + o.kind + "@" + std::to_string(int(o.place.where)) +
            o.place.id;
  }
  dump += "P" + w.spawn_room;
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace drama
