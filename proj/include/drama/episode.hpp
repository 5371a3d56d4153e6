#pragma once

#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <vector>

#include <json.hpp>

#include "drama/control_plane.hpp"
#include "drama/json_io.hpp"
#include "drama/rng.hpp"
#include "drama/scenario.hpp"
#include "drama/worker.hpp"

namespace drama {

struct EpisodeResult {
  bool success = false;
  std::int64_t as = 0;            // finishing agent's active ticks
  std::int64_t ts = 0;            // active ticks summed over all agents
  Tick ticks_used = 0;
  std::int64_t assignment_epochs = 0;
  std::vector<TriggerEvent> events;
  int finisher = -1;
  Tick change_tick = -1;          // -1 when the scenario has no dynamics
  int dropped_agent = -1;
  bool dropped_held_task = false;
  std::uint64_t episode_seed = 0;
};

namespace detail {

// Replays this tick's successful deliveries in resolution order (ascending
// agent id) against the pre-step satisfied counts to name the agent whose
// delivery crossed the last outstanding goal unit.
inline int find_finisher(const WorldState& world,
                         const std::vector<TaskSpec>& tasks,
                         std::map<int, int> satisfied,
                         const std::map<int, ActionOutcome>& outcomes) {
  auto all_done = [&]() {
    for (const TaskSpec& t : tasks) {
      if (satisfied.at(t.id) < t.goal.count) return false;
    }
    return true;
  };
  for (const auto& [agent, out] : outcomes) {
    if (!out.success || out.action.type != PrimitiveAction::Type::PutOn) continue;
    auto obj = world.objects.find(out.action.target);
    if (obj == world.objects.end()) continue;
    for (const TaskSpec& t : tasks) {
      if (t.goal.object_kind != obj->second.kind) continue;
      if (t.goal.surface != out.action.dest) continue;
      if (satisfied.at(t.id) >= t.goal.count) continue;
      satisfied.at(t.id) += 1;
      break;
    }
    if (all_done()) return agent;
  }
  return -1;
}

}  // namespace detail

// One full lockstep episode. Deterministic given (spec, episode_seed):
// scenario dynamics (change tick, dropout victim) come from a SplitMix64
// stream seeded with episode_seed, and every other component is RNG-free.
inline EpisodeResult run_episode(const ScenarioSpec& spec,
                                 std::uint64_t episode_seed,
                                 std::ostream* trace = nullptr) {
  spec.validate();
  EpisodeResult result;
  result.episode_seed = episode_seed;

  WorldState world = init_world(spec.world_config, episode_seed);
  Bus bus;
  bus.register_endpoint(EndpointId::control());
  ControlPlane control(spec.control, spec.allocator, &bus);

  const HouseMap house = house_map(world);
  std::map<int, std::unique_ptr<Worker>> workers;
  std::set<int> dropped;

  auto spawn = [&](const AgentSpec& a, AgentLifecycle state, Tick now) {
    const RoomId room = a.room.value_or(world.spawn_room);
    add_agent(world, a.id, now, room);
    bus.register_endpoint(EndpointId::agent(a.id));
    AgentObject obj;
    obj.id = agent_id(a.id);
    obj.capabilities = a.capabilities;
    obj.location = room;
    obj.hand_capacity = world.hand_capacity;
    obj.last_heartbeat = now;
    control.registry().register_agent(obj);
    if (state == AgentLifecycle::Active) {
      control.registry().transition_agent(a.id, AgentLifecycle::Active);
    }
    workers[a.id] = std::make_unique<Worker>(a.id, a.capabilities, house, room,
                                             world.hand_capacity,
                                             spec.control.scheduler.max_load);
  };

  for (const AgentSpec& a : spec.agents) spawn(a, AgentLifecycle::Active, 0);
  for (const TaskSpec& t : spec.tasks) {
    TaskObject obj;
    obj.id = task_id(t.id);
    obj.goal = t.goal;
    obj.required_capabilities = t.required_capabilities;
    obj.priority = t.priority;
    control.registry().register_task(obj);
  }

  // Scenario dynamics draw from the episode stream up front so the change
  // tick and the victim are identical across allocators under paired seeds.
  Rng rng(episode_seed);
  if (spec.dynamics != DynamicsKind::None) {
    result.change_tick = rng.uniform(spec.change_min, spec.change_max);
  }
  if (spec.dynamics == DynamicsKind::Dropout) {
    const auto& victim =
        spec.agents[static_cast<std::size_t>(rng.uniform(0, spec.agents.size() - 1))];
    result.dropped_agent = victim.id;
  }

  std::size_t traced_epochs = 0;
  auto flush_epochs = [&]() {
    if (!trace) return;
    const auto& log = control.epoch_log();
    for (; traced_epochs < log.size(); ++traced_epochs) {
      *trace << log[traced_epochs].dump() << "\n";
    }
  };
  if (trace) {
    *trace << nlohmann::json{{"scenario", spec.name},
                             {"allocator", to_string(spec.allocator)},
                             {"seed", episode_seed},
                             {"world_digest", world_digest(world)}}
                  .dump()
           << "\n";
  }

  std::map<int, std::int64_t> steps_alive;
  std::vector<TriggerEvent> pending_injections;
  Tick final_tick = spec.step_budget - 1;

  for (Tick t = 0; t < spec.step_budget; ++t) {
    ControlPlane::TickReport rep =
        control.process_tick(t, world, pending_injections);
    pending_injections.clear();
    for (const TriggerEvent& e : rep.events) result.events.push_back(e);
    if (t == 0) control.schedule(world, 0, "initial");
    flush_epochs();

    // pre-step satisfied units, for finisher attribution
    std::map<int, int> pre_satisfied;
    for (const TaskSpec& task : spec.tasks) {
      pre_satisfied[task.id] =
          goal_progress(world, {task.goal}).per_goal.at(0).satisfied;
    }

    std::map<int, PrimitiveAction> actions;
    for (auto& [id, worker] : workers) {
      if (dropped.count(id)) continue;
      for (const Message& m : bus.drain(EndpointId::agent(id), t)) {
        worker->receive(m, t);
      }
      const Observation obs = observe(world, id);
      std::map<int, double> fractions;
      for (const auto& [tix, view] : worker->owned()) {
        fractions[tix] = goal_progress(world, {view.goal}).per_goal.at(0).fraction;
      }
      actions[id] = worker->act(obs, fractions, t);
      bus.send({0, EndpointId::agent(id), EndpointId::control(), t,
                worker->heartbeat(t)});
      bus.send({0, EndpointId::agent(id), EndpointId::control(), t,
                worker->report(t)});
      bus.send({0, EndpointId::agent(id), std::nullopt, t, worker->claim(t)});
    }

    const std::map<int, ActionOutcome> outcomes = step(world, actions);
    for (const auto& [id, out] : outcomes) {
      workers.at(id)->on_outcome(out, t);
      steps_alive[id] += 1;
    }

    if (trace) {
      nlohmann::json ja = nlohmann::json::object();
      nlohmann::json jo = nlohmann::json::object();
      for (const auto& [id, a] : actions) ja[std::to_string(id)] = to_json(a);
      for (const auto& [id, o] : outcomes) jo[std::to_string(id)] = to_json(o);
      nlohmann::json fractions = nlohmann::json::array();
      for (const TaskSpec& task : spec.tasks) {
        fractions.push_back(
            goal_progress(world, {task.goal}).per_goal.at(0).fraction);
      }
      *trace << nlohmann::json{{"tick", t},
                               {"actions", std::move(ja)},
                               {"outcomes", std::move(jo)},
                               {"goal_fractions", std::move(fractions)}}
                    .dump()
             << "\n";
    }

    bool done = true;
    for (const TaskSpec& task : spec.tasks) {
      if (goal_progress(world, {task.goal}).per_goal.at(0).fraction < 1.0) {
        done = false;
        break;
      }
    }
    if (done) {
      result.success = true;
      result.finisher =
          detail::find_finisher(world, spec.tasks, pre_satisfied, outcomes);
      if (result.finisher < 0) result.finisher = outcomes.begin()->first;
      final_tick = t;
      break;
    }

    if (t == result.change_tick) {
      if (spec.dynamics == DynamicsKind::Dropout) {
        // Silent crash at end of tick: carried objects fall loose, the bus
        // endpoint goes dark, and only missing heartbeats reveal the loss.
        for (const auto& [tix, task] : control.registry().tasks()) {
          if (task.assignee && task.assignee->index == result.dropped_agent &&
              goal_progress(world, {task.goal}).per_goal.at(0).fraction < 1.0) {
            result.dropped_held_task = true;
          }
        }
        drop_agent(world, result.dropped_agent, t);
        bus.deactivate(EndpointId::agent(result.dropped_agent), t);
        dropped.insert(result.dropped_agent);
      } else if (spec.dynamics == DynamicsKind::Addition) {
        spawn(*spec.joiner, AgentLifecycle::Joining, t);
        pending_injections.push_back(
            {t + 1, TriggerEvent::Kind::AgentJoined, agent_id(spec.joiner->id)});
      }
    }
  }

  result.ticks_used = result.success ? final_tick + 1 : spec.step_budget;
  result.assignment_epochs = control.epochs();
  for (const auto& [id, n] : steps_alive) result.ts += n;
  if (result.success && steps_alive.count(result.finisher)) {
    result.as = steps_alive.at(result.finisher);
  }

  flush_epochs();
  if (trace) {
    *trace << nlohmann::json{{"success", result.success},
                             {"finisher", result.finisher},
                             {"as", result.as},
                             {"ts", result.ts},
                             {"ticks_used", result.ticks_used},
                             {"assignment_epochs", result.assignment_epochs}}
                  .dump()
           << "\n";
  }
  return result;
}

}  // namespace drama
