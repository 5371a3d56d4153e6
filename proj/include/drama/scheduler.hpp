#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "drama/affinity.hpp"
#include "drama/resource.hpp"
#include "drama/world.hpp"

namespace drama {

struct SchedulerConfig {
  int max_load = 4;
  int max_rounds = 3;
  AffinityWeights weights;

  void validate() const {
    if (max_load <= 0) throw ConfigError("/control/max_load", "must be > 0");
    if (max_rounds <= 0) throw ConfigError("/control/max_rounds", "must be > 0");
  }
};

// One scheduling epoch's output: a task -> agent mapping.
struct Assignment {
  std::int64_t epoch = 0;
  std::map<int, int> map;

  bool operator==(const Assignment& o) const { return map == o.map; }
};

struct CriticViolation {
  std::string rule;     // "live_assignee" | "max_load" | "capabilities" | "completeness"
  ResourceId offender;  // the task (or, for max_load, the agent) at fault
  std::string detail;
};

struct CriticVerdict {
  bool accepted = true;
  std::vector<CriticViolation> violations;
};

namespace detail {

inline bool capable(const AgentObject& a, const TaskObject& t) {
  return std::includes(a.capabilities.begin(), a.capabilities.end(),
                       t.required_capabilities.begin(),
                       t.required_capabilities.end());
}

// Tasks in scheduling order: priority descending, id ascending.
inline std::vector<int> ordered_tasks(const AttributeSnapshot& snap) {
  std::vector<int> ids;
  for (const auto& [ix, t] : snap.tasks) ids.push_back(ix);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    const TaskObject& ta = snap.tasks.at(a);
    const TaskObject& tb = snap.tasks.at(b);
    if (ta.priority != tb.priority) return ta.priority > tb.priority;
    return a < b;
  });
  return ids;
}

}  // namespace detail

// Greedy planner. InProgress tasks whose assignee is still live keep their
// mapping; everything else re-enters the pool and goes to the live, capable,
// non-full agent with the highest affinity (ties to the lower agent id).
// Tasks with no eligible agent stay unmapped. `forbidden` pairs are never
// produced; the repair loop uses it to steer replanning away from rejected
// entries.
inline Assignment plan(const AttributeSnapshot& snap, const WorldState& world,
                       const SchedulerConfig& cfg = {},
                       const std::set<std::pair<int, int>>& forbidden = {}) {
  Assignment out;
  std::map<int, int> load;
  std::map<int, const AgentObject*> live;
  for (const auto& [ix, a] : snap.agents) {
    if (a.live()) {
      live[ix] = &a;
      load[ix] = 0;
    }
  }

  // Pin running work first so greedy choices see the occupied capacity.
  for (const auto& [ix, t] : snap.tasks) {
    if (t.state != TaskLifecycle::InProgress || !t.assignee) continue;
    const int holder = t.assignee->index;
    if (!live.count(holder) || forbidden.count({ix, holder})) continue;
    out.map[ix] = holder;
    load[holder] += 1;
  }

  for (int ix : detail::ordered_tasks(snap)) {
    if (out.map.count(ix)) continue;
    const TaskObject& task = snap.tasks.at(ix);
    int best = -1;
    double best_score = 0.0;
    for (const auto& [aix, agent] : live) {
      if (load[aix] >= cfg.max_load) continue;
      if (forbidden.count({ix, aix})) continue;
      AgentObject view = *agent;
      view.workload = load[aix];
      auto score = affinity(view, task, world, cfg.weights);
      if (!score) continue;
      if (best < 0 || *score > best_score) {
        best = aix;
        best_score = *score;
      }
    }
    if (best >= 0) {
      out.map[ix] = best;
      load[best] += 1;
    }
  }
  return out;
}

// Rule check over a candidate mapping:
//   1. every mapped agent is registered and live,
//   2. no agent holds more than max_load tasks,
//   3. mapped agents have every required capability,
//   4. no feasible task is left unmapped (feasible: some live, capable
//      agent still has spare capacity under the candidate).
inline CriticVerdict critic(const Assignment& candidate,
                            const AttributeSnapshot& snap,
                            const SchedulerConfig& cfg = {}) {
  CriticVerdict verdict;
  std::map<int, int> load;
  for (const auto& [tix, aix] : candidate.map) {
    load[aix] += 1;
    auto agent = snap.agents.find(aix);
    if (agent == snap.agents.end() || !agent->second.live()) {
      verdict.violations.push_back(
          {"live_assignee", task_id(tix), "assignee " + std::to_string(aix) + " is not live"});
      continue;
    }
    auto task = snap.tasks.find(tix);
    if (task != snap.tasks.end() && !detail::capable(agent->second, task->second)) {
      verdict.violations.push_back(
          {"capabilities", task_id(tix), "assignee " + std::to_string(aix) + " lacks a required capability"});
    }
  }
  for (const auto& [aix, n] : load) {
    if (n > cfg.max_load) {
      verdict.violations.push_back(
          {"max_load", agent_id(aix), "holds " + std::to_string(n) + " tasks"});
    }
  }
  for (const auto& [tix, task] : snap.tasks) {
    if (candidate.map.count(tix)) continue;
    for (const auto& [aix, agent] : snap.agents) {
      if (!agent.live() || !detail::capable(agent, task)) continue;
      if (load.count(aix) && load.at(aix) >= cfg.max_load) continue;
      verdict.violations.push_back({"completeness", task_id(tix), "unmapped but feasible"});
      break;
    }
  }
  verdict.accepted = verdict.violations.empty();
  return verdict;
}

struct ScheduleOutcome {
  Assignment assignment;
  int rounds = 0;
  int repaired = 0;    // mapping entries struck during repair
  bool degraded = false;
};

// Planner-critic loop: plan, check, and replan with rejected entries
// forbidden, up to max_rounds. If no candidate passes, the last one is
// stripped of its hard violations (dead assignees, overload overflow) and
// shipped degraded; soft completeness gaps ride along.
inline ScheduleOutcome schedule_rounds(const AttributeSnapshot& snap,
                                       const WorldState& world,
                                       const SchedulerConfig& cfg = {}) {
  std::set<std::pair<int, int>> forbidden;
  ScheduleOutcome out;
  CriticVerdict verdict;
  for (int round = 1; round <= cfg.max_rounds; ++round) {
    out.rounds = round;
    out.assignment = plan(snap, world, cfg, forbidden);
    verdict = critic(out.assignment, snap, cfg);
    if (verdict.accepted) return out;
    for (const CriticViolation& v : verdict.violations) {
      if (v.offender.kind == ResourceKind::Task) {
        auto entry = out.assignment.map.find(v.offender.index);
        if (entry != out.assignment.map.end()) {
          forbidden.insert({entry->first, entry->second});
          out.repaired += 1;
        }
      } else {
        for (const auto& [tix, aix] : out.assignment.map) {
          if (aix == v.offender.index) {
            forbidden.insert({tix, aix});
            out.repaired += 1;
          }
        }
      }
    }
  }
  // Degraded fallback: drop entries violating rules 1 and 2, keep the rest.
  out.degraded = true;
  for (const CriticViolation& v : critic(out.assignment, snap, cfg).violations) {
    if (v.rule == "live_assignee") {
      out.assignment.map.erase(v.offender.index);
    } else if (v.rule == "max_load") {
      int keep = cfg.max_load;
      for (auto it = out.assignment.map.begin(); it != out.assignment.map.end();) {
        if (it->second == v.offender.index && keep-- <= 0) {
          it = out.assignment.map.erase(it);
        } else {
          ++it;
        }
      }
    }
  }
  return out;
}

}  // namespace drama
