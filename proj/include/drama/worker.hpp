#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "drama/memory.hpp"
#include "drama/messages.hpp"
#include "drama/resource.hpp"
#include "drama/world.hpp"

namespace drama {

// Static layout every agent knows up front: rooms and what furniture sits
// where. Object locations are deliberately absent; those must be observed.
struct HouseMap {
  std::map<RoomId, std::set<RoomId>> rooms;
  std::map<ContainerId, RoomId> containers;
  std::map<SurfaceId, RoomId> surfaces;
  std::map<RoomId, std::map<RoomId, int>> hop;

  int hop_distance(const RoomId& a, const RoomId& b) const {
    auto it = hop.find(a);
    if (it == hop.end()) return -1;
    auto jt = it->second.find(b);
    return jt == it->second.end() ? -1 : jt->second;
  }
};

inline HouseMap house_map(const WorldState& w) {
  HouseMap h;
  h.rooms = w.rooms;
  for (const auto& [id, c] : w.containers) h.containers[id] = c.room;
  for (const auto& [id, s] : w.surfaces) h.surfaces[id] = s.room;
  h.hop = w.hop;
  return h;
}

// One step of a task plan. Locate is the open-ended one: it rewrites itself
// into a concrete fetch chain once memory can point at an instance.
struct Subgoal {
  enum class Kind { Locate, GoTo, OpenUp, Grab, Deliver };

  Kind kind = Kind::Locate;
  ObjectKind object_kind;   // Locate / Grab / Deliver
  RoomId room;              // GoTo
  ContainerId container;    // OpenUp
  SurfaceId surface;        // Deliver
  ObjectId hint;            // preferred instance for Grab
  bool staged = false;      // hint may be taken from a surface (last resort)

  auto operator<=>(const Subgoal&) const = default;

  static Subgoal locate(ObjectKind k) {
    Subgoal s;
    s.kind = Kind::Locate;
    s.object_kind = std::move(k);
    return s;
  }
  static Subgoal go_to(RoomId r) {
    Subgoal s;
    s.kind = Kind::GoTo;
    s.room = std::move(r);
    return s;
  }
  static Subgoal open_up(ContainerId c) {
    Subgoal s;
    s.kind = Kind::OpenUp;
    s.container = std::move(c);
    return s;
  }
  static Subgoal grab(ObjectKind k, ObjectId hint = {}) {
    Subgoal s;
    s.kind = Kind::Grab;
    s.object_kind = std::move(k);
    s.hint = std::move(hint);
    return s;
  }
  static Subgoal deliver(ObjectKind k, SurfaceId surf) {
    Subgoal s;
    s.kind = Kind::Deliver;
    s.object_kind = std::move(k);
    s.surface = std::move(surf);
    return s;
  }
};

using SubtaskQueue = std::deque<Subgoal>;

inline const char* to_string(Subgoal::Kind k) {
  switch (k) {
    case Subgoal::Kind::Locate: return "locate";
    case Subgoal::Kind::GoTo: return "go_to";
    case Subgoal::Kind::OpenUp: return "open_up";
    case Subgoal::Kind::Grab: return "grab";
    case Subgoal::Kind::Deliver: return "deliver";
  }
  return "?";
}

// Breaks a fetch-and-place task into per-unit subgoal chains. Instances
// already in hand deliver first; instances memory can place get a concrete
// go-open-grab chain; the rest start with Locate. Progress already banked
// in the task view shrinks the remaining unit count.
inline SubtaskQueue decompose(
    const TaskObject& task, const MemoryStore& memory, const HouseMap& house,
    const std::vector<std::pair<ObjectId, ObjectKind>>& carried) {
  if (task.goal.kind != GoalPredicate::Kind::OnSurface) {
    throw UnknownGoalKind(std::to_string(static_cast<int>(task.goal.kind)));
  }
  SubtaskQueue q;
  const ObjectKind& kind = task.goal.object_kind;
  const SurfaceId& surface = task.goal.surface;
  int remaining = task.goal.count -
                  static_cast<int>(std::llround(task.progress * task.goal.count));
  for (const auto& [id, k] : carried) {
    if (remaining <= 0) break;
    if (k != kind) continue;
    q.push_back(Subgoal::deliver(kind, surface));
    remaining -= 1;
  }
  std::set<ObjectId> targeted;
  while (remaining > 0) {
    auto known = memory.find_kind(kind, targeted);
    if (known) {
      targeted.insert(known->id);
      q.push_back(Subgoal::go_to(known->room));
      if (known->place.where == ObjectPlace::Where::Container) {
        q.push_back(Subgoal::open_up(known->place.id));
      }
      q.push_back(Subgoal::grab(kind, known->id));
    } else {
      q.push_back(Subgoal::locate(kind));
    }
    q.push_back(Subgoal::deliver(kind, surface));
    remaining -= 1;
  }
  return q;
}

// Reference worker policy: owns a few task views, keeps an episodic memory,
// plans per-unit fetch chains, and emits one primitive action per tick.
// Grab targets are broadcast as intention claims; the lower agent id wins
// any overlap, so two workers never chase the same instance for long.
class Worker {
 public:
  Worker(int id, std::set<Capability> capabilities, HouseMap house,
         RoomId start_room, int hand_capacity = 2, int max_load = 4)
      : id_(id),
        capabilities_(std::move(capabilities)),
        house_(std::move(house)),
        room_(std::move(start_room)),
        hand_capacity_(hand_capacity),
        max_load_(max_load) {}

  int id() const { return id_; }
  const std::set<Capability>& capabilities() const { return capabilities_; }
  const MemoryStore& memory() const { return memory_; }
  MemoryStore& memory() { return memory_; }
  const SubtaskQueue& queue() const { return queue_; }
  std::optional<int> current_task() const { return current_; }
  const std::map<int, TaskObject>& owned() const { return owned_; }
  const std::vector<std::pair<ObjectId, ObjectKind>>& carried() const {
    return carried_;
  }

  void receive(const Message& m, Tick now) {
    if (const auto* d = std::get_if<Directive>(&m.payload)) {
      if (d->kind == Directive::Kind::Assign) {
        accept_takeover(d->task_view);
        memory_.note({now, "directive", "assign task " + std::to_string(d->task),
                      d->task});
      } else {
        memory_.note({now, "directive", "evict task " + std::to_string(d->task),
                      d->task});
        drop_task(d->task);
      }
    } else if (const auto* c = std::get_if<IntentionClaim>(&m.payload)) {
      peer_claims_[c->agent] = *c;
    }
  }

  // Adopts a task view pushed by the control plane. A worker at max_load
  // refuses outright; the caller treats that as a planning defect.
  void accept_takeover(const TaskObject& view) {
    const int ix = view.id.index;
    if (!owned_.count(ix) && static_cast<int>(owned_.size()) >= max_load_) {
      throw RefuseOverload(id_, static_cast<int>(owned_.size()), max_load_);
    }
    owned_[ix] = view;
    if (current_ && *current_ == ix) rebuild_ = true;
  }

  void drop_task(int task) {
    if (!owned_.erase(task)) return;
    fractions_.erase(task);
    memory_.close_task(task);
    if (current_ && *current_ == task) {
      current_.reset();
      queue_.clear();
    }
  }

  // One decision step. `fractions` carries the satisfied fraction of every
  // owned task's goal as currently perceivable; tasks at 1.0 close locally.
  PrimitiveAction act(const Observation& obs,
                      const std::map<int, double>& fractions, Tick now) {
    room_ = obs.room;
    ingest(obs, now);

    for (const auto& [task, f] : fractions) {
      if (!owned_.count(task)) continue;
      fractions_[task] = f;
      owned_[task].progress = f;
      if (f >= 1.0) drop_task(task);
    }

    pick_current();
    if (current_ && (rebuild_ || queue_.empty() || over_provisioned())) {
      queue_ = decompose(owned_.at(*current_), memory_, house_, carried_);
      rebuild_ = false;
    }

    intention_.reset();
    if (auto shed = maybe_shed(obs)) return *shed;
    if (!current_) return PrimitiveAction::idle();
    return run_queue(obs, now);
  }

  void on_outcome(const ActionOutcome& out, Tick now) {
    const PrimitiveAction& a = out.action;
    if (a.type == PrimitiveAction::Type::Grab) {
      if (out.success) {
        carried_.emplace_back(a.target, intention_kind_);
        memory_.forget_object(a.target);
        if (!queue_.empty() && queue_.front().kind == Subgoal::Kind::Grab) {
          queue_.pop_front();
        }
        memory_.note({now, "outcome", "grabbed " + a.target, current_});
      } else {
        memory_.note({now, "outcome",
                      "grab " + a.target + " failed: " + out.reason.value_or("?"),
                      current_});
      }
      intention_.reset();
    } else if (a.type == PrimitiveAction::Type::PutOn && out.success) {
      auto it = std::find_if(carried_.begin(), carried_.end(),
                             [&](const auto& c) { return c.first == a.target; });
      ObjectKind kind;
      if (it != carried_.end()) {
        kind = it->second;
        carried_.erase(it);
      }
      auto room = house_.surfaces.find(a.dest);
      memory_.index_place(a.target, kind, ObjectPlace::on_surface(a.dest),
                          room == house_.surfaces.end() ? room_ : room->second);
      if (!queue_.empty() && queue_.front().kind == Subgoal::Kind::Deliver &&
          queue_.front().surface == a.dest) {
        queue_.pop_front();
      }
      memory_.note({now, "outcome", "placed " + a.target + " on " + a.dest,
                    current_});
    } else if (a.type == PrimitiveAction::Type::Open && out.success) {
      if (!queue_.empty() && queue_.front().kind == Subgoal::Kind::OpenUp &&
          queue_.front().container == a.target) {
        queue_.pop_front();
      }
    }
  }

  StatusReport report(Tick now) const {
    StatusReport r;
    r.agent = id_;
    r.tick = now;
    r.location = room_;
    for (const auto& [id, _] : carried_) r.carrying.push_back(id);
    r.task = current_;
    if (current_) {
      auto it = fractions_.find(*current_);
      if (it != fractions_.end()) r.progress = it->second;
    }
    if (intention_) r.intentions.push_back(*intention_);
    return r;
  }

  Heartbeat heartbeat(Tick now) const { return Heartbeat{id_, now}; }

  IntentionClaim claim(Tick now) const {
    IntentionClaim c;
    c.agent = id_;
    c.tick = now;
    if (intention_) c.targets.push_back(*intention_);
    return c;
  }

 private:
  void ingest(const Observation& obs, Tick now) {
    memory_.index_observation(obs);
    std::set<ObjectKind> needed;
    for (const auto& [_, t] : owned_) needed.insert(t.goal.object_kind);
    bool relevant = false;
    for (const ObservedObject& o : obs.visible_objects) {
      if (needed.count(o.kind)) {
        relevant = true;
        break;
      }
    }
    MemoryRecord rec;
    rec.tick = now;
    rec.kind = "observation";
    rec.detail = obs.room + ": " + std::to_string(obs.visible_objects.size()) +
                 " objects";
    if (relevant && current_) rec.task = current_;
    memory_.note(std::move(rec));
  }

  // Highest priority first, then lowest task id; stable while owned set is
  // unchanged.
  void pick_current() {
    if (current_ && owned_.count(*current_)) return;
    current_.reset();
    queue_.clear();
    int best = -1;
    for (const auto& [ix, t] : owned_) {
      if (best < 0 || t.priority > owned_.at(best).priority) best = ix;
    }
    if (best >= 0) {
      current_ = best;
      rebuild_ = true;
    }
  }

  bool over_provisioned() const {
    if (!current_) return false;
    const TaskObject& t = owned_.at(*current_);
    const int remaining =
        t.goal.count - static_cast<int>(std::llround(t.progress * t.goal.count));
    int queued = 0;
    for (const Subgoal& s : queue_) {
      if (s.kind == Subgoal::Kind::Deliver) ++queued;
    }
    return queued > remaining;
  }

  // Eviction can leave a worker holding objects no owned task wants. They
  // go onto the nearest surface so another worker can still find and use
  // them; otherwise a takeover of a half-carried task could never finish.
  std::optional<PrimitiveAction> maybe_shed(const Observation& obs) {
    std::set<ObjectKind> needed;
    for (const auto& [_, t] : owned_) needed.insert(t.goal.object_kind);
    const ObjectId* stray = nullptr;
    for (const auto& [id, kind] : carried_) {
      if (!needed.count(kind)) {
        stray = &id;
        break;
      }
    }
    if (!stray) return std::nullopt;
    const bool blocking =
        static_cast<int>(carried_.size()) >= hand_capacity_ && current_;
    if (!blocking && current_) return std::nullopt;  // shed later, work first
    return put_somewhere(*stray, obs);
  }

  // Free a hand: drop on a co-located surface, or head for the nearest room
  // that has one (ties to the smaller room id).
  std::optional<PrimitiveAction> put_somewhere(const ObjectId& obj,
                                               const Observation& obs) const {
    for (const auto& [sid, room] : house_.surfaces) {
      if (room == obs.room) return PrimitiveAction::put_on(obj, sid);
    }
    std::optional<RoomId> target;
    int best = -1;
    for (const auto& [sid, room] : house_.surfaces) {
      const int d = house_.hop_distance(obs.room, room);
      if (d < 0) continue;
      if (!target || d < best) {
        target = room;
        best = d;
      }
    }
    if (target) return PrimitiveAction::move_to(*target);
    return std::nullopt;
  }

  // Instances memory says are already on the current task's goal surface.
  // Grabbing one of those would take the task's own progress back off.
  std::set<ObjectId> delivered_for_current() const {
    std::set<ObjectId> out;
    if (!current_) return out;
    const GoalPredicate& goal = owned_.at(*current_).goal;
    for (const auto& [id, known] : memory_.index()) {
      if (known.kind == goal.object_kind &&
          known.place == ObjectPlace::on_surface(goal.surface)) {
        out.insert(id);
      }
    }
    return out;
  }

  std::set<ObjectId> claimed_by_lower_peers(Tick now) const {
    std::set<ObjectId> out;
    for (const auto& [peer, claim] : peer_claims_) {
      if (peer >= id_ || claim.tick + 1 < now) continue;  // stale or outranked
      for (const ObjectId& t : claim.targets) out.insert(t);
    }
    return out;
  }

  PrimitiveAction run_queue(const Observation& obs, Tick now) {
    std::set<ObjectId> claimed = claimed_by_lower_peers(now);
    for (const ObjectId& id : delivered_for_current()) claimed.insert(id);
    for (int guard = 0; guard < 16 && !queue_.empty(); ++guard) {
      Subgoal& head = queue_.front();
      switch (head.kind) {
        case Subgoal::Kind::GoTo: {
          if (obs.room == head.room) {
            queue_.pop_front();
            continue;
          }
          return PrimitiveAction::move_to(head.room);
        }
        case Subgoal::Kind::OpenUp: {
          bool here = false;
          bool open = false;
          for (const auto& [cid, copen] : obs.visible_containers) {
            if (cid == head.container) {
              here = true;
              open = copen;
            }
          }
          if (!here || open) {
            queue_.pop_front();
            continue;
          }
          return PrimitiveAction::open(head.container);
        }
        case Subgoal::Kind::Grab: {
          if (static_cast<int>(carried_.size()) >= hand_capacity_) {
            // Both hands occupied; grabbing would fail forever. Park
            // something this subgoal doesn't want, or skip the grab when the
            // wanted kind is already in hand.
            const ObjectId* spare = nullptr;
            for (const auto& [oid, kind] : carried_) {
              if (kind != head.object_kind) {
                spare = &oid;
                break;
              }
            }
            if (!spare) {
              queue_.pop_front();
              continue;
            }
            if (auto park = put_somewhere(*spare, obs)) return *park;
          }
          const ObservedObject* pick = nullptr;
          for (const ObservedObject& o : obs.visible_objects) {
            if (o.kind != head.object_kind || claimed.count(o.id)) continue;
            // Never pick off a surface: that could be another task's
            // delivered work. Hints get through only when the planner chose
            // a staged instance deliberately (full sweep found nothing), or
            // while the hinted instance is still loose.
            const bool on_surface = o.place.where == ObjectPlace::Where::Surface;
            if (o.id == head.hint && (head.staged || !on_surface)) {
              pick = &o;
              break;
            }
            if (on_surface) continue;
            if (!pick) pick = &o;
          }
          if (!pick) {
            head = Subgoal::locate(head.object_kind);
            continue;
          }
          intention_ = pick->id;
          intention_kind_ = pick->kind;
          return PrimitiveAction::grab(pick->id);
        }
        case Subgoal::Kind::Locate: {
          std::set<ObjectId> exclude = claimed;
          for (const Subgoal& s : queue_) {
            if (s.kind == Subgoal::Kind::Grab && !s.hint.empty()) {
              exclude.insert(s.hint);
            }
          }
          if (auto known = memory_.find_kind(head.object_kind, exclude)) {
            SubtaskQueue chain;
            chain.push_back(Subgoal::go_to(known->room));
            if (known->place.where == ObjectPlace::Where::Container) {
              chain.push_back(Subgoal::open_up(known->place.id));
            }
            chain.push_back(Subgoal::grab(head.object_kind, known->id));
            queue_.pop_front();
            queue_.insert(queue_.begin(), chain.begin(), chain.end());
            continue;
          }
          // explore: open what's closed here, then sweep unexplored rooms
          // round-robin from the current position
          for (const auto& [cid, open] : obs.visible_containers) {
            if (!open) return PrimitiveAction::open(cid);
          }
          explored_.insert(obs.room);
          if (auto next = next_unexplored(obs.room)) {
            return PrimitiveAction::move_to(*next);
          }
          // Full sweep found no loose instance. Taking one staged on a
          // surface is allowed only now, as it may undo someone's delivery.
          if (auto staged = memory_.find_staged(head.object_kind, exclude)) {
            SubtaskQueue chain;
            chain.push_back(Subgoal::go_to(staged->room));
            Subgoal g = Subgoal::grab(head.object_kind, staged->id);
            g.staged = true;
            chain.push_back(g);
            queue_.pop_front();
            queue_.insert(queue_.begin(), chain.begin(), chain.end());
            explored_.clear();
            continue;
          }
          explored_.clear();  // rescan next pass
          return PrimitiveAction::idle();
        }
        case Subgoal::Kind::Deliver: {
          const std::string* have = nullptr;
          for (const auto& [id, kind] : carried_) {
            if (kind == head.object_kind) {
              have = &id;
              break;
            }
          }
          if (!have) {
            queue_.push_front(Subgoal::locate(head.object_kind));
            continue;
          }
          auto room = house_.surfaces.find(head.surface);
          if (room == house_.surfaces.end()) {
            queue_.pop_front();  // misconfigured goal; nothing to do
            continue;
          }
          if (obs.room != room->second) {
            return PrimitiveAction::move_to(room->second);
          }
          return PrimitiveAction::put_on(*have, head.surface);
        }
      }
    }
    return PrimitiveAction::idle();
  }

  std::optional<RoomId> next_unexplored(const RoomId& from) const {
    std::vector<RoomId> order;
    for (const auto& [id, _] : house_.rooms) order.push_back(id);
    auto at = std::find(order.begin(), order.end(), from);
    const std::size_t start = at == order.end() ? 0 : (at - order.begin());
    for (std::size_t k = 1; k <= order.size(); ++k) {
      const RoomId& candidate = order[(start + k) % order.size()];
      if (!explored_.count(candidate)) return candidate;
    }
    return std::nullopt;
  }

  int id_;
  std::set<Capability> capabilities_;
  HouseMap house_;
  RoomId room_;
  int hand_capacity_;
  int max_load_;

  MemoryStore memory_;
  std::map<int, TaskObject> owned_;
  std::map<int, double> fractions_;
  std::optional<int> current_;
  SubtaskQueue queue_;
  bool rebuild_ = false;
  std::vector<std::pair<ObjectId, ObjectKind>> carried_;
  std::set<RoomId> explored_;
  std::optional<ObjectId> intention_;
  ObjectKind intention_kind_;
  std::map<int, IntentionClaim> peer_claims_;
};

}  // namespace drama
