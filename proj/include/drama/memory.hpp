#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "drama/world.hpp"

namespace drama {

struct MemoryRecord {
  Tick tick = 0;
  std::string kind;            // "observation" | "outcome" | "directive"
  std::string detail;
  std::optional<int> task;     // owning task, for retention tiering

  auto operator<=>(const MemoryRecord&) const = default;
};

// An object instance the agent has seen and believes is still there.
struct KnownObject {
  ObjectId id;
  ObjectKind kind;
  ObjectPlace place;
  RoomId room;  // room of `place` at indexing time
};

// Two-tier episodic memory plus a location index.
//
// Records scoped to a task stay verbatim until that task closes; everything
// else lands in a fixed-capacity summary ring that drops its oldest entry
// and counts the loss. The location index is maintained independently of
// record retention: evicting a summary never un-learns where an object is.
class MemoryStore {
 public:
  explicit MemoryStore(std::size_t summary_capacity = 32)
      : cap_(summary_capacity) {}

  void note(MemoryRecord rec) {
    if (rec.task) {
      detailed_[*rec.task].push_back(std::move(rec));
      return;
    }
    if (ring_.size() == cap_) {
      ring_.pop_front();
      discarded_ += 1;
    }
    ring_.push_back(std::move(rec));
  }

  // Task closed (completed or dropped): its verbatim records collapse into
  // one summary line.
  void close_task(int task) {
    auto it = detailed_.find(task);
    if (it == detailed_.end()) return;
    MemoryRecord digest;
    digest.tick = it->second.empty() ? 0 : it->second.back().tick;
    digest.kind = "summary";
    digest.detail = "task " + std::to_string(task) + ": " +
                    std::to_string(it->second.size()) + " records";
    detailed_.erase(it);
    note(std::move(digest));
  }

  const std::vector<MemoryRecord>& detailed(int task) const {
    static const std::vector<MemoryRecord> empty;
    auto it = detailed_.find(task);
    return it == detailed_.end() ? empty : it->second;
  }
  const std::deque<MemoryRecord>& summaries() const { return ring_; }
  std::size_t discarded() const { return discarded_; }

  std::size_t total_records() const {
    std::size_t n = ring_.size();
    for (const auto& [_, v] : detailed_) n += v.size();
    return n;
  }

  // Folds one observation into the index with room-replacement semantics:
  // entries previously placed in the observed room that are no longer
  // visible get dropped, everything visible gets upserted.
  void index_observation(const Observation& obs) {
    std::set<ObjectId> seen;
    for (const ObservedObject& o : obs.visible_objects) seen.insert(o.id);
    for (auto it = index_.begin(); it != index_.end();) {
      if (it->second.room == obs.room && !seen.count(it->first)) {
        it = index_.erase(it);
      } else {
        ++it;
      }
    }
    for (const ObservedObject& o : obs.visible_objects) {
      index_[o.id] = KnownObject{o.id, o.kind, o.place, obs.room};
    }
  }

  void index_place(const ObjectId& id, const ObjectKind& kind,
                   const ObjectPlace& place, const RoomId& room) {
    index_[id] = KnownObject{id, kind, place, room};
  }

  void forget_object(const ObjectId& id) { index_.erase(id); }

  // Lowest-id known instance that is NOT sitting on a surface. Surface
  // placements are usually someone's delivered work; taking one can silently
  // undo another task, so retrieval planning ignores them here and asks for
  // find_staged explicitly once everything else is exhausted.
  std::optional<KnownObject> find_kind(const ObjectKind& kind,
                                       const std::set<ObjectId>& exclude = {}) const {
    for (const auto& [id, known] : index_) {
      if (known.kind != kind || exclude.count(id)) continue;
      if (known.place.where == ObjectPlace::Where::Surface) continue;
      return known;
    }
    return std::nullopt;
  }

  // Lowest-id known instance that IS staged on a surface; the last resort.
  std::optional<KnownObject> find_staged(const ObjectKind& kind,
                                         const std::set<ObjectId>& exclude = {}) const {
    for (const auto& [id, known] : index_) {
      if (known.kind != kind || exclude.count(id)) continue;
      if (known.place.where != ObjectPlace::Where::Surface) continue;
      return known;
    }
    return std::nullopt;
  }

  const std::map<ObjectId, KnownObject>& index() const { return index_; }

 private:
  std::size_t cap_;
  std::map<int, std::vector<MemoryRecord>> detailed_;
  std::deque<MemoryRecord> ring_;
  std::size_t discarded_ = 0;
  std::map<ObjectId, KnownObject> index_;
};

}  // namespace drama
