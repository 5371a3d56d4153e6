#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include <drama/memory.hpp>
#include <drama/rng.hpp>

namespace {

drama::MemoryRecord rec(drama::Tick tick, const std::string& detail,
                        std::optional<int> task = std::nullopt) {
  drama::MemoryRecord r;
  r.tick = tick;
  r.kind = "observation";
  r.detail = detail;
  r.task = task;
  return r;
}

drama::ObservedObject seen(const std::string& id, const std::string& kind,
                           drama::ObjectPlace place) {
  return drama::ObservedObject{id, kind, place};
}

}  // namespace

TEST_CASE("the summary ring drops its oldest entry past capacity") {
  drama::MemoryStore mem;  // capacity 32
  for (int i = 0; i < 33; ++i) mem.note(rec(i, "r" + std::to_string(i)));

  CHECK(mem.summaries().size() == 32);
  CHECK(mem.discarded() == 1);
  CHECK(mem.summaries().front().detail == "r1");
  CHECK(mem.summaries().back().detail == "r32");

  drama::MemoryStore tiny(3);
  for (int i = 0; i < 10; ++i) tiny.note(rec(i, "r" + std::to_string(i)));
  CHECK(tiny.summaries().size() == 3);
  CHECK(tiny.discarded() == 7);
  CHECK(tiny.summaries().front().detail == "r7");
}

TEST_CASE("task-scoped records stay verbatim until the task closes") {
  drama::MemoryStore mem(4);
  for (int i = 0; i < 50; ++i) mem.note(rec(i, "step", 7));

  CHECK(mem.detailed(7).size() == 50);
  CHECK(mem.summaries().empty());
  CHECK(mem.discarded() == 0);
  CHECK(mem.total_records() == 50);

  mem.close_task(7);
  CHECK(mem.detailed(7).empty());
  REQUIRE(mem.summaries().size() == 1);
  CHECK(mem.summaries().front().kind == "summary");
  CHECK(mem.summaries().front().detail == "task 7: 50 records");
  CHECK(mem.summaries().front().tick == 49);
  CHECK(mem.total_records() == 1);

  mem.close_task(99);  // unknown task is a no-op
  CHECK(mem.summaries().size() == 1);
}

TEST_CASE("evicting summaries never un-learns object locations") {
  drama::MemoryStore mem(1);
  drama::Observation obs;
  obs.room = "kitchen";
  obs.visible_objects.push_back(
      seen("apple_0", "apple", drama::ObjectPlace::in_room("kitchen")));
  mem.index_observation(obs);
  mem.note(rec(1, "a"));
  mem.note(rec(2, "b"));  // evicts "a"

  CHECK(mem.discarded() == 1);
  REQUIRE(mem.find_kind("apple").has_value());
  CHECK(mem.find_kind("apple")->id == "apple_0");
}

TEST_CASE("index matches a naive room-replacement reference over random walks") {
  drama::MemoryStore mem;
  std::map<drama::ObjectId, std::pair<std::string, drama::RoomId>> naive;
  const std::vector<drama::RoomId> roomlist = {"kitchen", "livingroom", "bedroom"};
  drama::Rng rng(0x10deULL);

  for (int event = 0; event < 60; ++event) {
    drama::Observation obs;
    obs.room = roomlist[static_cast<size_t>(rng.uniform(0, 2))];
    const int count = static_cast<int>(rng.uniform(0, 3));
    std::set<int> picked;
    for (int k = 0; k < count; ++k) {
      const int ix = static_cast<int>(rng.uniform(0, 5));
      if (!picked.insert(ix).second) continue;
      obs.visible_objects.push_back(seen("obj_" + std::to_string(ix), "thing",
                                         drama::ObjectPlace::in_room(obs.room)));
    }
    mem.index_observation(obs);

    // reference: drop what the observed room no longer shows, upsert the rest
    std::set<drama::ObjectId> shown;
    for (const auto& o : obs.visible_objects) shown.insert(o.id);
    for (auto it = naive.begin(); it != naive.end();) {
      if (it->second.second == obs.room && !shown.count(it->first)) {
        it = naive.erase(it);
      } else {
        ++it;
      }
    }
    for (const auto& o : obs.visible_objects) {
      naive[o.id] = {o.kind, obs.room};
    }

    CAPTURE(event);
    REQUIRE(mem.index().size() == naive.size());
    for (const auto& [id, known] : mem.index()) {
      REQUIRE(naive.count(id) == 1);
      CHECK(naive.at(id).second == known.room);
    }
  }
}

TEST_CASE("moving an object between rooms leaves one index entry") {
  drama::MemoryStore mem;
  drama::Observation kitchen;
  kitchen.room = "kitchen";
  kitchen.visible_objects.push_back(
      seen("apple_0", "apple", drama::ObjectPlace::in_room("kitchen")));
  mem.index_observation(kitchen);

  drama::Observation bedroom;
  bedroom.room = "bedroom";
  bedroom.visible_objects.push_back(
      seen("apple_0", "apple", drama::ObjectPlace::on_surface("desk")));
  mem.index_observation(bedroom);

  CHECK(mem.index().size() == 1);
  CHECK(mem.index().at("apple_0").room == "bedroom");

  // revisiting the kitchen without seeing it must not resurrect or drop it
  drama::Observation empty_kitchen;
  empty_kitchen.room = "kitchen";
  mem.index_observation(empty_kitchen);
  CHECK(mem.index().count("apple_0") == 1);
}

TEST_CASE("find_kind ignores staged instances, find_staged returns only them") {
  drama::MemoryStore mem;
  mem.index_place("soap_2", "soap", drama::ObjectPlace::on_surface("shelf"), "bathroom");
  mem.index_place("soap_5", "soap", drama::ObjectPlace::in_container("cabinet"),
                  "bathroom");
  mem.index_place("soap_7", "soap", drama::ObjectPlace::in_room("kitchen"), "kitchen");

  REQUIRE(mem.find_kind("soap").has_value());
  CHECK(mem.find_kind("soap")->id == "soap_5");  // lowest id that is not staged
  CHECK(mem.find_kind("soap", {"soap_5"})->id == "soap_7");
  CHECK_FALSE(mem.find_kind("soap", {"soap_5", "soap_7"}).has_value());
  CHECK_FALSE(mem.find_kind("plate").has_value());

  REQUIRE(mem.find_staged("soap").has_value());
  CHECK(mem.find_staged("soap")->id == "soap_2");
  CHECK_FALSE(mem.find_staged("soap", {"soap_2"}).has_value());
}

TEST_CASE("forget_object removes exactly one entry") {
  drama::MemoryStore mem;
  mem.index_place("apple_0", "apple", drama::ObjectPlace::in_room("kitchen"), "kitchen");
  mem.index_place("apple_1", "apple", drama::ObjectPlace::in_room("kitchen"), "kitchen");
  mem.forget_object("apple_0");
  CHECK(mem.index().size() == 1);
  CHECK(mem.find_kind("apple")->id == "apple_1");
}
