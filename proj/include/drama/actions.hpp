#pragma once

#include <compare>
#include <optional>
#include <string>

#include "drama/ids.hpp"

namespace drama {

// One primitive per agent per tick. A single struct instead of a variant:
// the type tag plus the two name slots cover every shape, and it keeps
// trace serialization flat.
struct PrimitiveAction {
  enum class Type { MoveTo, Open, Close, Grab, PutOn, PutIn, Idle };

  Type type = Type::Idle;
  std::string target;   // room / container / object, per type
  std::string dest;     // surface or container for PutOn / PutIn

  auto operator<=>(const PrimitiveAction&) const = default;

  static PrimitiveAction move_to(RoomId room) {
    return {Type::MoveTo, std::move(room), {}};
  }
  static PrimitiveAction open(ContainerId c) {
    return {Type::Open, std::move(c), {}};
  }
  static PrimitiveAction close(ContainerId c) {
    return {Type::Close, std::move(c), {}};
  }
  static PrimitiveAction grab(ObjectId obj) {
    return {Type::Grab, std::move(obj), {}};
  }
  static PrimitiveAction put_on(ObjectId obj, SurfaceId surface) {
    return {Type::PutOn, std::move(obj), std::move(surface)};
  }
  static PrimitiveAction put_in(ObjectId obj, ContainerId container) {
    return {Type::PutIn, std::move(obj), std::move(container)};
  }
  static PrimitiveAction idle() { return {}; }
};

inline const char* to_string(PrimitiveAction::Type t) {
  using T = PrimitiveAction::Type;
  switch (t) {
    case T::MoveTo: return "move_to";
    case T::Open: return "open";
    case T::Close: return "close";
    case T::Grab: return "grab";
    case T::PutOn: return "put_on";
    case T::PutIn: return "put_in";
    case T::Idle: return "idle";
  }
  return "?";
}

struct ActionOutcome {
  int agent = 0;
  PrimitiveAction action;
  bool success = true;
  std::optional<std::string> reason;  // present iff !success

  static ActionOutcome ok(int agent, PrimitiveAction a) {
    return {agent, std::move(a), true, std::nullopt};
  }
  static ActionOutcome fail(int agent, PrimitiveAction a, std::string why) {
    return {agent, std::move(a), false, std::move(why)};
  }
};

}  // namespace drama
