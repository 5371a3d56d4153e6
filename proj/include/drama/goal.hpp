#pragma once

#include <compare>

#include "drama/ids.hpp"

namespace drama {

// Fetch-and-place goal: `count` objects of `object_kind` resting on
// `surface`. The only goal grammar the reference workers understand.
struct GoalPredicate {
  enum class Kind { OnSurface };

  Kind kind = Kind::OnSurface;
  ObjectKind object_kind;
  SurfaceId surface;
  int count = 1;

  auto operator<=>(const GoalPredicate&) const = default;
};

}  // namespace drama
