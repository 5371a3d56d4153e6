#pragma once

#include <stdexcept>
#include <string>

#include "drama/ids.hpp"

namespace drama {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lifecycle edge outside the legal set. Carries the offending pair as
// strings so both state machines share one type.
struct IllegalTransition : Error {
  IllegalTransition(std::string from_, std::string to_)
      : Error("illegal transition: " + from_ + " -> " + to_),
        from(std::move(from_)),
        to(std::move(to_)) {}
  std::string from;
  std::string to;
};

struct UnknownAgent : Error {
  explicit UnknownAgent(int index)
      : Error("unknown agent: " + std::to_string(index)), index(index) {}
  int index;
};

struct UnknownTask : Error {
  explicit UnknownTask(int index)
      : Error("unknown task: " + std::to_string(index)), index(index) {}
  int index;
};

struct UnknownSubject : Error {
  explicit UnknownSubject(ResourceId id)
      : Error(std::string("unknown event subject: ") + to_string(id.kind) +
              ":" + std::to_string(id.index)),
        id(id) {}
  ResourceId id;
};

struct DanglingReference : Error {
  DanglingReference(int task_index, int agent_index)
      : Error("task " + std::to_string(task_index) +
              " references unregistered agent " + std::to_string(agent_index)),
        task_index(task_index),
        agent_index(agent_index) {}
  int task_index;
  int agent_index;
};

struct DuplicateAgent : Error {
  explicit DuplicateAgent(int index)
      : Error("agent already present: " + std::to_string(index)), index(index) {}
  int index;
};

// Configuration problem; `pointer` is a JSON-pointer-ish path to the
// offending field.
struct ConfigError : Error {
  ConfigError(std::string pointer_, const std::string& message)
      : Error("config error at " + pointer_ + ": " + message),
        pointer(std::move(pointer_)) {}
  std::string pointer;
};

struct UnknownGoalKind : Error {
  explicit UnknownGoalKind(const std::string& kind)
      : Error("unsupported goal kind: " + kind) {}
};

struct RefuseOverload : Error {
  RefuseOverload(int agent_index, int load, int max_load)
      : Error("agent " + std::to_string(agent_index) + " at load " +
              std::to_string(load) + "/" + std::to_string(max_load) +
              " refuses another task"),
        agent_index(agent_index) {}
  int agent_index;
};

struct UnknownSender : Error {
  explicit UnknownSender(const std::string& who)
      : Error("sender not registered on bus: " + who) {}
};

struct UnknownRecipient : Error {
  explicit UnknownRecipient(const std::string& who)
      : Error("recipient not registered on bus: " + who) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("io error: " + what) {}
};

}  // namespace drama
