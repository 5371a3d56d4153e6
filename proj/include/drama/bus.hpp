#pragma once

#include <map>
#include <vector>

#include "drama/errors.hpp"
#include "drama/messages.hpp"

namespace drama {

// In-memory lockstep message fabric. A message sent at tick t becomes
// visible to drains from tick t+1, giving every exchange exactly one tick
// of latency. Per-(sender, recipient) FIFO falls out of the (tick, sender,
// seq) inbox ordering.
class Bus {
 public:
  void register_endpoint(EndpointId id) {
    endpoints_.emplace(id, Endpoint{});
  }

  bool registered(EndpointId id) const {
    auto it = endpoints_.find(id);
    return it != endpoints_.end() && it->second.active;
  }

  // Endpoint of a dropped agent: sends rejected, queued inbox discarded,
  // future drains empty.
  void deactivate(EndpointId id, Tick /*tick*/) {
    auto it = endpoints_.find(id);
    if (it == endpoints_.end()) return;
    it->second.active = false;
    it->second.inbox.clear();
  }

  void send(Message msg) {
    auto sender = endpoints_.find(msg.sender);
    if (sender == endpoints_.end() || !sender->second.active) {
      throw UnknownSender(to_string(msg.sender));
    }
    msg.seq = ++sender->second.next_seq;
    if (msg.recipient) {
      deliver(*msg.recipient, msg);
    } else {
      for (auto& [id, ep] : endpoints_) {
        if (id == msg.sender || !ep.active) continue;
        ep.inbox.emplace(Key{msg.sent_tick, msg.sender, msg.seq}, msg);
      }
    }
  }

  // All messages for `recipient` sent at ticks < up_to_tick, in
  // (tick, sender, seq) order. Removes them from the inbox.
  std::vector<Message> drain(EndpointId recipient, Tick up_to_tick) {
    auto it = endpoints_.find(recipient);
    if (it == endpoints_.end()) throw UnknownRecipient(to_string(recipient));
    std::vector<Message> out;
    if (!it->second.active) return out;
    auto& inbox = it->second.inbox;
    auto end = inbox.lower_bound(Key{up_to_tick, EndpointId::control(), 0});
    for (auto m = inbox.begin(); m != end; ++m) out.push_back(m->second);
    inbox.erase(inbox.begin(), end);
    return out;
  }

 private:
  struct Key {
    Tick tick;
    EndpointId sender;
    std::uint64_t seq;

    auto operator<=>(const Key&) const = default;
  };

  struct Endpoint {
    bool active = true;
    std::uint64_t next_seq = 0;
    std::map<Key, Message> inbox;
  };

  void deliver(EndpointId to, const Message& msg) {
    auto it = endpoints_.find(to);
    if (it == endpoints_.end()) throw UnknownRecipient(to_string(to));
    if (!it->second.active) return;  // dropped endpoints receive nothing
    it->second.inbox.emplace(Key{msg.sent_tick, msg.sender, msg.seq}, msg);
  }

  std::map<EndpointId, Endpoint> endpoints_;
};

}  // namespace drama
