#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "covertsim/message.hpp"
#include "covertsim/time.hpp"

namespace covertsim {

// A message in flight: delivered to `to` at deliver_at. `seq` is the global
// insertion number; equal-time messages come out in insertion order, which
// is what keeps runs reproducible.
struct DelayedMessage {
  Message msg;
  ActorName from;
  ActorName to;
  Time deliver_at;
  std::uint64_t seq = 0;
};

class EventQueue {
public:
  // Takes ownership, assigns the sequence number. deliver_at must not be
  // in the past relative to the caller's clock; the engine checks that.
  void push(DelayedMessage dm);

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

  // Earliest delivery time, infinity when empty.
  Time next_time() const;

  // Pops the earliest message (FIFO among equal times).
  DelayedMessage pop();

private:
  struct Later {
    bool operator()(const DelayedMessage& a, const DelayedMessage& b) const {
      if (a.deliver_at != b.deliver_at) return a.deliver_at > b.deliver_at;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<DelayedMessage, std::vector<DelayedMessage>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace covertsim
