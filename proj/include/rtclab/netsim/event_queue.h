#ifndef RTCLAB_NETSIM_EVENT_QUEUE_H_
#define RTCLAB_NETSIM_EVENT_QUEUE_H_

#include <cstdint>
#include <queue>
#include <vector>

#include "rtclab/netsim/sim_types.h"

namespace rtclab {

enum class EventKind : uint8_t {
  kArrival,          // packet reaches the far end of a link
  kCrossSend,        // cross-traffic source emits one packet
  kSegmentBoundary,  // trace segment changes
};

struct Event {
  SimTime time = 0;
  uint64_t seq = 0;  // insertion order, breaks ties
  EventKind kind = EventKind::kArrival;
  uint64_t payload = 0;
};

// Min-time priority queue; equal times pop in insertion order.
class EventQueue {
 public:
  // Throws StateError when scheduling into the past.
  void Push(SimTime time, EventKind kind, uint64_t payload);

  bool Empty() const { return heap_.empty(); }
  std::size_t Size() const { return heap_.size(); }
  const Event& Top() const { return heap_.top(); }

  // Pops the earliest event and advances current_time to it.
  Event Pop();

  SimTime current_time() const { return current_time_; }
  // Moves the clock forward without dispatching; t must not precede any
  // pending event.
  void AdvanceTo(SimTime t);

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time)
        return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  uint64_t next_seq_ = 0;
  SimTime current_time_ = 0;
};

}  // namespace rtclab

#endif  // RTCLAB_NETSIM_EVENT_QUEUE_H_
