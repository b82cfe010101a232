#include "rtclab/netsim/event_queue.h"

#include <string>

#include "rtclab/common/errors.h"

namespace rtclab {

std::string_view FlowName(Flow flow) {
  switch (flow) {
    case Flow::kMedia:
      return "media";
    case Flow::kFeedback:
      return "feedback";
    case Flow::kCross:
      return "cross";
  }
  return "unknown";
}

void EventQueue::Push(SimTime time, EventKind kind, uint64_t payload) {
  if (time < current_time_)
    throw StateError("event scheduled at " + std::to_string(time) +
                     " us before current time " +
                     std::to_string(current_time_) + " us");
  heap_.push(Event{time, next_seq_++, kind, payload});
}

Event EventQueue::Pop() {
  Event e = heap_.top();
  heap_.pop();
  current_time_ = e.time;
  return e;
}

void EventQueue::AdvanceTo(SimTime t) {
  if (t < current_time_)
    throw StateError("cannot move simulation clock backwards");
  if (!heap_.empty() && heap_.top().time < t)
    throw StateError("cannot skip pending events");
  current_time_ = t;
}

}  // namespace rtclab
