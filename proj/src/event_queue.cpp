#include "covertsim/event_queue.hpp"

#include "covertsim/errors.hpp"

namespace covertsim {

const char* msg_kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::rtt_request: return "rtt_request";
    case MsgKind::rtt_response: return "rtt_response";
    case MsgKind::dns_query: return "dns_query";
    case MsgKind::dns_response: return "dns_response";
    case MsgKind::https_request: return "https_request";
    case MsgKind::https_response: return "https_response";
  }
  throw InternalError("unreachable message kind");
}

MsgKind msg_kind_from_name(const std::string& name) {
  if (name == "rtt_request") return MsgKind::rtt_request;
  if (name == "rtt_response") return MsgKind::rtt_response;
  if (name == "dns_query") return MsgKind::dns_query;
  if (name == "dns_response") return MsgKind::dns_response;
  if (name == "https_request") return MsgKind::https_request;
  if (name == "https_response") return MsgKind::https_response;
  throw ConfigurationError("unknown message kind: " + name);
}

void EventQueue::push(DelayedMessage dm) {
  if (dm.deliver_at.is_infinite())
    throw InternalError("cannot schedule a message at infinity");
  dm.seq = next_seq_++;
  heap_.push(std::move(dm));
}

Time EventQueue::next_time() const {
  return heap_.empty() ? Time::infinity() : heap_.top().deliver_at;
}

DelayedMessage EventQueue::pop() {
  if (heap_.empty()) throw InternalError("pop from empty event queue");
  DelayedMessage dm = heap_.top();
  heap_.pop();
  return dm;
}

}  // namespace covertsim
