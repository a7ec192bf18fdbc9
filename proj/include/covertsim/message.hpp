#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace covertsim {

using ActorName = std::string;

enum class MsgKind {
  rtt_request,
  rtt_response,
  dns_query,
  dns_response,
  https_request,
  https_response,
};

const char* msg_kind_name(MsgKind k);
MsgKind msg_kind_from_name(const std::string& name);

// Timestamp token as carried on the wire: a tick count of the sending
// device's clock, read noise included. Low 8 bits are the covert
// embedding site.
using Timestamp = std::uint64_t;

struct RttRequest {
  Timestamp ts;
};

struct RttResponse {
  Timestamp request_ts;   // echoed verbatim
  Timestamp response_ts;  // responder clock reading, possibly carrying a byte
};

// One covert file chunk. total_chunks lets the receiver detect completion.
struct ChunkPayload {
  int file = 0;
  int chunk = 0;
  int total_chunks = 0;
  std::uint64_t bytes = 0;
};

// Receipt for one chunk. file_complete reports whether the receiver holds
// every chunk of the file at response time: the response completing a file
// carries it, and so does any response to a retransmitted chunk of an
// already complete file, which is what makes a lost completion report
// recoverable through ordinary retransmission.
struct ChunkAck {
  int file = 0;
  int chunk = 0;
  bool file_complete = false;
};

using Payload = std::variant<std::monostate, RttRequest, RttResponse,
                             ChunkPayload, ChunkAck>;

struct Message {
  MsgKind kind;
  ActorName src;  // end-to-end originator
  ActorName dst;  // end-to-end destination; relays route hop by hop
  std::uint64_t size_bytes = 0;
  Payload payload;
};

}  // namespace covertsim
