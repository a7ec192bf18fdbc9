#include "covertsim/tunnel/scenario.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "covertsim/engine.hpp"
#include "covertsim/errors.hpp"

namespace covertsim::tunnel {

namespace {

constexpr std::uint64_t kQueryBytes = 64;
constexpr std::uint64_t kQueryResponseBytes = 128;
constexpr std::uint64_t kRequestBytes = 256;
constexpr std::uint64_t kRequestResponseBytes = 1024;
constexpr std::uint64_t kAckBytes = 64;

const ActorName kRelay = "relay";
const ActorName kDnsService = "dns-service";
const ActorName kWebService = "web-service";
const ActorName kAlice = "alice";
const ActorName kBob = "bob";

MsgKind query_kind(Channel ch) {
  return ch == Channel::query ? MsgKind::dns_query : MsgKind::https_request;
}

MsgKind response_kind(MsgKind query) {
  switch (query) {
    case MsgKind::dns_query: return MsgKind::dns_response;
    case MsgKind::https_request: return MsgKind::https_response;
    default: throw InternalError("not a query kind");
  }
}

ActorName service_for(Channel ch) {
  return ch == Channel::query ? kDnsService : kWebService;
}

// Forwards by end-to-end destination; the boundary tap lives on its
// public-side hops.
class Relay : public Actor {
public:
  explicit Relay(std::set<ActorName> reachable)
      : Actor(kRelay, "relay"), reachable_(std::move(reachable)) {}

  void on_message(const Message& msg, ActorContext& ctx) override {
    if (!reachable_.count(msg.dst)) {
      ctx.mark_unmatched();
      return;
    }
    ctx.send(msg.dst, msg);
  }

private:
  std::set<ActorName> reachable_;
};

// Public endpoint: answers plain queries itself, hands covert chunks to the
// receiver it unknowingly fronts and relays the receiver's responses back
// to the corporate side.
class PublicService : public Actor {
public:
  PublicService(ActorName name, MsgKind query, std::uint64_t response_bytes)
      : Actor(std::move(name), "public-service"),
        query_(query),
        response_bytes_(response_bytes) {}

  void on_message(const Message& msg, ActorContext& ctx) override {
    if (msg.kind == query_) {
      if (const auto* chunk = std::get_if<ChunkPayload>(&msg.payload)) {
        // Covert chunk: forward to the receiver as our own query.
        Message fwd{query_, name(), kBob, msg.size_bytes, *chunk};
        ctx.send(kBob, std::move(fwd));
        return;
      }
      Message resp{response_kind(query_), name(), msg.src, response_bytes_,
                   std::monostate{}};
      ctx.send(kRelay, std::move(resp));
      return;
    }
    if (msg.kind == response_kind(query_) &&
        std::holds_alternative<ChunkAck>(msg.payload)) {
      // Receiver's covert response rides back to the tunnel client.
      Message fwd{msg.kind, name(), kAlice, msg.size_bytes, msg.payload};
      ctx.send(kRelay, std::move(fwd));
      return;
    }
    ctx.mark_unmatched();
  }

private:
  MsgKind query_;
  std::uint64_t response_bytes_;
};

// Background client: waits, emits one query, repeats. The first timer
// firing at t = 0 only samples the initial wait so every generator
// desynchronises through its own stream.
class TrafficGenerator : public Actor {
public:
  TrafficGenerator(ActorName name, Channel channel, Distribution wait)
      : Actor(std::move(name), "traffic-generator"),
        channel_(channel),
        wait_(wait) {
    cycle_ = &add_timer("cycle");
    cycle_->arm(Time::zero());
  }

  void on_timer(Timer& timer, ActorContext& ctx) override {
    if (started_) {
      const bool q = channel_ == Channel::query;
      Message m{query_kind(channel_), name(), service_for(channel_),
                q ? kQueryBytes : kRequestBytes, std::monostate{}};
      ctx.send(kRelay, std::move(m));
    }
    started_ = true;
    timer.arm(Time(wait_.sample(ctx.stream())));
  }

private:
  Channel channel_;
  Distribution wait_;
  Timer* cycle_ = nullptr;
  bool started_ = false;
};

// The insider. Splits each file into channel-tagged chunks, posts them one
// per wait through the tunnel, keeps a retransmission timer per outstanding
// chunk and moves to the next file only when a response marked complete
// confirms the receiver has every chunk of the current one.
class Alice : public Actor {
public:
  Alice(const TunnelConfig& cfg)
      : Actor(kAlice, "exfiltrator"),
        wait_(Distribution::normal_truncated(cfg.mean_wait, cfg.sd_wait)),
        timeout_(cfg.effective_retransmit_timeout()),
        cap_(cfg.retransmit_cap) {
    for (auto size : cfg.effective_file_sizes()) {
      files_.push_back(FilePlan{
          size, plan_chunks(size, cfg.chunk_size, cfg.control_fraction)});
    }
    post_ = &add_timer("post");
    if (!files_.empty()) post_->arm(Time::zero());
  }

  bool gave_up() const { return gave_up_; }

  void on_timer(Timer& timer, ActorContext& ctx) override {
    if (&timer == post_) {
      if (!started_) {
        // Warm-up firing: only samples the initial wait.
        started_ = true;
        timer.arm(Time(wait_.sample(ctx.stream())));
        return;
      }
      post_next_chunk(ctx);
      return;
    }
    // Retransmission timeout for chunk timer.data. cap_ bounds the number
    // of retransmissions per chunk beyond the original emission.
    const auto idx = static_cast<std::size_t>(timer.data);
    if (attempts_[idx] - 1 >= cap_) {
      gave_up_ = true;
      timer.disarm();
      return;
    }
    ++attempts_[idx];
    emit_chunk(idx, ctx);
    timer.arm(timeout_);
  }

  void on_message(const Message& msg, ActorContext& ctx) override {
    const auto* ack = std::get_if<ChunkAck>(&msg.payload);
    if (ack == nullptr) {
      ctx.mark_unmatched();
      return;
    }
    if (current_ >= files_.size() ||
        ack->file != static_cast<int>(current_))
      return;  // stale response from an already finished file
    const auto idx = static_cast<std::size_t>(ack->chunk);
    if (idx < chunk_timers_.size() && chunk_timers_[idx] != nullptr)
      chunk_timers_[idx]->disarm();
    if (!ack->file_complete) return;

    // Receiver holds the whole file: close it out.
    for (auto* t : chunk_timers_)
      if (t != nullptr) t->disarm();
    ctx.monitor().record(ctx.now(), kTagFileAcked,
                         static_cast<double>(files_[current_].bytes));
    ++current_;
    next_chunk_ = 0;
    if (current_ < files_.size())
      post_->arm(Time(wait_.sample(ctx.stream())));
  }

private:
  struct FilePlan {
    std::uint64_t bytes;
    std::vector<ChunkSpec> chunks;
  };

  void post_next_chunk(ActorContext& ctx) {
    const FilePlan& f = files_[current_];
    const std::size_t idx = next_chunk_++;
    if (!exfil_started_) {
      exfil_started_ = true;
      ctx.monitor().record(ctx.now(), kTagExfilStart);
    }
    attempts_.resize(std::max(attempts_.size(), idx + 1), 0);
    attempts_[idx] = 1;
    emit_chunk(idx, ctx);
    // One retransmission timer per chunk slot, reused across files.
    while (chunk_timers_.size() <= idx) {
      Timer& t = add_timer("retransmit-" + std::to_string(chunk_timers_.size()));
      t.data = chunk_timers_.size();
      chunk_timers_.push_back(&t);
    }
    chunk_timers_[idx]->arm(timeout_);
    if (next_chunk_ < f.chunks.size())
      post_->arm(Time(wait_.sample(ctx.stream())));
    else
      post_->disarm();  // resumes when the file is confirmed complete
  }

  void emit_chunk(std::size_t idx, ActorContext& ctx) {
    const FilePlan& f = files_[current_];
    const ChunkSpec& spec = f.chunks[idx];
    ChunkPayload payload{static_cast<int>(current_), static_cast<int>(idx),
                         static_cast<int>(f.chunks.size()), spec.bytes};
    Message m{query_kind(spec.channel), name(), service_for(spec.channel),
              spec.bytes, payload};
    ctx.send(kRelay, std::move(m));
  }

  Distribution wait_;
  Time timeout_;
  int cap_;
  std::vector<FilePlan> files_;
  Timer* post_ = nullptr;
  std::vector<Timer*> chunk_timers_;  // slot = chunk index in current file
  std::vector<int> attempts_;
  std::size_t current_ = 0;
  std::size_t next_chunk_ = 0;
  bool started_ = false;
  bool exfil_started_ = false;
  bool gave_up_ = false;
};

// The outside receiver. Acks every chunk on its channel; the ack that
// completes a file (and any ack for a chunk of an already complete file)
// carries the completion mark, which is how the sender learns it may move
// on even when earlier acks were lost.
class Bob : public Actor {
public:
  Bob() : Actor(kBob, "receiver") {}

  void on_message(const Message& msg, ActorContext& ctx) override {
    const auto* chunk = std::get_if<ChunkPayload>(&msg.payload);
    if (chunk == nullptr) {
      ctx.mark_unmatched();
      return;
    }
    FileState& st = files_[chunk->file];
    st.total = chunk->total_chunks;
    const bool fresh = st.received.insert(chunk->chunk).second;
    if (fresh)
      ctx.monitor().record(ctx.now(), kTagChunkReceived,
                           static_cast<double>(chunk->bytes));
    const bool complete =
        st.total > 0 && st.received.size() == static_cast<std::size_t>(st.total);
    Message ack{response_kind(msg.kind), name(), msg.src, kAckBytes,
                ChunkAck{chunk->file, chunk->chunk, complete}};
    ctx.send(msg.src, std::move(ack));
  }

private:
  struct FileState {
    std::set<int> received;
    int total = 0;
  };
  std::map<int, FileState> files_;
};

}  // namespace

RunRecord run_tunnel(const TunnelConfig& config, WorldKind world,
                     std::uint64_t seed) {
  config.validate();

  Simulation sim(seed);
  const bool covert = world == WorldKind::hcs;

  std::set<ActorName> corporate;
  std::vector<ActorName> generators;
  const int n_query = (config.num_generators + 1) / 2;
  for (int i = 0; i < config.num_generators; ++i) {
    const Channel ch = i < n_query ? Channel::query : Channel::request;
    const std::string name =
        (ch == Channel::query ? "query-gen-" : "request-gen-") +
        std::to_string(ch == Channel::query ? i + 1 : i - n_query + 1);
    sim.add_actor(std::make_unique<TrafficGenerator>(
        name, ch,
        Distribution::normal_truncated(config.gen_mean_wait,
                                       config.gen_sd_wait)));
    corporate.insert(name);
    generators.push_back(name);
  }

  Alice* alice = nullptr;
  if (covert) {
    auto owned = std::make_unique<Alice>(config);
    alice = owned.get();
    sim.add_actor(std::move(owned));
    corporate.insert(kAlice);
  }

  std::set<ActorName> reachable = corporate;
  reachable.insert(kDnsService);
  reachable.insert(kWebService);
  sim.add_actor(std::make_unique<Relay>(reachable));
  sim.add_actor(std::make_unique<PublicService>(kDnsService, MsgKind::dns_query,
                                                kQueryResponseBytes));
  sim.add_actor(std::make_unique<PublicService>(
      kWebService, MsgKind::https_request, kRequestResponseBytes));
  if (covert) sim.add_actor(std::make_unique<Bob>());

  const Distribution lan = Distribution::constant(0.0);
  for (const auto& name : corporate) {
    sim.add_link(Link{name, kRelay, lan, 0.0});
    sim.add_link(Link{kRelay, name, lan, 0.0});
  }
  for (const auto& svc : {kDnsService, kWebService}) {
    sim.add_link(Link{kRelay, svc, config.link_delay, config.loss_alice});
    sim.add_link(Link{svc, kRelay, config.link_delay, config.loss_alice});
    if (covert) {
      sim.add_link(Link{svc, kBob, config.link_delay, config.loss_bob});
      sim.add_link(Link{kBob, svc, config.link_delay, config.loss_bob});
    }
  }

  RunRecord record;
  record.scenario = config.name;
  record.world = world;
  record.seed = seed;
  record.files_configured = config.num_files;

  const BoundaryObserver tap(kRelay, {kDnsService, kWebService});
  sim.hooks().on_send = [&](Time at, const DelayedMessage& dm) {
    tap.on_send(at, dm, record.trace);
  };
  sim.hooks().on_arrival = [&](Time at, const DelayedMessage& dm) {
    tap.on_arrival(at, dm, record.trace);
  };

  sim.run(Time(config.stop_time));

  record.trace.horizon = Time(config.stop_time);
  record.monitor = sim.monitor().events();
  record.observer_summary = sim.observer().summary;
  for (const auto& ev : record.monitor) {
    if (ev.tag == kTagFileAcked) {
      ++record.files_acked;
      record.bytes_acked += static_cast<std::uint64_t>(ev.value);
    }
  }
  record.gave_up = alice != nullptr && alice->gave_up();
  return record;
}

}  // namespace covertsim::tunnel
