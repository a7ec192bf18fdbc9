#include "covertsim/rtt/scenario.hpp"

#include <algorithm>
#include <optional>

#include "covertsim/engine.hpp"
#include "covertsim/errors.hpp"
#include "covertsim/rtt/entropy.hpp"
#include "covertsim/rtt/protocol.hpp"

namespace covertsim::rtt {

namespace {

constexpr std::uint64_t kPacketBytes = 64;

class Initiator : public Actor {
public:
  Initiator(ActorName responder, const RttParams& p, bool covert)
      : Actor("initiator", "rtt-initiator"),
        responder_(std::move(responder)),
        params_(p),
        covert_(covert) {
    round_ = &add_timer("round");
    round_->arm(params_.start_time);
  }

  void on_timer(Timer& timer, ActorContext& ctx) override {
    const Time now = ctx.now();
    const Timestamp ts = clock_to_ts(now, phase(ctx), ctx.stream());
    outstanding_.push_back(ts);
    Message req{MsgKind::rtt_request, name(), responder_, kPacketBytes,
                RttRequest{ts}};
    ctx.send(responder_, std::move(req));
    if (now >= params_.stop_time)
      timer.disarm();
    else
      timer.arm(params_.period);
  }

  void on_message(const Message& msg, ActorContext& ctx) override {
    const auto* resp = std::get_if<RttResponse>(&msg.payload);
    if (msg.kind != MsgKind::rtt_response || resp == nullptr) {
      ctx.mark_unmatched();
      return;
    }
    auto it = std::find(outstanding_.begin(), outstanding_.end(),
                        resp->request_ts);
    if (it == outstanding_.end())
      throw InternalError("response for a request that was never sent");
    outstanding_.erase(it);
    const Timestamp arrival = clock_to_ts(ctx.now(), phase(ctx), ctx.stream());
    rttq.push_back(compute_rtt(arrival, resp->request_ts));
    if (covert_)
      extracted.push_back(
          extract_byte(resp->response_ts, extract_ctr_++, params_.shared_seed));
  }

  std::vector<double> rttq;
  std::vector<std::uint8_t> extracted;

private:
  std::uint64_t phase(ActorContext& ctx) {
    if (!phase_) phase_ = clock_phase(ctx.stream());
    return *phase_;
  }

  ActorName responder_;
  RttParams params_;
  bool covert_;
  Timer* round_ = nullptr;
  std::vector<Timestamp> outstanding_;
  std::optional<std::uint64_t> phase_;
  std::uint64_t extract_ctr_ = 0;
};

class Responder : public Actor {
public:
  Responder(const RttParams& p, bool covert, std::uint64_t byte_source_seed)
      : Actor("responder", "rtt-responder"),
        params_(p),
        covert_(covert),
        byte_source_seed_(byte_source_seed) {}

  void on_message(const Message& msg, ActorContext& ctx) override {
    const auto* req = std::get_if<RttRequest>(&msg.payload);
    if (msg.kind != MsgKind::rtt_request || req == nullptr) {
      ctx.mark_unmatched();
      return;
    }
    Timestamp reading = clock_to_ts(ctx.now(), phase(ctx), ctx.stream());
    if (covert_) {
      const std::uint8_t b = prf_byte(byte_source_seed_, byte_ctr_++);
      embedded.push_back(b);
      reading = embed_byte(reading, embed_ctr_++, b, params_.shared_seed);
    }
    Message resp{MsgKind::rtt_response, name(), msg.src, kPacketBytes,
                 RttResponse{req->ts, reading}};
    ctx.send(msg.src, std::move(resp));
  }

  std::vector<std::uint8_t> embedded;

private:
  std::uint64_t phase(ActorContext& ctx) {
    if (!phase_) phase_ = clock_phase(ctx.stream());
    return *phase_;
  }

  RttParams params_;
  bool covert_;
  std::uint64_t byte_source_seed_;
  std::optional<std::uint64_t> phase_;
  std::uint64_t byte_ctr_ = 0;
  std::uint64_t embed_ctr_ = 0;
};

}  // namespace

RttRunResult run_rtt(const RttParams& params, std::uint64_t seed,
                     bool covert) {
  Simulation sim(seed);
  // The covert byte source is per run: fresh payload every run, same
  // derivation in the paired non-covert run (where it is simply unused).
  const std::uint64_t byte_seed =
      sim.derived_stream("covert-bytes").next_u64();

  auto& initiator = static_cast<Initiator&>(sim.add_actor(
      std::make_unique<Initiator>("responder", params, covert)));
  auto& responder = static_cast<Responder&>(sim.add_actor(
      std::make_unique<Responder>(params, covert, byte_seed)));

  sim.add_link(Link{"initiator", "responder", params.link_delay,
                    params.link_loss});
  sim.add_link(Link{"responder", "initiator", params.link_delay,
                    params.link_loss});

  sim.hooks().on_arrival = [&](Time at, const DelayedMessage& dm) {
    if (dm.msg.kind == MsgKind::rtt_response && dm.to == "initiator")
      sim.observer().sent.emplace_back(at, dm.msg);
  };
  sim.hooks().final_action = [&](Simulation& s) {
    Observer& obs = s.observer();
    if (!initiator.rttq.empty()) {
      double sum = 0.0;
      for (double r : initiator.rttq) sum += r;
      obs.summary["rtt_av"] = sum / static_cast<double>(initiator.rttq.size());
    }
    std::vector<std::uint8_t> lows;
    lows.reserve(obs.sent.size());
    for (const auto& [at, msg] : obs.sent) {
      (void)at;
      const auto& resp = std::get<RttResponse>(msg.payload);
      lows.push_back(static_cast<std::uint8_t>(resp.response_ts & 0xFF));
    }
    if (!lows.empty()) {
      const auto bits = per_bit_entropies(lows);
      for (int i = 0; i < 8; ++i)
        obs.summary["entropy_bit_" + std::to_string(i)] = bits[i];
      obs.summary["entropy_av"] = mean_of(bits);
    }
  };

  sim.run();

  RttRunResult out;
  out.rttq = initiator.rttq;
  out.sender_bytes = initiator.extracted;
  out.receiver_bytes = responder.embedded;
  for (const auto& [at, msg] : sim.observer().sent) {
    (void)at;
    out.low_bytes.push_back(static_cast<std::uint8_t>(
        std::get<RttResponse>(msg.payload).response_ts & 0xFF));
  }
  if (!out.low_bytes.empty()) {
    out.bit_entropy = per_bit_entropies(out.low_bytes);
    out.entropy_av = mean_of(out.bit_entropy);
  }
  if (!out.rttq.empty()) out.rtt_av = sim.observer().summary.at("rtt_av");
  out.summary = sim.observer().summary;
  out.sent = sim.sent_count();
  out.delivered = sim.delivered_count();
  out.lost = sim.lost_count();
  return out;
}

}  // namespace covertsim::rtt
