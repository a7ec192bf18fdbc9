#include "covertsim/tunnel/config.hpp"

#include <cmath>

#include "covertsim/errors.hpp"

namespace covertsim::tunnel {

void TunnelConfig::validate() const {
  if (!(stop_time > 0.0)) throw ConfigurationError("stop_time must be > 0");
  if (observation_horizon < 0.0)
    throw ConfigurationError("observation_horizon must be >= 0");
  if (observation_horizon > stop_time)
    throw ConfigurationError("observation_horizon cannot exceed stop_time");
  if (!(loss_alice >= 0.0 && loss_alice <= 1.0) ||
      !(loss_bob >= 0.0 && loss_bob <= 1.0))
    throw ConfigurationError("loss probabilities must be in [0, 1]");
  if (num_files < 0) throw ConfigurationError("num_files must be >= 0");
  if (!file_sizes.empty() &&
      file_sizes.size() != static_cast<std::size_t>(num_files))
    throw ConfigurationError("file_sizes length must equal num_files");
  for (auto s : file_sizes)
    if (s == 0) throw ConfigurationError("file sizes must be positive");
  if (file_sizes.empty() && num_files > 0 &&
      total_bytes < static_cast<std::uint64_t>(num_files))
    throw ConfigurationError("total_bytes must give every file at least 1 B");
  if (chunk_size == 0) throw ConfigurationError("chunk_size must be positive");
  if (!(control_fraction >= 0.0 && control_fraction <= 1.0))
    throw ConfigurationError("control_fraction must be in [0, 1]");
  if (num_generators < 0)
    throw ConfigurationError("num_generators must be >= 0");
  if (!(gen_mean_wait > 0.0) || gen_sd_wait < 0.0 || !(mean_wait > 0.0) ||
      sd_wait < 0.0)
    throw ConfigurationError("wait parameters must be positive");
  if (retransmit_timeout < 0.0)
    throw ConfigurationError("retransmit_timeout must be >= 0");
  if (retransmit_cap < 1)
    throw ConfigurationError("retransmit_cap must be >= 1");
}

std::vector<std::uint64_t> TunnelConfig::effective_file_sizes() const {
  if (!file_sizes.empty()) return file_sizes;
  std::vector<std::uint64_t> out;
  if (num_files == 0) return out;
  const auto n = static_cast<std::uint64_t>(num_files);
  const std::uint64_t base = total_bytes / n;
  const std::uint64_t rem = total_bytes % n;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i)
    out.push_back(base + (i < rem ? 1 : 0));
  return out;
}

Time TunnelConfig::effective_observation_horizon() const {
  return observation_horizon > 0.0 ? Time(observation_horizon)
                                   : Time(stop_time);
}

Time TunnelConfig::effective_retransmit_timeout() const {
  if (retransmit_timeout > 0.0) return Time(retransmit_timeout);
  // One-way path is two hops (relay -> service -> receiver); round trip is
  // four. 4 x one-way mean leaves loss-free runs retransmission-free with
  // many standard deviations to spare.
  return Time(4.0 * 2.0 * link_delay.nominal_mean());
}

std::vector<ChunkSpec> plan_chunks(std::uint64_t file_bytes,
                                   std::uint64_t chunk_size,
                                   double control_fraction) {
  if (file_bytes == 0 || chunk_size == 0)
    throw ConfigurationError("plan_chunks needs positive sizes");
  const auto control_bytes = static_cast<std::uint64_t>(
      std::llround(control_fraction * static_cast<double>(file_bytes)));
  const std::uint64_t data_bytes = file_bytes - control_bytes;

  auto split = [chunk_size](std::uint64_t bytes, Channel ch,
                            std::vector<ChunkSpec>& out) {
    while (bytes > 0) {
      const std::uint64_t take = bytes < chunk_size ? bytes : chunk_size;
      out.push_back(ChunkSpec{ch, take});
      bytes -= take;
    }
  };

  std::vector<ChunkSpec> control, data;
  split(control_bytes, Channel::query, control);
  split(data_bytes, Channel::request, data);

  // Interleave so both channels stay active for the whole transfer.
  std::vector<ChunkSpec> plan;
  plan.reserve(control.size() + data.size());
  std::size_t i = 0, j = 0;
  while (i < control.size() || j < data.size()) {
    if (i < control.size()) plan.push_back(control[i++]);
    if (j < data.size()) plan.push_back(data[j++]);
  }
  return plan;
}

}  // namespace covertsim::tunnel
