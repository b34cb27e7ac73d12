#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sbc/network.hpp"
#include "sbc/plant.hpp"

namespace sbc {

struct ControlPacket {
  std::size_t origin = 0;   // time stamp k of the state the sequence uses
  InputSequence payload;    // u(k;k), ..., u(k+N-1;k)
  std::size_t arrival = 0;  // k + tau(k)
};

struct BufferReadout {
  std::size_t lambda = 0;                    // buffer length lambda(k)
  Vector input;                              // plant input u(k)
  std::optional<std::size_t> active_origin;  // T(k) while lambda(k) > 0
};

// Timestamped actuator buffer. Keeps the payload of the newest-origin packet
// received so far and plays it out by indexing; older arrivals are dropped.
//
// Per tick the caller ingests the arrivals due at k and then reads out.
class ActuatorBuffer {
 public:
  ActuatorBuffer(std::size_t horizon, std::size_t input_dim);

  // All packets must have arrival == now (ProtocolError otherwise). Packets
  // whose origin is not newer than the stored one, or that are already too
  // old to supply an input (origin + N <= now), are discarded.
  void ingest(std::span<const ControlPacket> arrivals, std::size_t now);

  // lambda = max(0, T + N - now) (forced to 0 at now = 0) and the matching
  // entry u(now; T) of the stored sequence, or the zero input when empty.
  BufferReadout readout(std::size_t now) const;

  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::optional<std::size_t> stored_origin() const noexcept {
    return stored_origin_;
  }

 private:
  std::size_t horizon_;
  std::size_t input_dim_;
  std::optional<std::size_t> stored_origin_;
  InputSequence stored_payload_;
};

// Reference buffer-length process computed straight from
// T(k) = max{l : l + tau(l) <= k} and lambda(k) = max(0, T(k) + N - k),
// lambda(0) = 0. Only origins l > k - N can give lambda(k) > 0, so the search
// is limited to that window.
std::vector<std::size_t> lambda_trace(std::span<const LinkOutcome> outcomes,
                                      std::size_t horizon);

}  // namespace sbc
