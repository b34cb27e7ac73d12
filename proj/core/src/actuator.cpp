#include "sbc/actuator.hpp"

#include <string>

#include "sbc/error.hpp"

namespace sbc {

ActuatorBuffer::ActuatorBuffer(std::size_t horizon, std::size_t input_dim)
    : horizon_(horizon), input_dim_(input_dim) {
  if (horizon_ == 0) throw InvalidArgument("ActuatorBuffer: horizon must be >= 1");
  if (input_dim_ == 0) {
    throw InvalidArgument("ActuatorBuffer: input dimension must be >= 1");
  }
}

void ActuatorBuffer::ingest(std::span<const ControlPacket> arrivals,
                            std::size_t now) {
  for (const ControlPacket& packet : arrivals) {
    if (packet.arrival != now) {
      throw ProtocolError("ingest at k=" + std::to_string(now) +
                          " got packet with arrival time " +
                          std::to_string(packet.arrival));
    }
    if (packet.origin > packet.arrival) {
      throw ProtocolError("packet origin " + std::to_string(packet.origin) +
                          " is after its arrival " +
                          std::to_string(packet.arrival));
    }
    if (packet.payload.horizon() != horizon_ ||
        packet.payload.input_dim() != input_dim_) {
      throw InvalidArgument("ingest: payload shape does not match the buffer");
    }
    if (packet.origin + horizon_ <= now) continue;
    if (stored_origin_ && packet.origin <= *stored_origin_) continue;
    stored_origin_ = packet.origin;
    stored_payload_ = packet.payload;
  }
  if (stored_origin_ && *stored_origin_ + horizon_ <= now) {
    stored_origin_.reset();
    stored_payload_ = InputSequence();
  }
}

BufferReadout ActuatorBuffer::readout(std::size_t now) const {
  BufferReadout out;
  if (now == 0 || !stored_origin_ || *stored_origin_ + horizon_ <= now) {
    out.input.assign(input_dim_, 0.0);
    return out;
  }
  const std::size_t age = now - *stored_origin_;
  out.lambda = horizon_ - age;
  const VectorView u = stored_payload_.at(age);
  out.input.assign(u.begin(), u.end());
  out.active_origin = stored_origin_;
  return out;
}

std::vector<std::size_t> lambda_trace(std::span<const LinkOutcome> outcomes,
                                      std::size_t horizon) {
  std::vector<std::size_t> lambda(outcomes.size(), 0);
  for (std::size_t k = 1; k < outcomes.size(); ++k) {
    const std::size_t oldest = k + 1 >= horizon ? k + 1 - horizon : 0;
    for (std::size_t l = k + 1; l-- > oldest;) {
      const LinkOutcome& o = outcomes[l];
      if (o.gamma && o.tau.is_finite() && l + o.tau.steps() <= k) {
        lambda[k] = l + horizon - k;
        break;
      }
    }
  }
  return lambda;
}

}  // namespace sbc
