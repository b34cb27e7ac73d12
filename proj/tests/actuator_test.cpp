#include <vector>

#include <gtest/gtest.h>

#include "sbc/actuator.hpp"
#include "sbc/error.hpp"
#include "test_support.hpp"

namespace sbc {
namespace {

// Payload whose entry j is the scalar 10 * origin + j, so readouts are easy
// to decode.
ControlPacket packet(std::size_t origin, std::size_t arrival, std::size_t horizon) {
  std::vector<double> stacked(horizon);
  for (std::size_t j = 0; j < horizon; ++j) {
    stacked[j] = 10.0 * static_cast<double>(origin) + static_cast<double>(j);
  }
  return {origin, InputSequence(1, stacked), arrival};
}

TEST(Buffer, EmptyAtStart) {
  ActuatorBuffer buf(3, 1);
  buf.ingest({}, 0);
  const BufferReadout r = buf.readout(0);
  EXPECT_EQ(r.lambda, 0u);
  EXPECT_EQ(r.input, (Vector{0.0}));
  EXPECT_FALSE(r.active_origin);
}

TEST(Buffer, LambdaZeroForcedAtTimeZero) {
  ActuatorBuffer buf(3, 1);
  const ControlPacket p = packet(0, 0, 3);
  buf.ingest({&p, 1}, 0);
  EXPECT_EQ(buf.readout(0).lambda, 0u);
  EXPECT_EQ(buf.readout(0).input, (Vector{0.0}));
  // The packet is kept and plays from k = 1.
  buf.ingest({}, 1);
  const BufferReadout r = buf.readout(1);
  EXPECT_EQ(r.lambda, 2u);
  EXPECT_EQ(r.input, (Vector{1.0}));
}

TEST(Buffer, PlaysOutThenEmpties) {
  ActuatorBuffer buf(3, 1);
  const ControlPacket p = packet(5, 5, 3);
  buf.ingest({&p, 1}, 5);
  EXPECT_EQ(buf.readout(5).lambda, 3u);
  EXPECT_EQ(buf.readout(5).input, (Vector{50.0}));
  buf.ingest({}, 6);
  EXPECT_EQ(buf.readout(6).lambda, 2u);
  EXPECT_EQ(buf.readout(6).input, (Vector{51.0}));
  buf.ingest({}, 7);
  EXPECT_EQ(buf.readout(7).lambda, 1u);
  EXPECT_EQ(buf.readout(7).input, (Vector{52.0}));
  buf.ingest({}, 8);
  EXPECT_EQ(buf.readout(8).lambda, 0u);
  EXPECT_EQ(buf.readout(8).input, (Vector{0.0}));
  EXPECT_FALSE(buf.stored_origin());
}

TEST(Buffer, OlderArrivalIsDiscarded) {
  ActuatorBuffer buf(4, 1);
  const ControlPacket newer = packet(6, 7, 4);
  buf.ingest({&newer, 1}, 7);
  const ControlPacket older = packet(5, 8, 4);
  buf.ingest({&older, 1}, 8);
  EXPECT_EQ(buf.stored_origin(), 6u);
  EXPECT_EQ(buf.readout(8).input, (Vector{62.0}));
}

TEST(Buffer, NewestOriginWinsWithinOneTick) {
  ActuatorBuffer buf(4, 1);
  const std::vector<ControlPacket> both{packet(7, 9, 4), packet(8, 9, 4), packet(6, 9, 4)};
  buf.ingest(both, 9);
  EXPECT_EQ(buf.stored_origin(), 8u);
  EXPECT_EQ(buf.readout(9).lambda, 3u);
}

TEST(Buffer, ExpiredArrivalIsIgnored) {
  ActuatorBuffer buf(2, 1);
  const ControlPacket stale = packet(3, 5, 2);  // 3 + 2 <= 5
  buf.ingest({&stale, 1}, 5);
  EXPECT_FALSE(buf.stored_origin());
  EXPECT_EQ(buf.readout(5).lambda, 0u);
}

TEST(Buffer, ProtocolViolations) {
  ActuatorBuffer buf(3, 1);
  const ControlPacket early = packet(2, 4, 3);
  EXPECT_THROW(buf.ingest({&early, 1}, 3), ProtocolError);
  const ControlPacket acausal = packet(5, 4, 3);
  EXPECT_THROW(buf.ingest({&acausal, 1}, 4), ProtocolError);
  const ControlPacket wrong_shape{1, InputSequence(1, {1.0, 2.0}), 1};
  EXPECT_THROW(buf.ingest({&wrong_shape, 1}, 1), InvalidArgument);
  EXPECT_THROW(ActuatorBuffer(0, 1), InvalidArgument);
}

std::vector<LinkOutcome> outcomes_from(const std::vector<int>& taus) {
  // -1 encodes a loss (gamma = 1, tau = inf), -2 a sensor-link failure.
  std::vector<LinkOutcome> out;
  for (const int t : taus) {
    if (t == -2) {
      out.push_back({false, Delay::infinite()});
    } else if (t < 0) {
      out.push_back({true, Delay::infinite()});
    } else {
      out.push_back({true, Delay::finite(static_cast<std::size_t>(t))});
    }
  }
  return out;
}

TEST(LambdaTrace, AllDelayZero) {
  const auto lam = lambda_trace(outcomes_from({0, 0, 0, 0}), 3);
  EXPECT_EQ(lam, (std::vector<std::size_t>{0, 3, 3, 3}));
}

TEST(LambdaTrace, AllLost) {
  const auto lam = lambda_trace(outcomes_from({-1, -2, -1, -2, -1}), 2);
  EXPECT_EQ(lam, (std::vector<std::size_t>{0, 0, 0, 0, 0}));
}

TEST(LambdaTrace, HandWorkedSequence) {
  // N = 3. k:      0   1   2   3   4   5   6   7
  // tau:           1   -1  -2  2   -1  -1  -1  0
  // T(k):          -   0   0   0   0   3   3   7
  // lambda:        0   2   1   0   0   1   0   3
  const auto lam = lambda_trace(outcomes_from({1, -1, -2, 2, -1, -1, -1, 0}), 3);
  EXPECT_EQ(lam, (std::vector<std::size_t>{0, 2, 1, 0, 0, 1, 0, 3}));
}

TEST(LambdaTrace, BoundedByHorizonAndDecrements) {
  Rng rng(17);
  const DelayDistribution d = testing::worked_example_channel();
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<LinkOutcome> o;
    for (int i = 0; i < 2000; ++i) o.push_back(sample_outcome(d, rng));
    const auto lam = lambda_trace(o, n);
    for (std::size_t k = 1; k < lam.size(); ++k) {
      ASSERT_LE(lam[k], n);
      // T(k) never decreases, so lambda drops by at most one per tick.
      ASSERT_GE(lam[k] + 1, lam[k - 1]) << "k=" << k;
    }
  }
}

TEST(LambdaTrace, OperationalBufferAgrees) {
  Rng rng(23);
  const DelayDistribution d = testing::worked_example_channel();
  for (std::size_t n = 1; n <= 7; ++n) {
    std::vector<LinkOutcome> o;
    ActuatorBuffer buf(n, 1);
    std::vector<std::vector<ControlPacket>> due(5000 + 20);
    std::vector<std::size_t> operational;
    for (std::size_t k = 0; k < 5000; ++k) {
      o.push_back(sample_outcome(d, rng));
      if (o.back().gamma && o.back().tau.is_finite()) {
        due[k + o.back().tau.steps()].push_back(packet(k, k + o.back().tau.steps(), n));
      }
      buf.ingest(due[k], k);
      const BufferReadout r = buf.readout(k);
      operational.push_back(r.lambda);
      if (r.lambda > 0) {
        // The readout entry is u(k; T(k)).
        const std::size_t origin = *r.active_origin;
        ASSERT_EQ(r.input[0], 10.0 * static_cast<double>(origin) +
                                  static_cast<double>(k - origin));
      }
    }
    ASSERT_EQ(operational, lambda_trace(o, n)) << "N=" << n;
  }
}

}  // namespace
}  // namespace sbc
