#include <gtest/gtest.h>

#include <sstream>

#include "lrwpan/metrics.hpp"

namespace lrwpan::metrics {
namespace {

TEST(Throughput, ZeroBytesGiveZero) {
  EXPECT_DOUBLE_EQ(throughput(Counters{}, 60.0, 10), 0.0);
}

TEST(Throughput, PerNodeKilobits) {
  Counters c;
  c.received_data_bytes = 125000;
  // 125000 B * 8 = 1 Mbit over 10 s and 10 nodes = 10 kbit/s per node
  const double expected = 125000.0 * 8.0 / 10.0 / 10.0 / 1000.0;
  EXPECT_DOUBLE_EQ(throughput(c, 10.0, 10), expected);
  EXPECT_DOUBLE_EQ(expected, 10.0);
}

TEST(Throughput, DoublingNodesHalvesIt) {
  Counters c;
  c.received_data_bytes = 7777;
  EXPECT_DOUBLE_EQ(throughput(c, 3.0, 8), throughput(c, 3.0, 4) / 2.0);
}

TEST(Throughput, RejectsDegenerateInput) {
  EXPECT_THROW(throughput(Counters{}, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(throughput(Counters{}, 1.0, 0), std::invalid_argument);
}

TEST(DeliveryRatio, DirectRatio) {
  Counters c;
  c.sent_data_frames = 100;
  c.received_data_frames = 95;
  EXPECT_DOUBLE_EQ(*packet_delivery_ratio(c), 95.0);
}

TEST(DeliveryRatio, AbsentWhenNothingSent) {
  EXPECT_FALSE(packet_delivery_ratio(Counters{}).has_value());
}

TEST(CollisionRate, DataShareOfCollisions) {
  Counters c;
  c.drops(DropCause::kCollisionData) = 30;
  c.drops(DropCause::kCollisionOther) = 10;
  EXPECT_DOUBLE_EQ(*collision_rate(c), 75.0);
}

TEST(CollisionRate, OnlyDataCollisionsGiveOneHundred) {
  Counters c;
  c.drops(DropCause::kCollisionData) = 3;
  EXPECT_DOUBLE_EQ(*collision_rate(c), 100.0);
}

TEST(CollisionRate, OtherDropCausesAreNotCollisions) {
  Counters c;
  c.drops(DropCause::kChannelAccessFailure) = 4;
  c.drops(DropCause::kQueueDrop) = 4;
  c.drops(DropCause::kNoAckExhausted) = 4;
  EXPECT_FALSE(collision_rate(c).has_value());
}

TEST(DutyCycle, Examples) {
  EXPECT_DOUBLE_EQ(duty_cycle(mac::SuperframeConfig{4, 4, false}), 100.0);
  EXPECT_DOUBLE_EQ(duty_cycle(mac::SuperframeConfig{4, 3, false}), 50.0);
  EXPECT_DOUBLE_EQ(duty_cycle(mac::SuperframeConfig{5, 2, false}), 100.0 / 8.0);
}

TEST(Report, CarriesRunParametersAndFormulas) {
  Counters c;
  c.sent_data_frames = 40;
  c.received_data_frames = 30;
  c.received_data_bytes = 2100;
  const auto r = make_report(mac::SuperframeConfig{5, 3, false}, 3, 11, 7.0, c);
  EXPECT_EQ(r.beacon_order, 5);
  EXPECT_EQ(r.superframe_order, 3);
  EXPECT_EQ(r.n_nodes, 3);
  EXPECT_EQ(r.seed, 11u);
  EXPECT_DOUBLE_EQ(r.throughput_kbps, 2100.0 * 8 / 7.0 / 3 / 1000);
  EXPECT_DOUBLE_EQ(*r.pdr_pct, 75.0);
  EXPECT_FALSE(r.collision_pct.has_value());
  EXPECT_DOUBLE_EQ(r.duty_cycle_pct, 25.0);
}

phy::Transmission fake_tx(Frame f, std::vector<phy::RxOutcome> outcomes) {
  phy::Transmission t;
  t.frame = std::move(f);
  t.outcomes = std::move(outcomes);
  return t;
}

TEST(CollisionMonitor, UnicastCountsOnlyAtDestination) {
  using O = phy::RxOutcome;
  const Frame data = make_data_frame(1, 0, 1, 20);
  EXPECT_TRUE(CollisionMonitor::collided(fake_tx(data, {O::kCorrupted, O::kOutOfRange, O::kDelivered})));
  EXPECT_FALSE(CollisionMonitor::collided(fake_tx(data, {O::kDelivered, O::kOutOfRange, O::kCorrupted})));
}

TEST(CollisionMonitor, BroadcastCountsAtAnyReceiver) {
  using O = phy::RxOutcome;
  Frame beacon;
  beacon.body = BeaconBody{};
  EXPECT_TRUE(CollisionMonitor::collided(fake_tx(beacon, {O::kOutOfRange, O::kDelivered, O::kCorrupted})));
  EXPECT_FALSE(CollisionMonitor::collided(fake_tx(beacon, {O::kOutOfRange, O::kDelivered, O::kNotListening})));
}

TEST(CollisionMonitor, AttributesByFrameKind) {
  using O = phy::RxOutcome;
  Counters c;
  std::ostringstream out;
  TraceSink trace(&out);
  CollisionMonitor m(c, trace);
  m.on_transmission_end(fake_tx(make_data_frame(1, 0, 1, 20), {O::kCorrupted, O::kOutOfRange}));
  m.on_transmission_end(fake_tx(make_ack(1, 1), {O::kOutOfRange, O::kCorrupted}));
  m.on_transmission_end(fake_tx(make_data_frame(1, 0, 2, 20), {O::kDelivered, O::kOutOfRange}));
  EXPECT_EQ(c.drops(DropCause::kCollisionData), 1u);
  EXPECT_EQ(c.drops(DropCause::kCollisionOther), 1u);
  EXPECT_NE(out.str().find("collision data frame"), std::string::npos);
  EXPECT_NE(out.str().find("collision other frame"), std::string::npos);
}

}  // namespace
}  // namespace lrwpan::metrics
