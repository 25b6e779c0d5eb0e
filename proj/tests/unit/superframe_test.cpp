#include <gtest/gtest.h>

#include <cmath>

#include "lrwpan/superframe.hpp"

namespace lrwpan::mac {
namespace {

SuperframeConfig orders(int bo, int so) {
  SuperframeConfig c;
  c.beacon_order = bo;
  c.superframe_order = so;
  return c;
}

TEST(Superframe, ConstantsAgree) {
  EXPECT_EQ(kBaseSuperframeDuration, kBaseSlotDuration * kNumSuperframeSlots);
  EXPECT_EQ(kUnitBackoffPeriod, 20u);
  EXPECT_EQ(kMinCapLength, 440u);
}

TEST(Superframe, OrderZeroLastsOneBaseSuperframe) {
  EXPECT_EQ(orders(0, 0).superframe_duration(), 960u);
  EXPECT_EQ(orders(0, 0).slot_duration(), 60u);
}

TEST(Superframe, DurationsMatchPowerOfTwoScaling) {
  for (int bo = 0; bo <= 14; ++bo) {
    for (int so = 0; so <= bo; ++so) {
      const auto c = orders(bo, so);
      EXPECT_EQ(c.superframe_duration(), static_cast<Symbols>(960 * std::pow(2.0, so)));
      EXPECT_EQ(c.beacon_interval(), static_cast<Symbols>(960 * std::pow(2.0, bo)));
      EXPECT_EQ(c.slot_duration(), static_cast<Symbols>(60 * std::pow(2.0, so)));
      EXPECT_DOUBLE_EQ(c.duty_cycle(), std::pow(2.0, so - bo));
    }
  }
}

TEST(Superframe, EqualOrdersHaveNoInactivePortion) {
  const auto t = superframe_timeline(orders(3, 3), SymbolTime(0), 34);
  EXPECT_EQ(orders(3, 3).superframe_duration(), 7680u);
  EXPECT_EQ(orders(3, 3).beacon_interval(), 7680u);
  EXPECT_EQ(t.inactive.length(), 0u);
  EXPECT_EQ(t.cap.begin, SymbolTime(34));
  EXPECT_EQ(t.cap.end, SymbolTime(7680));
  EXPECT_EQ(t.cfp.length(), 0u);
  EXPECT_EQ(t.next_start(), SymbolTime(7680));
}

TEST(Superframe, TwoGtsSlotsLeaveCapEndingAtSlotThirteen) {
  const auto c = orders(3, 3);
  const auto t = superframe_timeline(c, SymbolTime(7680), 40, 13);
  EXPECT_EQ(t.cap.end, SymbolTime(7680 + 14 * 480));
  EXPECT_EQ(t.cfp.begin, t.slot_boundaries[14]);
  EXPECT_EQ(t.cfp.end, SymbolTime(7680 + 16 * 480));
  const auto gts = t.gts_interval(GtsDescriptor{1, 14, 2, GtsDirection::kReceive});
  EXPECT_EQ(gts.begin, t.cfp.begin);
  EXPECT_EQ(gts.end, t.cfp.end);
}

TEST(Superframe, InactivePortionFollowsActivePortion) {
  const auto t = superframe_timeline(orders(5, 2), SymbolTime(30720), 34);
  EXPECT_EQ(t.active_end(), SymbolTime(30720 + 3840));
  EXPECT_EQ(t.inactive.end, SymbolTime(2 * 30720));
  for (int i = 0; i < kNumSuperframeSlots; ++i) {
    EXPECT_EQ(t.slot_boundaries[static_cast<std::size_t>(i)],
              SymbolTime(30720 + static_cast<Symbols>(i) * 240));
  }
}

TEST(Superframe, BackoffBoundariesAlignToSuperframeStart) {
  const auto t = superframe_timeline(orders(3, 3), SymbolTime(7680), 34);
  EXPECT_EQ(t.backoff_boundary_at_or_after(SymbolTime(7680)), SymbolTime(7680));
  EXPECT_EQ(t.backoff_boundary_at_or_after(SymbolTime(7681)), SymbolTime(7700));
  EXPECT_EQ(t.backoff_boundary_at_or_after(SymbolTime(7714)), SymbolTime(7720));
  EXPECT_EQ(t.backoff_boundary_at_or_after(SymbolTime(7720)), SymbolTime(7720));
}

TEST(Superframe, InvalidOrdersAreRejected) {
  EXPECT_THROW(orders(2, 3).validate(), InvalidConfig);
  EXPECT_THROW(orders(15, 3).validate(), InvalidConfig);
  EXPECT_THROW(orders(3, -1).validate(), InvalidConfig);
  EXPECT_THROW(superframe_timeline(orders(2, 3), SymbolTime(0), 0), InvalidConfig);
  EXPECT_THROW(superframe_timeline(orders(3, 3), SymbolTime(0), 0, 16), InvalidConfig);
  EXPECT_NO_THROW(orders(14, 0).validate());
}

TEST(Superframe, InterframeSpacingDependsOnFrameSize) {
  EXPECT_EQ(ifs_after(18), kSifsPeriod);
  EXPECT_EQ(ifs_after(19), kLifsPeriod);
  EXPECT_EQ(kAckExchange, 12u + 10u);
}

}  // namespace
}  // namespace lrwpan::mac
