#include "vanet/analytics.hpp"

#include <gtest/gtest.h>

namespace vanet {
namespace {

// City configuration: N=1000, v=80 km/h, d=500 m, l=300 s.
TEST(Analytics, CityWorkedExample) {
  double r = radius_m(80, 300);
  EXPECT_NEAR(r, 6666.67, 0.01);
  EXPECT_EQ(message_count(r, 500), 15u);
  EXPECT_NEAR(node_percentage(15, 1000), 1.5, 1e-12);
}

// Highway configuration: N=1000, v=300 km/h, d=1500 m, l=900 s.
TEST(Analytics, HighwayWorkedExample) {
  double r = radius_m(300, 900);
  EXPECT_DOUBLE_EQ(r, 75000);
  EXPECT_EQ(message_count(r, 1500), 51u);
  EXPECT_NEAR(node_percentage(51, 1000), 5.1, 1e-12);
}

TEST(Analytics, StationaryVehicle) {
  EXPECT_DOUBLE_EQ(radius_m(0, 300), 0);
  EXPECT_EQ(message_count(0, 500), 1u);  // never left its issuing RSU
}

TEST(Analytics, ArgumentChecks) {
  EXPECT_THROW(radius_m(-1, 300), ArgumentError);
  EXPECT_THROW(radius_m(80, 0), ArgumentError);
  EXPECT_THROW(message_count(100, 0), ArgumentError);
  EXPECT_THROW(message_count(-1, 500), ArgumentError);
  EXPECT_THROW(node_percentage(5, 0), ArgumentError);
  EXPECT_THROW(node_percentage(1001, 1000), ArgumentError);
}

TEST(Analytics, FullBroadcastEquivalence) { EXPECT_DOUBLE_EQ(node_percentage(1000, 1000), 100.0); }

TEST(Analytics, E2eTimeDirectSubstitution) {
  EXPECT_DOUBLE_EQ(e2e_time({}, 5), 0.0);
  TimingParams tp{0.001, 0.010, 0.001, 0.010, 0.001, 0.005};
  EXPECT_NEAR(e2e_time(tp, 3), 0.040, 1e-12);
  // Linear in n: doubling n exactly doubles the RSU term.
  double base = e2e_time(tp, 0);
  EXPECT_NEAR(e2e_time(tp, 6) - base, 2 * (e2e_time(tp, 3) - base), 1e-12);
}

TEST(Analytics, SpeedSweepMatchesDirectEvaluation) {
  std::vector<double> speeds;
  for (double v = 10; v <= 160; v += 10) speeds.push_back(v);
  auto rows = sweep_speed("manhattan", 300, 500, 1000, speeds);
  ASSERT_EQ(rows.size(), speeds.size());
  std::uint64_t prev_m = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    // Independent recheck of each row in exact integer arithmetic:
    // r/d = (v * 1000 * l) / (3600 * d), ceiled without float error.
    double r = kmh_to_mps(speeds[i]) * 300;
    std::uint64_t num = static_cast<std::uint64_t>(speeds[i]) * 1000 * 300;
    std::uint64_t den = 3600 * 500;
    std::uint64_t m = (num + den - 1) / den + 1;
    EXPECT_NEAR(rows[i].r_m, r, 1e-6);
    EXPECT_EQ(rows[i].m_msgs, m);
    EXPECT_DOUBLE_EQ(rows[i].p_pct, 100.0 * static_cast<double>(m) / 1000.0);
    EXPECT_EQ(rows[i].brd_msgs, 1000u);
    EXPECT_FALSE(rows[i].saturated);
    // Monotone: m never decreases with speed.
    EXPECT_GE(rows[i].m_msgs, prev_m);
    prev_m = rows[i].m_msgs;
  }
  // The city numbers sit on this sweep.
  EXPECT_EQ(rows[7].m_msgs, 15u);  // v = 80
}

TEST(Analytics, SaturationClampsToNetworkSize) {
  auto rows = sweep_speed("highway", 900, 100, 50, {300});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].saturated);
  EXPECT_EQ(rows[0].m_msgs, 50u);
  EXPECT_DOUBLE_EQ(rows[0].p_pct, 100.0);
}

TEST(Analytics, AreaSweepKeepsTargetedCostFlat) {
  auto rows = sweep_area("manhattan", 80, 300, 500, 10, {4, 25, 100, 400});
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.m_msgs, 15u);  // targeted cost independent of the area
    EXPECT_FALSE(r.saturated);
  }
  EXPECT_EQ(rows[0].brd_msgs, 40u);
  EXPECT_EQ(rows[3].brd_msgs, 4000u);
  // p strictly decreasing in N for fixed m.
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].p_pct, rows[i - 1].p_pct);
}

TEST(Analytics, MonotoneInLifetimeAndSpacing) {
  // m non-decreasing in l, non-increasing in d.
  std::uint64_t prev = 0;
  for (double l : {60.0, 120.0, 300.0, 600.0}) {
    auto m = message_count(radius_m(80, l), 500);
    EXPECT_GE(m, prev);
    prev = m;
  }
  prev = ~0ull;
  for (double d : {100.0, 250.0, 500.0, 1000.0}) {
    auto m = message_count(radius_m(80, 300), d);
    EXPECT_LE(m, prev);
    prev = m;
  }
}

TEST(Analytics, CsvSchema) {
  std::ostringstream os;
  write_analytic_csv(sweep_speed("manhattan", 300, 500, 1000, {80}), os);
  EXPECT_EQ(os.str(),
            "model,v_kmh,l_s,d_m,N,r_m,m_msgs,p_pct,brd_msgs\n"
            "manhattan,80,300,500,1000,6666.67,15,1.5,1000\n");
}

}  // namespace
}  // namespace vanet
