#include "vanet/mobility.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace vanet {
namespace {

bool same_waypoints(const MobilityTrace& a, const MobilityTrace& b) {
  if (a.vehicles.size() != b.vehicles.size()) return false;
  for (std::size_t v = 0; v < a.vehicles.size(); ++v) {
    const auto& wa = a.vehicles[v];
    const auto& wb = b.vehicles[v];
    if (wa.size() != wb.size()) return false;
    for (std::size_t i = 0; i < wa.size(); ++i)
      if (wa[i].time != wb[i].time || wa[i].x != wb[i].x || wa[i].y != wb[i].y || wa[i].speed != wb[i].speed)
        return false;
  }
  return true;
}

TEST(Manhattan, StraightCorridorKinematics) {
  // A 1-block-high corridor forces pure x-axis movement: positions advance
  // v * dt along one axis.
  ManhattanParams p;
  p.grid_block = 100;
  p.width = 5000;
  p.height = 100;
  p.duration = 30;
  p.turn_probability = 0;
  p.vehicle_count = 1;
  p.seed = 11;
  MobilityTrace trace = generate_manhattan(p);
  const auto& wps = trace.vehicles[0];
  ASSERT_GE(wps.size(), 2u);
  double v0 = wps[0].speed;
  EXPECT_GT(v0, 0);
  Vec2 p0 = position_at(trace, 0, 1.0);
  Vec2 p1 = position_at(trace, 0, 2.0);
  EXPECT_NEAR(distance(p0, p1), v0, 1e-9);
}

TEST(Manhattan, DeterministicForFixedSeed) {
  ManhattanParams p;
  p.vehicle_count = 10;
  p.seed = 99;
  MobilityTrace first = generate_manhattan(p);
  EXPECT_TRUE(same_waypoints(first, generate_manhattan(p)));
  p.seed = 100;
  EXPECT_FALSE(same_waypoints(first, generate_manhattan(p)));
}

TEST(Manhattan, TraceValidatorPasses) {
  ManhattanParams p;
  p.grid_block = 250;
  p.width = 2000;
  p.height = 2000;
  p.duration = 100;
  p.vehicle_count = 30;
  p.seed = 3;
  MobilityTrace trace = generate_manhattan(p);
  auto issues = validate_trace(trace, kmh_to_mps(p.max_speed_kmh), p.grid_block);
  for (const auto& issue : issues) ADD_FAILURE() << "vehicle " << issue.vehicle << ": " << issue.what;
}

TEST(Rwp, PauseEqualToDurationNeverMoves) {
  RwpParams p;
  p.pause_s = 50;
  p.duration = 50;
  p.seed = 5;
  MobilityTrace trace = generate_rwp(p);
  Vec2 start = position_at(trace, 0, 0);
  Vec2 end = position_at(trace, 0, 50);
  EXPECT_EQ(start.x, end.x);
  EXPECT_EQ(start.y, end.y);
}

TEST(Rwp, DeterministicForFixedSeed) {
  RwpParams p;
  p.vehicle_count = 8;
  p.seed = 21;
  EXPECT_TRUE(same_waypoints(generate_rwp(p), generate_rwp(p)));
}

TEST(Rwp, SegmentSpeedsWithinConfiguredRange) {
  RwpParams p;
  p.min_speed_kmh = 40;
  p.max_speed_kmh = 120;
  p.vehicle_count = 12;
  p.duration = 200;
  p.seed = 8;
  MobilityTrace trace = generate_rwp(p);
  EXPECT_TRUE(validate_trace(trace, kmh_to_mps(p.max_speed_kmh)).empty());
  for (const auto& wps : trace.vehicles)
    for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
      double d = distance({wps[i].x, wps[i].y}, {wps[i + 1].x, wps[i + 1].y});
      if (d < 1e-12) continue;  // pause
      double implied = d / (wps[i + 1].time - wps[i].time);
      EXPECT_GE(implied, kmh_to_mps(p.min_speed_kmh) - 1e-9);
      EXPECT_LE(implied, kmh_to_mps(p.max_speed_kmh) + 1e-9);
    }
}

TEST(Rwp, MinSpeedMustBePositive) {
  RwpParams p;
  p.min_speed_kmh = 0;
  EXPECT_THROW(generate_rwp(p), ArgumentError);
}

TEST(PositionAt, ExactHitAndMidpoint) {
  MobilityTrace trace;
  trace.width = trace.height = 1000;
  trace.duration = 10;
  trace.vehicles.push_back({{0, 0, 0, 10}, {10, 100, 0, 0}});
  Vec2 hit = position_at(trace, 0, 10);
  EXPECT_EQ(hit.x, 100);
  Vec2 mid = position_at(trace, 0, 5);
  EXPECT_DOUBLE_EQ(mid.x, 50);
  EXPECT_DOUBLE_EQ(mid.y, 0);
  EXPECT_THROW(position_at(trace, 0, 11), QueryError);
  EXPECT_THROW(position_at(trace, 1, 5), QueryError);
}

// Finite-difference check: speed reconstructed from dense samples matches
// the waypoint speed.
TEST(PositionAt, SampledSpeedMatchesWaypointSpeed) {
  RwpParams p;
  p.duration = 60;
  p.seed = 17;
  MobilityTrace trace = generate_rwp(p);
  const auto& wps = trace.vehicles[0];
  for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
    if (wps[i].speed <= 0) continue;
    double t0 = wps[i].time;
    double t1 = std::min(wps[i + 1].time, trace.duration);
    if (t1 - t0 < 1e-6) continue;
    double h = (t1 - t0) / 16;
    Vec2 a = position_at(trace, 0, t0);
    Vec2 b = position_at(trace, 0, t0 + h);
    EXPECT_NEAR(distance(a, b) / h, wps[i].speed, 1e-9);
  }
}

TEST(Ns2Import, MinimalFile) {
  std::istringstream in(
      "$node_(0) set X_ 10.0\n"
      "$node_(0) set Y_ 20.0\n"
      "$ns_ at 0.0 \"$node_(0) setdest 110.0 20.0 10.0\"\n");
  MobilityTrace trace = import_movement_trace(in);
  ASSERT_EQ(trace.vehicles.size(), 1u);
  ASSERT_EQ(trace.vehicles[0].size(), 2u);
  EXPECT_EQ(trace.vehicles[0][0].speed, 10.0);
  EXPECT_EQ(trace.vehicles[0][1].time, 10.0);
  EXPECT_EQ(trace.vehicles[0][1].x, 110.0);
}

TEST(Ns2Import, UnknownDirectiveRejected) {
  std::istringstream bad1("$node_(0) set Q_ 1.0\n");
  EXPECT_THROW(import_movement_trace(bad1), ParseError);
  std::istringstream bad2("$ns_ at 1.0 \"$node_(0) teleport 1 2 3\"\n");
  EXPECT_THROW(import_movement_trace(bad2), ParseError);
  std::istringstream bad3("fnord\n");
  EXPECT_THROW(import_movement_trace(bad3), ParseError);
  std::istringstream bad4("$node_(0) set X_ twelve\n");
  EXPECT_THROW(import_movement_trace(bad4), ParseError);
}

TEST(Ns2Import, ExportImportRoundTripIsIdentical) {
  RwpParams rp;
  rp.vehicle_count = 5;
  rp.pause_s = 2;
  rp.duration = 120;
  rp.seed = 33;
  MobilityTrace rwp = generate_rwp(rp);
  std::ostringstream out;
  export_ns2(rwp, out);
  std::istringstream in(out.str());
  EXPECT_TRUE(same_waypoints(rwp, import_movement_trace(in)));

  ManhattanParams mp;
  mp.vehicle_count = 5;
  mp.duration = 80;
  mp.seed = 34;
  MobilityTrace man = generate_manhattan(mp);
  std::ostringstream out2;
  export_ns2(man, out2);
  std::istringstream in2(out2.str());
  EXPECT_TRUE(same_waypoints(man, import_movement_trace(in2)));
}

}  // namespace
}  // namespace vanet
