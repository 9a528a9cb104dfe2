#include "vanet/adversary.hpp"

#include <gtest/gtest.h>

#include "vanet/scenario.hpp"
#include "vanet/schemes.hpp"

namespace vanet {
namespace {

constexpr AttackKind kAllScenarios[] = {AttackKind::Replay, AttackKind::MitmTamper, AttackKind::Sybil,
                                        AttackKind::MasqueradeCa, AttackKind::MasqueradeVehicle};

TEST(Adversary, EveryScenarioFailsAndVictimRecovers) {
  for (AttackKind kind : kAllScenarios) {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      AttackOutcome out = run_attack(kind, seed);
      EXPECT_FALSE(out.succeeded) << out.report();
      EXPECT_TRUE(out.victim_certified) << out.report();
      EXPECT_GE(out.detection_events, out.injections) << out.report();
      EXPECT_GE(out.detection_events, 1u) << out.report();
    }
  }
}

TEST(Adversary, ScenariosHoldUnderRealCrypto) {
  for (AttackKind kind : kAllScenarios) {
    AttackOutcome out = run_attack(kind, 9, CryptoMode::Real);
    EXPECT_FALSE(out.succeeded) << out.report();
    EXPECT_TRUE(out.victim_certified) << out.report();
    EXPECT_GE(out.detection_events, 1u) << out.report();
  }
}

TEST(Adversary, ReportIsStructuredText) {
  AttackOutcome out = run_attack(AttackKind::Replay, 4);
  std::string report = out.report();
  EXPECT_NE(report.find("scenario=replay"), std::string::npos);
  EXPECT_NE(report.find("succeeded=false"), std::string::npos);
  EXPECT_NE(report.find("victim_certified=true"), std::string::npos);
}

// With no adversary, a full experiment-style run must log zero security
// events: detections never fire on benign traffic.
TEST(Adversary, NoFalsePositivesWithoutAttacker) {
  for (auto model : {MobilityModel::Manhattan, MobilityModel::Highway}) {
    ScenarioConfig cfg;
    cfg.world.seed = 1234;
    cfg.world.duration = 150;
    cfg.world.cert_lifetime = 120;  // forces mid-run refreshes too
    cfg.vehicles = 25;
    cfg.model = model;
    auto world = build_scenario(cfg);
    world->start_protocol();
    run_revocation(*world, SchemeKind::Dyn, world->vehicles()[2].id, 80);
    EXPECT_TRUE(world->security_log().empty());
  }
}

}  // namespace
}  // namespace vanet
