#pragma once

// Pluggable revocation strategies and per-run metric extraction.
//
//   DYN — targeted: the CA messages the manager on record, managers fan
//         out to the vehicle's chain RSUs (or their whole domain in
//         region granularity), only those RSUs broadcast.
//   BRD — baseline: the CA floods every manager, every manager floods
//         every RSU, every RSU broadcasts.

#include <ostream>

#include "vanet/analytics.hpp"
#include "vanet/netsim.hpp"

namespace vanet {

enum class SchemeKind { Dyn, Brd };

inline const char* scheme_name(SchemeKind s) { return s == SchemeKind::Dyn ? "DYN" : "BRD"; }

struct RevocationMetrics {
  SchemeKind scheme = SchemeKind::Dyn;
  std::uint64_t messages_sent = 0;     // transmissions in the revocation flow
  std::uint64_t rsu_targets = 0;       // RSU-directed messages
  std::uint64_t forwards = 0;          // manager-to-manager hops
  std::uint64_t broadcasts = 0;        // local warning broadcasts
  std::uint64_t vehicles_warned = 0;   // distinct vehicles that processed the warning
  std::uint64_t intended_recipients = 0;
  double delivery_ratio = 0;           // warned / intended, 0 when none intended
  double t_e2e_measured = -1;          // initiation to last warning delivery; -1 if none
  std::vector<std::size_t> chain_lengths;
  bool moot = false;                   // nothing routable at revocation time
};

// Denominator of the delivery ratio: who should have been warned.
//   BRD: every live vehicle.
//   DYN: vehicles within radio range of any of the target's chain RSUs.
inline std::uint64_t intended_recipients(SimWorld& world, SchemeKind scheme, const Elp& target) {
  if (scheme == SchemeKind::Brd) return world.vehicles().size();
  std::set<EntityId> chain_rsus;
  for (auto& m : world.managers()) {
    auto it = m.registry.find(target);
    if (it == m.registry.end()) continue;
    for (EntityId r : it->second.rsu_chain) chain_rsus.insert(r);
  }
  std::set<EntityId> covered;
  for (EntityId rid : chain_rsus) {
    const RsuNode& r = world.rsu_of(rid);
    for (std::size_t i = 0; i < world.vehicles().size(); ++i)
      if (distance(world.vehicle_position(i), r.position) <= r.range) covered.insert(world.vehicles()[i].id);
  }
  return covered.size();
}

// Kicks off a revocation inside the running world. The caller decides when
// (schedule it) and harvests metrics after the world has settled.
inline void start_revocation(SimWorld& world, SchemeKind scheme, const Elp& target, RevokeMode dyn_mode) {
  auto ctx = world.context();
  CaNode::RevocationStart start = scheme == SchemeKind::Brd
                                      ? world.ca().initiate_flood_revocation(ctx, target)
                                      : world.ca().initiate_revocation(ctx, target, dyn_mode);
  world.begin_revocation_tracking(start.txn);
  if (scheme == SchemeKind::Brd) world.note_intended_all_vehicles();
  // The CA's own processing time elapses before anything hits the wire.
  world.schedule(world.config().link.proc_ca, [msgs = start.messages](SimWorld& w) {
    for (const auto& m : msgs) w.unicast(m);
  });
}

inline RevocationMetrics harvest_revocation(SimWorld& world, SchemeKind scheme) {
  RevocationMetrics out;
  out.scheme = scheme;
  auto& tracker = world.revocation_tracker();
  if (!tracker) {
    out.moot = true;
    return out;
  }
  out.messages_sent = tracker->messages;
  out.rsu_targets = tracker->rsu_messages;
  out.forwards = tracker->forwards;
  out.broadcasts = tracker->broadcasts;
  out.vehicles_warned = tracker->warned.size();
  out.intended_recipients = tracker->intended.size();
  out.delivery_ratio = out.intended_recipients
                           ? static_cast<double>(out.vehicles_warned) / static_cast<double>(out.intended_recipients)
                           : 0.0;
  out.t_e2e_measured = tracker->last_warning_time >= 0 ? tracker->last_warning_time - tracker->start_time : -1;
  out.chain_lengths = tracker->chain_lengths;
  out.moot = tracker->messages == 0;
  return out;
}

// Convenience wrapper: revoke `target` at `trigger_time` inside `world`,
// run to the end, return the metrics.
inline RevocationMetrics run_revocation(SimWorld& world, SchemeKind scheme, EntityId target_vehicle,
                                        double trigger_time, RevokeMode dyn_mode = RevokeMode::ChainRsus) {
  Elp target = world.vehicle_of(target_vehicle).identity.elp;
  world.schedule(trigger_time - world.now(), [scheme, target, dyn_mode](SimWorld& w) {
    start_revocation(w, scheme, target, dyn_mode);
  });
  world.run_to_end();
  return harvest_revocation(world, scheme);
}

inline void write_metrics_csv_header(std::ostream& out) {
  out << "scheme,seed,vehicles,rsus,managers,area_km2,delay_ms,messages_sent,rsu_targets,"
         "vehicles_warned,intended,delivery_ratio,t_e2e_s\n";
}

inline void write_metrics_csv_row(std::ostream& out, const RevocationMetrics& m, std::uint64_t seed,
                                  std::size_t vehicles, std::size_t rsus, std::size_t managers,
                                  double area_km2, double delay_ms) {
  out << scheme_name(m.scheme) << "," << seed << "," << vehicles << "," << rsus << "," << managers << ","
      << area_km2 << "," << delay_ms << "," << m.messages_sent << "," << m.rsu_targets << ","
      << m.vehicles_warned << "," << m.intended_recipients << "," << m.delivery_ratio << ","
      << m.t_e2e_measured << "\n";
}

}  // namespace vanet
