#pragma once

// Closed-form revocation cost model and the sweep tables behind the
// speed and area studies. A revoked vehicle moved at most r = v*l from
// where it was issued, so at most ceil(r/d)+1 RSUs along one direction
// need the revocation, against N for a network-wide broadcast.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "vanet/errors.hpp"
#include "vanet/geometry.hpp"

namespace vanet {

struct TimingParams {
  double t_p_ca = 0;   // processing at the CA, seconds
  double t_ca = 0;     // CA -> manager travel
  double t_p_man = 0;  // processing at the manager
  double t_man = 0;    // manager -> RSU travel
  double t_p_rsu = 0;  // processing at an RSU
  double t_rsu = 0;    // RSU -> RSU travel
};

// Radius of the disc the vehicle can have reached: r = v * l, with the
// speed converted from km/h.
inline double radius_m(double v_kmh, double lifetime_s) {
  if (v_kmh < 0) throw ArgumentError("radius: negative speed");
  if (lifetime_s <= 0) throw ArgumentError("radius: lifetime must be positive");
  return kmh_to_mps(v_kmh) * lifetime_s;
}

// Messages to cover one direction of travel: m = ceil(r/d) + 1. The
// quotient is snapped to a nearby integer first so that unit conversions
// (km/h to m/s is inexact in binary) cannot push an exact ratio over the
// next ceiling.
inline std::uint64_t message_count(double r_m, double d_m) {
  if (d_m <= 0) throw ArgumentError("message_count: RSU spacing must be positive");
  if (r_m < 0) throw ArgumentError("message_count: negative radius");
  double q = r_m / d_m;
  double nearest = std::round(q);
  if (std::abs(q - nearest) < 1e-9 * std::max(1.0, q)) q = nearest;
  return static_cast<std::uint64_t>(std::ceil(q)) + 1;
}

// Percentage of the network's RSUs that carry the revocation: p = m/N * 100.
inline double node_percentage(std::uint64_t m, std::uint64_t n_total) {
  if (n_total < 1) throw ArgumentError("node_percentage: need at least one RSU");
  if (m > n_total) throw ArgumentError("node_percentage: more targets than RSUs");
  return static_cast<double>(m) / static_cast<double>(n_total) * 100.0;
}

// End-to-end revocation latency with n sequential RSU hops.
inline double e2e_time(const TimingParams& tp, std::uint64_t n) {
  return tp.t_p_ca + tp.t_ca + tp.t_p_man + tp.t_man +
         static_cast<double>(n) * (tp.t_p_rsu + tp.t_rsu);
}

struct AnalyticPoint {
  const char* model = "";
  double v_kmh = 0;
  double l_s = 0;
  double d_m = 0;
  std::uint64_t n_total = 0;
  double r_m = 0;
  std::uint64_t m_msgs = 0;   // clamped to N when the disc covers the network
  double p_pct = 0;
  std::uint64_t brd_msgs = 0; // always N
  bool saturated = false;     // raw m exceeded N
};

inline AnalyticPoint evaluate_point(const char* model, double v_kmh, double l_s, double d_m,
                                    std::uint64_t n_total) {
  AnalyticPoint pt;
  pt.model = model;
  pt.v_kmh = v_kmh;
  pt.l_s = l_s;
  pt.d_m = d_m;
  pt.n_total = n_total;
  pt.r_m = radius_m(v_kmh, l_s);
  std::uint64_t raw = message_count(pt.r_m, d_m);
  pt.saturated = raw > n_total;
  pt.m_msgs = pt.saturated ? n_total : raw;
  pt.p_pct = node_percentage(pt.m_msgs, n_total);
  pt.brd_msgs = n_total;
  return pt;
}

// Speed sweep (the Fig. 10-style table): one row per speed.
inline std::vector<AnalyticPoint> sweep_speed(const char* model, double l_s, double d_m,
                                              std::uint64_t n_total, const std::vector<double>& speeds) {
  if (speeds.empty()) throw ArgumentError("sweep_speed: empty range");
  std::vector<AnalyticPoint> rows;
  rows.reserve(speeds.size());
  for (double v : speeds) rows.push_back(evaluate_point(model, v, l_s, d_m, n_total));
  return rows;
}

// Area sweep (the Fig. 13-style table): N grows with the area at a fixed
// RSU density; the targeted message count does not.
inline std::vector<AnalyticPoint> sweep_area(const char* model, double v_kmh, double l_s, double d_m,
                                             double rsu_per_km2, const std::vector<double>& areas_km2) {
  if (areas_km2.empty()) throw ArgumentError("sweep_area: empty range");
  std::vector<AnalyticPoint> rows;
  rows.reserve(areas_km2.size());
  for (double a : areas_km2) {
    auto n = static_cast<std::uint64_t>(std::llround(a * rsu_per_km2));
    if (n < 1) throw ArgumentError("sweep_area: density too low for area");
    rows.push_back(evaluate_point(model, v_kmh, l_s, d_m, n));
  }
  return rows;
}

inline void write_analytic_csv(const std::vector<AnalyticPoint>& rows, std::ostream& out) {
  out << "model,v_kmh,l_s,d_m,N,r_m,m_msgs,p_pct,brd_msgs\n";
  for (const auto& r : rows)
    out << r.model << "," << r.v_kmh << "," << r.l_s << "," << r.d_m << "," << r.n_total << "," << r.r_m
        << "," << r.m_msgs << "," << r.p_pct << "," << r.brd_msgs << "\n";
}

}  // namespace vanet
