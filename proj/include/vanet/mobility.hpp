#pragma once

// Vehicle movement: Manhattan-grid (city) and random-waypoint (highway)
// trace generation, ns-2 movement-file import/export, and interpolated
// position queries. Traces are piecewise constant-velocity, so linear
// interpolation between waypoints is exact.

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vanet/errors.hpp"
#include "vanet/geometry.hpp"
#include "vanet/rng.hpp"

namespace vanet {

struct Waypoint {
  double time = 0;   // sim-seconds
  double x = 0;      // meters
  double y = 0;
  double speed = 0;  // outgoing speed toward the next waypoint, m/s
};

struct MobilityTrace {
  std::vector<std::vector<Waypoint>> vehicles;  // ordered waypoints per vehicle
  double width = 0;                             // bounds, meters
  double height = 0;
  double duration = 0;  // seconds

  std::size_t vehicle_count() const { return vehicles.size(); }
};

struct ManhattanParams {
  double grid_block = 250;     // meters between intersections
  double max_speed_kmh = 60;   // city limit
  double turn_probability = 0.5;
  double width = 2000;
  double height = 2000;
  double duration = 100;
  std::uint32_t vehicle_count = 1;
  std::uint64_t seed = 0;
};

struct RwpParams {
  double max_speed_kmh = 120;
  double min_speed_kmh = 40;  // strictly positive, avoids the RWP stall pathology
  double pause_s = 0;
  double width = 2000;
  double height = 2000;
  double duration = 100;
  std::uint32_t vehicle_count = 1;
  std::uint64_t seed = 0;
};

namespace detail {

inline void push_waypoint(std::vector<Waypoint>& wps, double t, Vec2 p, double speed) {
  wps.push_back({t, p.x, p.y, speed});
}

}  // namespace detail

// Vehicles move along grid lines only, turning at intersections with the
// configured probability and reflecting off the bounds.
inline MobilityTrace generate_manhattan(const ManhattanParams& p) {
  if (p.grid_block <= 0 || p.width < p.grid_block || p.height < p.grid_block)
    throw ArgumentError("manhattan: bounds must contain at least one block");
  if (p.max_speed_kmh <= 0) throw ArgumentError("manhattan: max speed must be positive");

  MobilityTrace trace;
  trace.width = p.width;
  trace.height = p.height;
  trace.duration = p.duration;

  const auto cols = static_cast<std::int64_t>(std::floor(p.width / p.grid_block));
  const auto rows = static_cast<std::int64_t>(std::floor(p.height / p.grid_block));
  const double vmax = kmh_to_mps(p.max_speed_kmh);

  for (std::uint32_t v = 0; v < p.vehicle_count; ++v) {
    Rng rng(derive_seed(p.seed, {0x3a11ULL, v}));
    std::vector<Waypoint> wps;

    std::int64_t ix = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(cols + 1)));
    std::int64_t iy = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(rows + 1)));
    // Per-vehicle cruise speed in [vmax/2, vmax].
    const double speed = rng.uniform(vmax / 2, vmax);
    int dir = static_cast<int>(rng.next_below(4));  // 0:+x 1:-x 2:+y 3:-y

    Vec2 pos{static_cast<double>(ix) * p.grid_block, static_cast<double>(iy) * p.grid_block};
    detail::push_waypoint(wps, 0, pos, speed);
    // Current time is always recomputed from the last waypoint so that an
    // exported trace reimports to bit-identical times.
    double t = 0;

    while (t < p.duration) {
      auto blocked = [&](int d) {
        return (d == 0 && ix >= cols) || (d == 1 && ix <= 0) || (d == 2 && iy >= rows) || (d == 3 && iy <= 0);
      };
      if (blocked(dir) || rng.chance(p.turn_probability)) {
        // Turn onto the crossing street; fall back to reversing when the
        // crossing street is blocked at a border intersection.
        int first = (dir < 2) ? 2 : 0;
        int pick = static_cast<int>(rng.next_below(2));
        int options[3] = {first + pick, first + (pick ^ 1), dir ^ 1};
        int chosen = options[2];
        for (int o : options)
          if (!blocked(o)) {
            chosen = o;
            break;
          }
        dir = chosen;
        if (t > wps.back().time) detail::push_waypoint(wps, t, pos, speed);
      }
      switch (dir) {
        case 0: ++ix; break;
        case 1: --ix; break;
        case 2: ++iy; break;
        case 3: --iy; break;
      }
      pos = {static_cast<double>(ix) * p.grid_block, static_cast<double>(iy) * p.grid_block};
      const Waypoint& leg = wps.back();
      t = leg.time + distance({leg.x, leg.y}, pos) / speed;
    }
    if (t > wps.back().time)
      detail::push_waypoint(wps, t, pos, 0);
    else
      wps.back().speed = 0;
    trace.vehicles.push_back(std::move(wps));
  }
  return trace;
}

// Straight segments between uniform random waypoints, optional pauses.
inline MobilityTrace generate_rwp(const RwpParams& p) {
  if (p.min_speed_kmh <= 0 || p.max_speed_kmh < p.min_speed_kmh)
    throw ArgumentError("rwp: need 0 < min_speed <= max_speed");
  if (p.width <= 0 || p.height <= 0) throw ArgumentError("rwp: bad bounds");

  MobilityTrace trace;
  trace.width = p.width;
  trace.height = p.height;
  trace.duration = p.duration;

  for (std::uint32_t v = 0; v < p.vehicle_count; ++v) {
    Rng rng(derive_seed(p.seed, {0x4409ULL, v}));
    std::vector<Waypoint> wps;
    Vec2 pos{rng.uniform(0, p.width), rng.uniform(0, p.height)};
    detail::push_waypoint(wps, 0, pos, 0);
    double t = 0;
    while (t < p.duration) {
      // Pause-first convention: the node rests, then picks a destination.
      if (p.pause_s > 0) {
        t += p.pause_s;
        if (t >= p.duration) break;
        detail::push_waypoint(wps, t, pos, 0);
      }
      Vec2 dest;
      double leg = 0;
      do {
        dest = {rng.uniform(0, p.width), rng.uniform(0, p.height)};
        leg = distance(pos, dest);
      } while (leg < 1e-9);
      double speed = kmh_to_mps(rng.uniform(p.min_speed_kmh, p.max_speed_kmh));
      wps.back().speed = speed;
      t = wps.back().time + leg / speed;
      detail::push_waypoint(wps, t, dest, 0);
      pos = dest;
    }
    trace.vehicles.push_back(std::move(wps));
  }
  return trace;
}

// Position at an arbitrary time, linearly interpolated between the
// bracketing waypoints.
inline Vec2 position_at(const MobilityTrace& trace, std::size_t vehicle, double time) {
  if (vehicle >= trace.vehicles.size()) throw QueryError("position_at: no such vehicle");
  const auto& wps = trace.vehicles[vehicle];
  if (wps.empty()) throw QueryError("position_at: empty trace");
  if (time < 0 || time > trace.duration) throw QueryError("position_at: time outside trace");
  if (time <= wps.front().time) return {wps.front().x, wps.front().y};
  if (time >= wps.back().time) return {wps.back().x, wps.back().y};
  // Binary search for the segment containing `time`.
  std::size_t lo = 0, hi = wps.size() - 1;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    (wps[mid].time <= time ? lo : hi) = mid;
  }
  const Waypoint& a = wps[lo];
  const Waypoint& b = wps[hi];
  double f = (time - a.time) / (b.time - a.time);
  return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
}

// --- trace validation -------------------------------------------------------

struct TraceIssue {
  std::size_t vehicle;
  std::string what;
};

inline std::vector<TraceIssue> validate_trace(const MobilityTrace& trace, double max_speed_mps,
                                              std::optional<double> grid_block = std::nullopt) {
  std::vector<TraceIssue> issues;
  const double eps = 1e-6;
  for (std::size_t v = 0; v < trace.vehicles.size(); ++v) {
    const auto& wps = trace.vehicles[v];
    for (std::size_t i = 0; i < wps.size(); ++i) {
      const auto& w = wps[i];
      if (w.x < -eps || w.x > trace.width + eps || w.y < -eps || w.y > trace.height + eps)
        issues.push_back({v, "position out of bounds"});
      if (i > 0) {
        if (wps[i].time <= wps[i - 1].time) issues.push_back({v, "times not strictly increasing"});
        double implied = distance({wps[i - 1].x, wps[i - 1].y}, {w.x, w.y}) / (w.time - wps[i - 1].time);
        if (implied > max_speed_mps + eps) issues.push_back({v, "segment exceeds max speed"});
      }
      if (grid_block) {
        double gx = std::abs(std::remainder(w.x, *grid_block));
        double gy = std::abs(std::remainder(w.y, *grid_block));
        if (gx > eps && gy > eps) issues.push_back({v, "waypoint off the grid"});
      }
    }
  }
  return issues;
}

// --- ns-2 movement format ---------------------------------------------------
//
//   $node_(3) set X_ 120.5
//   $node_(3) set Y_ 80.0
//   $ns_ at 2.5 "$node_(3) setdest 400.0 80.0 13.9"
//
// Import reconstructs the waypoint list exactly; export emits one setdest
// per moving segment. Numbers are printed with enough digits that reading
// them back reproduces the identical double.

inline std::string format_exact(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline void export_ns2(const MobilityTrace& trace, std::ostream& out) {
  for (std::size_t v = 0; v < trace.vehicles.size(); ++v) {
    const auto& wps = trace.vehicles[v];
    if (wps.empty()) continue;
    out << "$node_(" << v << ") set X_ " << format_exact(wps.front().x) << "\n";
    out << "$node_(" << v << ") set Y_ " << format_exact(wps.front().y) << "\n";
  }
  for (std::size_t v = 0; v < trace.vehicles.size(); ++v) {
    const auto& wps = trace.vehicles[v];
    for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
      const auto& a = wps[i];
      const auto& b = wps[i + 1];
      if (a.x == b.x && a.y == b.y) continue;  // pause: no directive
      out << "$ns_ at " << format_exact(a.time) << " \"$node_(" << v << ") setdest " << format_exact(b.x)
          << " " << format_exact(b.y) << " " << format_exact(a.speed) << "\"\n";
    }
  }
}

inline void export_trace_csv(const MobilityTrace& trace, std::ostream& out) {
  out << "vehicle_id,time_s,x_m,y_m,speed_mps\n";
  for (std::size_t v = 0; v < trace.vehicles.size(); ++v)
    for (const auto& w : trace.vehicles[v])
      out << v << "," << format_exact(w.time) << "," << format_exact(w.x) << "," << format_exact(w.y) << ","
          << format_exact(w.speed) << "\n";
}

namespace detail {

struct Ns2Setdest {
  double at;
  double x, y, speed;
};

inline std::size_t parse_node_index(const std::string& token, std::size_t line_no) {
  // token looks like $node_(12)
  auto open = token.find("$node_(");
  auto close = token.find(')');
  if (open != 0 || close == std::string::npos || close < 8)
    throw ParseError("line " + std::to_string(line_no) + ": bad node reference");
  std::size_t idx = 0;
  try {
    idx = std::stoul(token.substr(7, close - 7));
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad node index");
  }
  return idx;
}

inline double parse_double(const std::string& token, std::size_t line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + token + "'");
  }
}

}  // namespace detail

inline MobilityTrace import_movement_trace(std::istream& in) {
  std::vector<Vec2> initial;
  std::vector<bool> have_x, have_y;
  std::vector<std::vector<detail::Ns2Setdest>> moves;

  auto ensure_node = [&](std::size_t idx) {
    if (idx >= initial.size()) {
      initial.resize(idx + 1);
      have_x.resize(idx + 1, false);
      have_y.resize(idx + 1, false);
      moves.resize(idx + 1);
    }
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string first;
    ss >> first;
    if (first.rfind("$node_(", 0) == 0) {
      std::size_t idx = detail::parse_node_index(first, line_no);
      std::string set_kw, axis, value;
      ss >> set_kw >> axis >> value;
      if (set_kw != "set" || value.empty())
        throw ParseError("line " + std::to_string(line_no) + ": expected 'set <axis> <value>'");
      ensure_node(idx);
      double v = detail::parse_double(value, line_no);
      if (axis == "X_") {
        initial[idx].x = v;
        have_x[idx] = true;
      } else if (axis == "Y_") {
        initial[idx].y = v;
        have_y[idx] = true;
      } else if (axis == "Z_") {
        // accepted and ignored; traces are planar
      } else {
        throw ParseError("line " + std::to_string(line_no) + ": unknown axis '" + axis + "'");
      }
    } else if (first == "$ns_") {
      std::string at_kw, at_value, rest;
      ss >> at_kw >> at_value;
      std::getline(ss, rest);
      if (at_kw != "at") throw ParseError("line " + std::to_string(line_no) + ": expected 'at'");
      double at = detail::parse_double(at_value, line_no);
      auto q1 = rest.find('"');
      auto q2 = rest.rfind('"');
      if (q1 == std::string::npos || q2 <= q1)
        throw ParseError("line " + std::to_string(line_no) + ": expected quoted action");
      std::istringstream action(rest.substr(q1 + 1, q2 - q1 - 1));
      std::string node_tok, verb, xs, ys, ss_;
      action >> node_tok >> verb >> xs >> ys >> ss_;
      if (verb != "setdest")
        throw ParseError("line " + std::to_string(line_no) + ": unknown directive '" + verb + "'");
      std::size_t idx = detail::parse_node_index(node_tok, line_no);
      ensure_node(idx);
      moves[idx].push_back({at, detail::parse_double(xs, line_no), detail::parse_double(ys, line_no),
                            detail::parse_double(ss_, line_no)});
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown directive '" + first + "'");
    }
  }

  MobilityTrace trace;
  double max_t = 0, max_x = 0, max_y = 0;
  for (std::size_t v = 0; v < initial.size(); ++v) {
    if (!have_x[v] || !have_y[v]) throw ParseError("node " + std::to_string(v) + ": missing initial position");
    std::vector<Waypoint> wps;
    detail::push_waypoint(wps, 0, initial[v], 0);
    for (const auto& mv : moves[v]) {
      if (mv.speed <= 0) throw ParseError("setdest with non-positive speed");
      Waypoint& last = wps.back();
      if (mv.at < last.time - 1e-12) throw ParseError("setdest times must be non-decreasing");
      if (mv.at > last.time) {
        // Stationary gap (pause) before this leg starts.
        detail::push_waypoint(wps, mv.at, {last.x, last.y}, mv.speed);
      } else {
        last.speed = mv.speed;
      }
      const Waypoint& from = wps.back();
      double leg = distance({from.x, from.y}, {mv.x, mv.y});
      detail::push_waypoint(wps, from.time + leg / mv.speed, {mv.x, mv.y}, 0);
    }
    for (const auto& w : wps) {
      max_t = std::max(max_t, w.time);
      max_x = std::max(max_x, w.x);
      max_y = std::max(max_y, w.y);
    }
    trace.vehicles.push_back(std::move(wps));
  }
  trace.duration = max_t;
  trace.width = max_x;
  trace.height = max_y;
  return trace;
}

inline MobilityTrace import_movement_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file: " + path);
  return import_movement_trace(in);
}

}  // namespace vanet
