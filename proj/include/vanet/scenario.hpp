#pragma once

// Builds ready-to-run worlds: an RSU grid over a rectangular area,
// managers owning contiguous geographic strips, a vehicle fleet following
// a generated mobility trace, and the CA.

#include <memory>

#include "vanet/netsim.hpp"

namespace vanet {

enum class MobilityModel { Manhattan, Highway };

struct ScenarioConfig {
  WorldConfig world;
  double area_width = 2000;
  double area_height = 2000;
  double rsu_spacing = 500;  // the analytic d
  std::uint32_t managers = 4;
  std::uint32_t vehicles = 30;
  MobilityModel model = MobilityModel::Manhattan;
  double max_speed_kmh = 60;
  double min_speed_kmh = 40;  // highway model only
  double grid_block = 250;
  double turn_probability = 0.5;
  double pause_s = 0;

  std::uint32_t rsu_cols() const { return static_cast<std::uint32_t>(area_width / rsu_spacing); }
  std::uint32_t rsu_rows() const { return static_cast<std::uint32_t>(area_height / rsu_spacing); }
  std::uint32_t rsu_count() const { return rsu_cols() * rsu_rows(); }
};

inline MobilityTrace make_scenario_trace(const ScenarioConfig& cfg) {
  if (cfg.model == MobilityModel::Manhattan) {
    ManhattanParams mp;
    mp.grid_block = cfg.grid_block;
    mp.max_speed_kmh = cfg.max_speed_kmh;
    mp.turn_probability = cfg.turn_probability;
    mp.width = cfg.area_width;
    mp.height = cfg.area_height;
    mp.duration = cfg.world.duration;
    mp.vehicle_count = cfg.vehicles;
    mp.seed = derive_seed(cfg.world.seed, {0x7aceULL});
    return generate_manhattan(mp);
  }
  RwpParams rp;
  rp.max_speed_kmh = cfg.max_speed_kmh;
  rp.min_speed_kmh = cfg.min_speed_kmh;
  rp.pause_s = cfg.pause_s;
  rp.width = cfg.area_width;
  rp.height = cfg.area_height;
  rp.duration = cfg.world.duration;
  rp.vehicle_count = cfg.vehicles;
  rp.seed = derive_seed(cfg.world.seed, {0x7aceULL});
  return generate_rwp(rp);
}

// RSUs on a uniform grid at cell centers; managers take equal contiguous
// chunks in column-major order (vertical strips, possibly splitting a
// column when counts do not divide evenly).
inline std::unique_ptr<SimWorld> build_scenario(const ScenarioConfig& cfg) {
  if (cfg.rsu_count() == 0) throw ConfigError("area too small for the RSU spacing");
  if (cfg.managers == 0) throw ConfigError("need at least one manager");

  auto world = std::make_unique<SimWorld>(cfg.world);
  world->add_ca(cfg.world.cert_lifetime);

  std::vector<EntityId> mgr_ids;
  std::uint32_t manager_count = std::min(cfg.managers, cfg.rsu_count());
  for (std::uint32_t i = 0; i < manager_count; ++i) mgr_ids.push_back(world->add_manager());

  const std::uint32_t n = cfg.rsu_count();
  std::uint32_t placed = 0;
  for (std::uint32_t ix = 0; ix < cfg.rsu_cols(); ++ix)
    for (std::uint32_t iy = 0; iy < cfg.rsu_rows(); ++iy) {
      std::size_t owner = static_cast<std::size_t>(placed) * manager_count / n;
      Vec2 pos{(ix + 0.5) * cfg.rsu_spacing, (iy + 0.5) * cfg.rsu_spacing};
      world->add_rsu(mgr_ids[owner], pos);
      ++placed;
    }

  for (std::uint32_t i = 0; i < cfg.vehicles; ++i) world->add_vehicle();
  world->set_trace(make_scenario_trace(cfg));
  return world;
}

}  // namespace vanet
