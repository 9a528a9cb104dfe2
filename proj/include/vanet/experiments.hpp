#pragma once

// Experiment definitions E1-E6: speed (analytic), density, area, delay,
// delivery ratio, and manager count. Each experiment expands its sweep,
// runs both schemes on identical worlds (same seed per replication, so
// message-count comparisons are apples to apples), and renders one
// per-run CSV plus one plot-data file per figure analogue.

#include <filesystem>
#include <memory>

#include "vanet/config.hpp"
#include "vanet/scenario.hpp"
#include "vanet/schemes.hpp"
#include "vanet/stats.hpp"

namespace vanet {

struct RunRecord {
  std::string model;
  double x = 0;  // the sweep coordinate of this run
  SchemeKind scheme = SchemeKind::Dyn;
  std::uint64_t seed = 0;
  std::uint32_t vehicles = 0;
  std::uint32_t rsus = 0;
  std::uint32_t managers = 0;
  double area_km2 = 0;
  double delay_ms = 0;
  RevocationMetrics metrics;
};

using FileSet = std::map<std::string, std::string>;

struct ExperimentOutput {
  std::string experiment;
  FileSet files;
  std::vector<RunRecord> runs;          // simulated experiments
  std::vector<AnalyticPoint> analytic;  // analytic experiments
};

// Declared per-experiment defaults. The original studies' exact setups are
// not published, so these are this artifact's pinned configurations; every
// output embeds them in its header.
inline ExperimentConfig default_experiment_config(const std::string& id) {
  ExperimentConfig c;
  c.experiment = id;
  if (id == "E2") {
    c.area_km2 = 9;
    c.rsu_spacing_m = 250;
    c.radio_range_m = 220;
    c.cert_lifetime_s = 240;
    c.duration_s = 240;
  } else if (id == "E3") {
    c.rsu_spacing_m = 500;
    c.radio_range_m = 300;
    c.cert_lifetime_s = 240;
    c.duration_s = 240;
  } else if (id == "E4") {
    c.area_km2 = 4;
    c.rsu_spacing_m = 500;
    c.radio_range_m = 300;
    c.cert_lifetime_s = 240;
    c.duration_s = 240;
  } else if (id == "E5") {
    c.area_km2 = 4;
    c.rsu_spacing_m = 500;
    c.radio_range_m = 300;
    c.cert_lifetime_s = 150;
    c.duration_s = 150;
  } else if (id == "E6") {
    c.area_km2 = 4;  // 2 km x 2 km
    c.rsu_spacing_m = 500;
    c.radio_range_m = 300;
    c.cert_lifetime_s = 100;
    c.duration_s = 100;
    c.model = "highway";
    c.speed_kmh = 140;
    c.min_speed_kmh = 80;
  }
  return c;
}

inline ScenarioConfig scenario_from(const ExperimentConfig& e, std::uint64_t seed) {
  ScenarioConfig s;
  s.world.seed = seed;
  s.world.crypto_mode = e.crypto == "real" ? CryptoMode::Real : CryptoMode::Mock;
  s.world.cert_lifetime = e.cert_lifetime_s;
  s.world.duration = e.duration_s;
  s.world.link.t_ca = e.t_ca_s;
  s.world.link.t_man = e.t_man_s;
  s.world.link.t_rsu = e.t_rsu_s;
  s.world.link.proc_ca = e.t_p_ca_s;
  s.world.link.proc_man = e.t_p_man_s;
  s.world.link.proc_rsu = e.t_p_rsu_s;
  s.world.link.radio_latency = e.radio_latency_s;
  s.world.link.radio_range = e.radio_range_m;
  s.world.link.loss_rate = e.loss_rate;
  double side = std::sqrt(e.area_km2) * 1000.0;
  s.area_width = side;
  s.area_height = side;
  s.rsu_spacing = e.rsu_spacing_m;
  s.managers = e.managers;
  s.vehicles = e.vehicles;
  s.model = e.model == "highway" ? MobilityModel::Highway : MobilityModel::Manhattan;
  s.max_speed_kmh = e.speed_kmh;
  s.min_speed_kmh = e.min_speed_kmh;
  return s;
}

// One simulated run: the first vehicle is revoked half a lifetime after it
// gets its certificate (capped near the end of the run).
inline RevocationMetrics simulate_revocation_run(const ScenarioConfig& cfg, SchemeKind scheme,
                                                 RevokeMode mode = RevokeMode::ChainRsus) {
  auto world = build_scenario(cfg);
  SimWorld& w = *world;
  w.start_protocol();
  if (w.vehicles().empty()) return {};
  EntityId target = w.vehicles()[0].id;
  Elp target_elp = w.vehicle_of(target).identity.elp;

  auto fired = std::make_shared<bool>(false);
  auto poll = std::make_shared<SimWorld::EventFn>();
  double lifetime = cfg.world.cert_lifetime;
  double duration = cfg.world.duration;
  *poll = [=](SimWorld& ww) {
    if (*fired) return;
    VehicleNode& v = ww.vehicle_of(target);
    double fallback = 0.8 * duration;
    std::optional<double> trigger;
    if (v.cert) trigger = std::min(v.cert->issue_time + lifetime / 2, duration - 2.0);
    else if (ww.now() >= fallback) trigger = ww.now();  // never certified: still exercise the scheme
    if (trigger) {
      *fired = true;
      double delay = std::max(*trigger - ww.now(), 0.0);
      ww.schedule(delay, [=](SimWorld& w2) { start_revocation(w2, scheme, target_elp, mode); });
    } else if (ww.now() + 0.5 <= duration) {
      ww.schedule(0.5, *poll);
    }
  };
  w.schedule(0.5, *poll);
  w.run_to_end();
  return harvest_revocation(w, scheme);
}

namespace detail {

inline std::vector<SchemeKind> parse_schemes(const std::string& csv) {
  std::vector<SchemeKind> out;
  std::istringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "DYN" || tok == "dyn") out.push_back(SchemeKind::Dyn);
    else if (tok == "BRD" || tok == "brd") out.push_back(SchemeKind::Brd);
    else if (!tok.empty()) throw ConfigError("unknown scheme: '" + tok + "'");
  }
  if (out.empty()) throw ConfigError("no schemes configured");
  return out;
}

inline std::string config_header(const ExperimentConfig& e) {
  std::ostringstream os;
  os << "# experiment=" << e.experiment << " model=" << e.model << " area_km2=" << e.area_km2
     << " vehicles=" << e.vehicles << " rsu_spacing_m=" << e.rsu_spacing_m << " managers=" << e.managers
     << " cert_lifetime_s=" << e.cert_lifetime_s << " speed_kmh=" << e.speed_kmh
     << " radio_range_m=" << e.radio_range_m << " loss_rate=" << e.loss_rate
     << " replications=" << e.replications << " seed=" << e.seed << " crypto=" << e.crypto << "\n";
  return os.str();
}

inline std::string runs_csv(const ExperimentConfig& e, const std::vector<RunRecord>& runs) {
  std::ostringstream os;
  os << config_header(e);
  write_metrics_csv_header(os);
  for (const auto& r : runs)
    write_metrics_csv_row(os, r.metrics, r.seed, r.vehicles, r.rsus, r.managers, r.area_km2, r.delay_ms);
  return os.str();
}

struct SeriesKey {
  std::string model;
  double x;
  SchemeKind scheme;
  bool operator<(const SeriesKey& o) const {
    if (model != o.model) return model < o.model;
    if (x != o.x) return x < o.x;
    return scheme < o.scheme;
  }
};

// Aggregates replications into "mean halfwidth" columns per (model, scheme).
inline std::string fig_dat(const std::vector<RunRecord>& runs, const std::string& x_name,
                           double (*metric)(const RevocationMetrics&)) {
  std::map<SeriesKey, std::vector<double>> series;
  std::set<double> xs;
  std::set<std::string> models;
  std::set<SchemeKind> schemes;
  for (const auto& r : runs) {
    series[{r.model, r.x, r.scheme}].push_back(metric(r.metrics));
    xs.insert(r.x);
    models.insert(r.model);
    schemes.insert(r.scheme);
  }
  std::ostringstream os;
  os << "# " << x_name;
  for (const auto& m : models)
    for (auto s : schemes) os << " " << m << "_" << scheme_name(s) << " " << m << "_" << scheme_name(s) << "_ci95";
  os << "\n";
  for (double x : xs) {
    os << x;
    for (const auto& m : models)
      for (auto s : schemes) {
        const auto& v = series[{m, x, s}];
        os << " " << mean(v) << " " << ci95_halfwidth(v);
      }
    os << "\n";
  }
  return os.str();
}

inline double metric_messages(const RevocationMetrics& m) { return static_cast<double>(m.messages_sent); }
inline double metric_ratio(const RevocationMetrics& m) { return m.delivery_ratio; }

// Expand one sweep dimension and run every (point, scheme, replication).
template <typename Mutate>
inline std::vector<RunRecord> sweep_runs(const ExperimentConfig& base, const std::vector<double>& points,
                                         const std::vector<std::string>& models, RevokeMode mode,
                                         Mutate&& mutate) {
  std::vector<RunRecord> runs;
  auto schemes = parse_schemes(base.schemes);
  for (const auto& model : models)
    for (std::size_t pi = 0; pi < points.size(); ++pi)
      for (std::uint32_t rep = 0; rep < base.replications; ++rep) {
        ExperimentConfig e = base;
        e.model = model;
        if (model == "highway" && base.model != "highway") {
          e.speed_kmh = std::max(base.speed_kmh, 120.0);
          e.min_speed_kmh = 60;
        }
        mutate(e, points[pi]);
        std::uint64_t seed = derive_seed(base.seed, {std::hash<std::string>{}(model), pi, rep});
        ScenarioConfig s = scenario_from(e, seed);
        for (auto scheme : schemes) {
          RunRecord r;
          r.model = model;
          r.x = points[pi];
          r.scheme = scheme;
          r.seed = seed;
          r.vehicles = e.vehicles;
          r.rsus = s.rsu_count();
          r.managers = std::min(e.managers, s.rsu_count());
          r.area_km2 = e.area_km2;
          r.delay_ms = e.t_man_s * 1000.0;
          r.metrics = simulate_revocation_run(s, scheme, mode);
          runs.push_back(std::move(r));
        }
      }
  return runs;
}

}  // namespace detail

// E1: effect of vehicle speed, evaluated analytically (Fig. 10 analogue).
inline ExperimentOutput run_e1(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.experiment = "E1";
  std::vector<double> speeds;
  for (double v = 10; v <= 300; v += 10) speeds.push_back(v);
  auto manhattan = sweep_speed("manhattan", 300, 500, 1000, speeds);
  auto highway = sweep_speed("highway", 900, 1500, 1000, speeds);
  out.analytic = manhattan;
  out.analytic.insert(out.analytic.end(), highway.begin(), highway.end());

  std::ostringstream csv;
  csv << detail::config_header(cfg);
  {
    std::ostringstream body;
    write_analytic_csv(out.analytic, body);
    csv << body.str();
  }
  out.files["e1_speed.csv"] = csv.str();

  std::ostringstream dat;
  dat << "# v_kmh manhattan_dyn_m highway_dyn_m brd_n\n";
  for (std::size_t i = 0; i < speeds.size(); ++i)
    dat << speeds[i] << " " << manhattan[i].m_msgs << " " << highway[i].m_msgs << " " << 1000 << "\n";
  out.files["fig10.dat"] = dat.str();
  return out;
}

// E2: effect of traffic density on revocation messages (Fig. 11 analogue).
inline ExperimentOutput run_e2(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.experiment = "E2";
  auto densities = parse_number_list(cfg.density_sweep);
  out.runs = detail::sweep_runs(cfg, densities, {"manhattan", "highway"}, RevokeMode::ChainRsus,
                                [](ExperimentConfig& e, double x) {
                                  e.vehicles = static_cast<std::uint32_t>(x);
                                });
  out.files["e2_density.csv"] = detail::runs_csv(cfg, out.runs);
  out.files["fig11.dat"] = detail::fig_dat(out.runs, "vehicles", detail::metric_messages);
  return out;
}

// E3: effect of the covered area, simulated (Fig. 12) and analytic (Fig. 13).
inline ExperimentOutput run_e3(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.experiment = "E3";
  auto areas = parse_number_list(cfg.area_sweep_km2);
  out.runs = detail::sweep_runs(cfg, areas, {"manhattan", "highway"}, RevokeMode::ChainRsus,
                                [](ExperimentConfig& e, double x) { e.area_km2 = x; });
  out.files["e3_area.csv"] = detail::runs_csv(cfg, out.runs);
  out.files["fig12.dat"] = detail::fig_dat(out.runs, "area_km2", detail::metric_messages);

  // Analytic counterpart: RSU density follows the per-model spacing.
  auto man = sweep_area("manhattan", 80, 300, 500, 1e6 / (500.0 * 500.0), areas);
  auto hwy = sweep_area("highway", 300, 900, 1500, 1e6 / (1500.0 * 1500.0), areas);
  out.analytic = man;
  out.analytic.insert(out.analytic.end(), hwy.begin(), hwy.end());
  std::ostringstream dat;
  dat << "# area_km2 manhattan_dyn_m manhattan_brd_n highway_dyn_m highway_brd_n\n";
  for (std::size_t i = 0; i < areas.size(); ++i)
    dat << areas[i] << " " << man[i].m_msgs << " " << man[i].brd_msgs << " " << hwy[i].m_msgs << " "
        << hwy[i].brd_msgs << "\n";
  out.files["fig13.dat"] = dat.str();
  return out;
}

// E4: effect of node-to-node delay (Fig. 14 analogue).
inline ExperimentOutput run_e4(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.experiment = "E4";
  auto delays = parse_number_list(cfg.delay_sweep_ms);
  out.runs = detail::sweep_runs(cfg, delays, {"manhattan", "highway"}, RevokeMode::ChainRsus,
                                [](ExperimentConfig& e, double x) {
                                  e.t_ca_s = e.t_man_s = e.t_rsu_s = x / 1000.0;
                                });
  out.files["e4_delay.csv"] = detail::runs_csv(cfg, out.runs);
  out.files["fig14.dat"] = detail::fig_dat(out.runs, "delay_ms", detail::metric_messages);
  return out;
}

// E5: packet delivery ratio across densities (Fig. 15 analogue).
inline ExperimentOutput run_e5(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.experiment = "E5";
  auto densities = parse_number_list(cfg.density_sweep);
  out.runs = detail::sweep_runs(cfg, densities, {cfg.model}, RevokeMode::ChainRsus,
                                [](ExperimentConfig& e, double x) {
                                  e.vehicles = static_cast<std::uint32_t>(x);
                                });
  out.files["e5_delivery.csv"] = detail::runs_csv(cfg, out.runs);
  out.files["fig15.dat"] = detail::fig_dat(out.runs, "vehicles", detail::metric_ratio);
  return out;
}

// E6: effect of the number of RSU managers (Fig. 16 analogue). Delivery
// runs at domain granularity: each visited manager covers its whole
// region, handoff forwards included, which is what makes the manager
// count matter at all.
inline ExperimentOutput run_e6(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.experiment = "E6";
  auto counts = parse_number_list(cfg.manager_sweep);
  out.runs = detail::sweep_runs(cfg, counts, {cfg.model}, RevokeMode::DomainRsus,
                                [](ExperimentConfig& e, double x) {
                                  e.managers = static_cast<std::uint32_t>(x);
                                });
  out.files["e6_managers.csv"] = detail::runs_csv(cfg, out.runs);
  out.files["fig16.dat"] = detail::fig_dat(out.runs, "managers", detail::metric_messages);
  return out;
}

inline ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.experiment == "E1") return run_e1(cfg);
  if (cfg.experiment == "E2") return run_e2(cfg);
  if (cfg.experiment == "E3") return run_e3(cfg);
  if (cfg.experiment == "E4") return run_e4(cfg);
  if (cfg.experiment == "E5") return run_e5(cfg);
  if (cfg.experiment == "E6") return run_e6(cfg);
  throw ConfigError("Custom runs need an explicit experiment; pick E1..E6");
}

// Writes every produced file, refusing to leave partial output behind.
inline void emit_results(const ExperimentOutput& out, const std::string& out_dir) {
  if (out.files.empty()) throw ArgumentError("emit_results: nothing to write");
  for (const auto& [name, content] : out.files)
    if (content.empty()) throw ArgumentError("emit_results: empty file " + name);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);
  for (const auto& [name, content] : out.files) {
    std::ofstream f(std::filesystem::path(out_dir) / name, std::ios::binary);
    if (!f) throw IoError("cannot write " + name);
    f << content;
  }
}

}  // namespace vanet
