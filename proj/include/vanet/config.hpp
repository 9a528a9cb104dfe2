#pragma once

// Experiment configuration: flat key=value text files whose keys match the
// ExperimentConfig field names exactly. Unknown keys are errors; the
// VANET_SEED environment variable overrides any configured seed.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vanet/errors.hpp"

namespace vanet {

struct ExperimentConfig {
  std::string experiment = "E1";    // E1..E6 or Custom
  std::string model = "manhattan";  // manhattan | highway
  double area_km2 = 4;
  std::uint32_t vehicles = 30;
  double rsu_spacing_m = 500;
  std::uint32_t managers = 4;
  double cert_lifetime_s = 300;
  double speed_kmh = 60;
  double min_speed_kmh = 40;
  double t_p_ca_s = 0.001;
  double t_ca_s = 0.010;
  double t_p_man_s = 0.001;
  double t_man_s = 0.010;
  double t_p_rsu_s = 0.001;
  double t_rsu_s = 0.005;
  double radio_latency_s = 0.002;
  double radio_range_m = 300;
  double loss_rate = 0;
  double duration_s = 200;
  std::string delay_sweep_ms = "50,100,150,200,250,300";
  std::string density_sweep = "10,20,30,50,100";
  std::string manager_sweep = "1,2,4,8,16";
  std::string area_sweep_km2 = "1,4,9,16";
  std::string schemes = "DYN,BRD";
  std::uint32_t replications = 10;
  std::uint64_t seed = 1;
  std::string crypto = "mock";  // mock | real
};

inline std::vector<double> parse_number_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad number in list: '" + tok + "'");
    }
  }
  return out;
}

namespace detail {

inline void assign_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  auto to_f = [&](double& field) {
    try {
      field = std::stod(value);
    } catch (const std::exception&) {
      throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
    }
  };
  auto to_u32 = [&](std::uint32_t& field) {
    try {
      field = static_cast<std::uint32_t>(std::stoul(value));
    } catch (const std::exception&) {
      throw ConfigError("bad integer value for " + key + ": '" + value + "'");
    }
  };
  static const std::map<std::string, std::function<void(ExperimentConfig&, const std::string&)>> strings{
      {"experiment", [](ExperimentConfig& c, const std::string& v) { c.experiment = v; }},
      {"model", [](ExperimentConfig& c, const std::string& v) { c.model = v; }},
      {"delay_sweep_ms", [](ExperimentConfig& c, const std::string& v) { c.delay_sweep_ms = v; }},
      {"density_sweep", [](ExperimentConfig& c, const std::string& v) { c.density_sweep = v; }},
      {"manager_sweep", [](ExperimentConfig& c, const std::string& v) { c.manager_sweep = v; }},
      {"area_sweep_km2", [](ExperimentConfig& c, const std::string& v) { c.area_sweep_km2 = v; }},
      {"schemes", [](ExperimentConfig& c, const std::string& v) { c.schemes = v; }},
      {"crypto", [](ExperimentConfig& c, const std::string& v) { c.crypto = v; }},
  };
  if (auto it = strings.find(key); it != strings.end()) {
    it->second(cfg, value);
    return;
  }
  if (key == "area_km2") return to_f(cfg.area_km2);
  if (key == "vehicles") return to_u32(cfg.vehicles);
  if (key == "rsu_spacing_m") return to_f(cfg.rsu_spacing_m);
  if (key == "managers") return to_u32(cfg.managers);
  if (key == "cert_lifetime_s") return to_f(cfg.cert_lifetime_s);
  if (key == "speed_kmh") return to_f(cfg.speed_kmh);
  if (key == "min_speed_kmh") return to_f(cfg.min_speed_kmh);
  if (key == "t_p_ca_s") return to_f(cfg.t_p_ca_s);
  if (key == "t_ca_s") return to_f(cfg.t_ca_s);
  if (key == "t_p_man_s") return to_f(cfg.t_p_man_s);
  if (key == "t_man_s") return to_f(cfg.t_man_s);
  if (key == "t_p_rsu_s") return to_f(cfg.t_p_rsu_s);
  if (key == "t_rsu_s") return to_f(cfg.t_rsu_s);
  if (key == "radio_latency_s") return to_f(cfg.radio_latency_s);
  if (key == "radio_range_m") return to_f(cfg.radio_range_m);
  if (key == "loss_rate") return to_f(cfg.loss_rate);
  if (key == "duration_s") return to_f(cfg.duration_s);
  if (key == "replications") return to_u32(cfg.replications);
  if (key == "seed") {
    try {
      cfg.seed = std::stoull(value);
    } catch (const std::exception&) {
      throw ConfigError("bad seed: '" + value + "'");
    }
    return;
  }
  throw ConfigError("unknown config key: '" + key + "'");
}

}  // namespace detail

inline void apply_config_text(ExperimentConfig& cfg, std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t");
      auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    detail::assign_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

inline void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  apply_config_text(cfg, in);
}

inline void apply_env_seed(ExperimentConfig& cfg) {
  if (const char* env = std::getenv("VANET_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("VANET_SEED is not a number");
    }
  }
}

inline void validate_config(const ExperimentConfig& cfg) {
  auto positive = [](double v, const char* name) {
    if (v <= 0) throw ConfigError(std::string(name) + " must be positive");
  };
  if (cfg.model != "manhattan" && cfg.model != "highway")
    throw ConfigError("model must be manhattan or highway");
  if (cfg.crypto != "mock" && cfg.crypto != "real") throw ConfigError("crypto must be mock or real");
  if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
  positive(cfg.area_km2, "area_km2");
  positive(cfg.rsu_spacing_m, "rsu_spacing_m");
  positive(cfg.cert_lifetime_s, "cert_lifetime_s");
  positive(cfg.speed_kmh, "speed_kmh");
  positive(cfg.min_speed_kmh, "min_speed_kmh");
  positive(cfg.duration_s, "duration_s");
  positive(cfg.radio_range_m, "radio_range_m");
  if (cfg.managers < 1) throw ConfigError("managers must be >= 1");
  if (cfg.loss_rate < 0 || cfg.loss_rate > 1) throw ConfigError("loss_rate must be in [0,1]");
  bool known = cfg.experiment == "Custom";
  for (int i = 1; i <= 6; ++i) known = known || cfg.experiment == "E" + std::to_string(i);
  if (!known) throw ConfigError("experiment must be E1..E6 or Custom");
}

}  // namespace vanet
