// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dbsa/scenario.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <fmt/core.h>

namespace dbsa {

std::string to_string(ScenarioMode mode) {
  switch (mode) {
    case ScenarioMode::kIndoor: return "indoor";
    case ScenarioMode::kOutdoor: return "outdoor";
    case ScenarioMode::kExplicit: return "explicit";
  }
  return "unknown";
}

ScenarioMode scenario_mode_from_string(const std::string& s) {
  if (s == "indoor") return ScenarioMode::kIndoor;
  if (s == "outdoor") return ScenarioMode::kOutdoor;
  if (s == "explicit") return ScenarioMode::kExplicit;
  throw std::invalid_argument("unknown scenario mode '" + s + "'");
}

ScenarioConfig ScenarioConfig::indoor_defaults() { return ScenarioConfig{}; }

ScenarioConfig ScenarioConfig::outdoor_defaults() {
  ScenarioConfig cfg;
  cfg.mode = ScenarioMode::kOutdoor;
  cfg.num_users = 20;
  cfg.num_bss = 7;
  cfg.num_channels = 64;
  cfg.total_bandwidth_hz = 10e6;
  cfg.budget_dbm = 49.0;
  cfg.noise_psd_dbm_hz = -169.0;
  return cfg;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("invalid scenario: " + what);
  };
  if (!(distribution_factor >= 0.0 && distribution_factor <= 1.0)) {
    fail(fmt::format("distribution factor {} outside [0,1]", distribution_factor));
  }
  if (!(ber > 0.0 && ber < 1.0)) fail("BER must lie in (0,1)");
  if (mode == ScenarioMode::kExplicit) {
    if (network_path.empty()) fail("explicit mode needs network_path");
    return;
  }
  if (num_users < 0) fail("num_users must be >= 0");
  if (num_bss < 1) fail("num_bss must be >= 1");
  if (num_channels < 1) fail("num_channels must be >= 1");
  if (mode == ScenarioMode::kIndoor && num_channels < num_bss) {
    fail("indoor scenarios need at least one channel per BS");
  }
  if (mode == ScenarioMode::kOutdoor && num_bss > 7) fail("outdoor layout has 7 cells");
  if (total_bandwidth_hz <= 0.0) fail("total bandwidth must be > 0");
  if (shadowing_var_db2 < 0.0) fail("shadowing variance must be >= 0");
  if (weight < 0.0) fail("weight must be >= 0");
}

void to_json(nlohmann::json& j, const ScenarioConfig& cfg) {
  j = nlohmann::json{
      {"mode", to_string(cfg.mode)},
      {"num_users", cfg.num_users},
      {"num_bss", cfg.num_bss},
      {"num_channels", cfg.num_channels},
      {"distribution_factor", cfg.distribution_factor},
      {"ber", cfg.ber},
      {"total_bandwidth_hz", cfg.total_bandwidth_hz},
      {"shadowing_var_db2", cfg.shadowing_var_db2},
      {"seed", cfg.seed},
      {"budget_dbm", cfg.budget_dbm},
      {"noise_psd_dbm_hz", cfg.noise_psd_dbm_hz},
      {"weight", cfg.weight},
      {"area_side_m", cfg.area_side_m},
      {"center_side_m", cfg.center_side_m},
      {"pl1_db", cfg.pl1_db},
      {"pl_slope_db", cfg.pl_slope_db},
      {"pl_floor_db", cfg.pl_floor_db},
      {"bs_distance_km", cfg.bs_distance_km},
      {"min_distance_km", cfg.min_distance_km},
      {"multipath_profile", cfg.multipath_profile},
      {"network_path", cfg.network_path},
  };
}

void from_json(const nlohmann::json& j, ScenarioConfig& cfg) {
  const auto mode = scenario_mode_from_string(j.value("mode", std::string("indoor")));
  cfg = mode == ScenarioMode::kOutdoor ? ScenarioConfig::outdoor_defaults()
                                       : ScenarioConfig::indoor_defaults();
  cfg.mode = mode;
  auto take = [&j](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  take("num_users", cfg.num_users);
  take("num_bss", cfg.num_bss);
  take("num_channels", cfg.num_channels);
  take("distribution_factor", cfg.distribution_factor);
  take("ber", cfg.ber);
  take("total_bandwidth_hz", cfg.total_bandwidth_hz);
  take("shadowing_var_db2", cfg.shadowing_var_db2);
  take("seed", cfg.seed);
  take("budget_dbm", cfg.budget_dbm);
  take("noise_psd_dbm_hz", cfg.noise_psd_dbm_hz);
  take("weight", cfg.weight);
  take("area_side_m", cfg.area_side_m);
  take("center_side_m", cfg.center_side_m);
  take("pl1_db", cfg.pl1_db);
  take("pl_slope_db", cfg.pl_slope_db);
  take("pl_floor_db", cfg.pl_floor_db);
  take("bs_distance_km", cfg.bs_distance_km);
  take("min_distance_km", cfg.min_distance_km);
  take("multipath_profile", cfg.multipath_profile);
  take("network_path", cfg.network_path);
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path);
  auto cfg = nlohmann::json::parse(in).get<ScenarioConfig>();
  cfg.validate();
  return cfg;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double capacity_gap(double ber) {
  if (!(ber > 0.0 && ber < 0.2)) {
    throw std::invalid_argument(fmt::format("capacity gap needs 0 < BER < 0.2, got {}", ber));
  }
  return -std::log(5.0 * ber) / 1.5;
}

double indoor_path_loss_db(const ScenarioConfig& cfg, double distance_m) {
  return cfg.pl1_db + cfg.pl_slope_db * std::log10(std::max(distance_m, 1.0)) + cfg.pl_floor_db;
}

double outdoor_path_loss_db(double distance_km) {
  return 128.1 + 36.7 * std::log10(distance_km);
}

int uniform_share(double distribution_factor, int count) {
  return static_cast<int>(std::lround(distribution_factor * count));
}

namespace {

constexpr double kPi = std::numbers::pi;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

Point uniform_in_square(double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  const double x = u(rng);
  return {x, u(rng)};
}

Point uniform_on_border(double side, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 4.0 * side);
  const double t = u(rng);
  if (t < side) return {t, 0.0};
  if (t < 2 * side) return {side, t - side};
  if (t < 3 * side) return {3 * side - t, side};
  return {0.0, 4 * side - t};
}

std::vector<Point> hex_centers(double spacing_km) {
  std::vector<Point> centers{{0.0, 0.0}};
  for (int k = 0; k < 6; ++k) {
    const double angle = kPi / 6.0 + k * kPi / 3.0;
    centers.push_back({spacing_km * std::cos(angle), spacing_km * std::sin(angle)});
  }
  return centers;
}

// Flat-topped hexagon of circumradius r around the origin.
bool inside_hexagon(double x, double y, double r) {
  x = std::abs(x);
  y = std::abs(y);
  const double h = r * std::sqrt(3.0) / 2.0;
  return y <= h && std::sqrt(3.0) * x + y <= std::sqrt(3.0) * r;
}

Point uniform_in_network(const ScenarioConfig& cfg, int cells, Rng& rng) {
  const auto centers = hex_centers(cfg.bs_distance_km);
  // Flat-topped cells whose centers sit at bs_distance apart.
  const double radius = cfg.bs_distance_km / std::sqrt(3.0);
  std::uniform_int_distribution<int> pick(0, cells - 1);
  std::uniform_real_distribution<double> u(-radius, radius);
  const Point c = centers[pick(rng)];
  for (;;) {
    const double dx = u(rng);
    const double dy = u(rng);
    if (!inside_hexagon(dx, dy, radius)) continue;
    if (std::hypot(dx, dy) < cfg.min_distance_km) continue;
    return {c.x + dx, c.y + dy};
  }
}

double channel_bandwidth(const ScenarioConfig& cfg) {
  return cfg.total_bandwidth_hz / cfg.num_channels;
}

double shadowing(const ScenarioConfig& cfg, Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(cfg.shadowing_var_db2));
  return db_to_linear(n(rng));
}

// Gains from one BS to one user on each of the BS's channels.
void draw_link(const ScenarioConfig& cfg, const Point& user, const Point& bs,
               const std::vector<int>& channels, std::vector<double>& gain_row, Rng& rng) {
  if (cfg.mode == ScenarioMode::kIndoor) {
    const double pl = db_to_linear(indoor_path_loss_db(cfg, distance(user, bs)));
    const double mean = shadowing(cfg, rng) / pl;
    std::exponential_distribution<double> fading(1.0);
    for (int k : channels) gain_row[k] = mean * fading(rng);
    return;
  }
  const double d_km = std::max(distance(user, bs), cfg.min_distance_km);
  const double mean = shadowing(cfg, rng) / db_to_linear(outdoor_path_loss_db(d_km));
  const auto profile = delay_profile(cfg.multipath_profile);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<std::complex<double>> taps;
  for (double p : profile.power) {
    const double s = std::sqrt(p / 2.0);
    const double re = n(rng);
    taps.emplace_back(s * re, s * n(rng));
  }
  const double spacing = channel_bandwidth(cfg);
  for (std::size_t c = 0; c < channels.size(); ++c) {
    std::complex<double> h{0.0, 0.0};
    for (std::size_t l = 0; l < taps.size(); ++l) {
      const double phase = -2.0 * kPi * static_cast<double>(c) * spacing * profile.delay_s[l];
      h += taps[l] * std::polar(1.0, phase);
    }
    gain_row[channels[c]] = mean * std::norm(h);
  }
}

void fill_user(const ScenarioConfig& cfg, const NetworkInstance& net, const Point& pos,
               std::vector<double>& gain_row, Rng& rng) {
  gain_row.assign(net.num_channels(), 0.0);
  for (int w = 0; w < net.num_bss; ++w) {
    draw_link(cfg, pos, net.bs_pos[w], net.channels_of_bs[w], gain_row, rng);
  }
}

}  // namespace

DelayProfile delay_profile(const std::string& name) {
  if (name == "PedA") {
    // ITU-R M.1225 pedestrian A.
    DelayProfile p{{0.0, 110e-9, 190e-9, 410e-9}, {}};
    double total = 0.0;
    for (double db : {0.0, -9.7, -19.2, -22.8}) {
      p.power.push_back(db_to_linear(db));
      total += p.power.back();
    }
    for (double& v : p.power) v /= total;
    return p;
  }
  if (name == "flat") return DelayProfile{{0.0}, {1.0}};
  throw std::invalid_argument("unknown multipath profile '" + name + "'");
}

NetworkInstance gen_indoor(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  if (cfg.mode != ScenarioMode::kIndoor) throw std::invalid_argument("gen_indoor needs indoor mode");
  NetworkInstance net;
  net.num_users = cfg.num_users;
  net.num_bss = cfg.num_bss;
  net.capacity_gap = capacity_gap(cfg.ber);

  const double side = cfg.area_side_m;
  const double lo = (side - cfg.center_side_m) / 2.0;
  const int users_in_area = uniform_share(cfg.distribution_factor, cfg.num_users);
  const int bss_in_area = uniform_share(cfg.distribution_factor, cfg.num_bss);
  for (int i = 0; i < cfg.num_users; ++i) {
    net.user_pos.push_back(i < users_in_area ? uniform_in_square(0.0, side, rng)
                                             : uniform_in_square(lo, lo + cfg.center_side_m, rng));
  }
  for (int w = 0; w < cfg.num_bss; ++w) {
    net.bs_pos.push_back(w < bss_in_area ? uniform_in_square(0.0, side, rng)
                                         : uniform_on_border(side, rng));
  }

  const int per_bs = cfg.num_channels / cfg.num_bss;
  const int extra = cfg.num_channels % cfg.num_bss;
  int next = 0;
  net.channels_of_bs.resize(cfg.num_bss);
  for (int w = 0; w < cfg.num_bss; ++w) {
    const int count = per_bs + (w < extra ? 1 : 0);
    for (int c = 0; c < count; ++c) net.channels_of_bs[w].push_back(next++);
  }

  const double df = channel_bandwidth(cfg);
  const double noise = dbm_to_watts(cfg.noise_psd_dbm_hz) * df;
  net.budget.assign(cfg.num_bss, dbm_to_watts(cfg.budget_dbm));
  net.weight.assign(cfg.num_bss, cfg.weight);
  net.bandwidth.assign(cfg.num_bss, df);
  net.gain.resize(cfg.num_users);
  net.noise.assign(cfg.num_users, std::vector<double>(cfg.num_channels, noise));
  for (int i = 0; i < cfg.num_users; ++i) fill_user(cfg, net, net.user_pos[i], net.gain[i], rng);
  net.validate();
  return net;
}

NetworkInstance gen_outdoor(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  if (cfg.mode != ScenarioMode::kOutdoor) {
    throw std::invalid_argument("gen_outdoor needs outdoor mode");
  }
  NetworkInstance net;
  net.num_users = cfg.num_users;
  net.num_bss = cfg.num_bss;
  net.capacity_gap = capacity_gap(cfg.ber);
  const auto centers = hex_centers(cfg.bs_distance_km);
  net.bs_pos.assign(centers.begin(), centers.begin() + cfg.num_bss);
  for (int i = 0; i < cfg.num_users; ++i) {
    net.user_pos.push_back(uniform_in_network(cfg, cfg.num_bss, rng));
  }

  const int sub = cfg.num_channels;
  net.shared_subcarriers = sub;
  net.channels_of_bs.resize(cfg.num_bss);
  for (int w = 0; w < cfg.num_bss; ++w) {
    for (int c = 0; c < sub; ++c) net.channels_of_bs[w].push_back(w * sub + c);
  }
  const double df = channel_bandwidth(cfg);
  const double thermal = dbm_to_watts(cfg.noise_psd_dbm_hz) * df;
  const int k_total = sub * cfg.num_bss;
  net.budget.assign(cfg.num_bss, dbm_to_watts(cfg.budget_dbm));
  net.weight.assign(cfg.num_bss, cfg.weight);
  net.bandwidth.assign(cfg.num_bss, df);
  net.gain.resize(cfg.num_users);
  net.noise.assign(cfg.num_users, std::vector<double>(k_total, thermal));
  net.thermal_noise = net.noise;
  for (int i = 0; i < cfg.num_users; ++i) fill_user(cfg, net, net.user_pos[i], net.gain[i], rng);
  net.validate();
  return net;
}

NetworkInstance generate(const ScenarioConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  switch (cfg.mode) {
    case ScenarioMode::kIndoor: return gen_indoor(cfg, rng);
    case ScenarioMode::kOutdoor: return gen_outdoor(cfg, rng);
    case ScenarioMode::kExplicit: return load_network(cfg.network_path);
  }
  throw std::logic_error("unreachable");
}

void regenerate_gains(NetworkInstance& net, const ScenarioConfig& cfg, Rng& rng) {
  if (!net.has_positions()) {
    throw std::invalid_argument("regenerating channels needs user and BS positions");
  }
  if (cfg.mode == ScenarioMode::kExplicit) {
    throw std::invalid_argument("explicit scenarios carry no channel model");
  }
  for (int i = 0; i < net.num_users; ++i) fill_user(cfg, net, net.user_pos[i], net.gain[i], rng);
  net.validate();
}

std::vector<NewUser> draw_users(const NetworkInstance& net, const ScenarioConfig& cfg, int count,
                                Rng& rng) {
  if (!net.has_positions()) throw std::invalid_argument("drawing users needs BS positions");
  const int k_total = net.num_channels();
  std::vector<NewUser> out;
  for (int n = 0; n < count; ++n) {
    NewUser u;
    u.has_pos = true;
    u.pos = cfg.mode == ScenarioMode::kOutdoor ? uniform_in_network(cfg, net.num_bss, rng)
                                               : uniform_in_square(0.0, cfg.area_side_m, rng);
    fill_user(cfg, net, u.pos, u.gain, rng);
    const double df = channel_bandwidth(cfg);
    u.noise.assign(k_total, dbm_to_watts(cfg.noise_psd_dbm_hz) * df);
    if (net.shared_spectrum()) u.thermal_noise = u.noise;
    out.push_back(std::move(u));
  }
  return out;
}

double estimation_error_variance(double normalized_gain, double cer_db) {
  return normalized_gain / db_to_linear(cer_db);
}

ReportProfile inject_estimation_error(const NetworkInstance& net, double cer_db, Rng& rng) {
  ReportProfile reports = ReportProfile::truthful(net);
  if (std::isinf(cer_db) && cer_db > 0) return reports;
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < net.num_users; ++i) {
    for (auto& g : reports.normalized[i]) {
      const double sigma = std::sqrt(estimation_error_variance(g, cer_db));
      g = std::max(0.0, g + sigma * unit(rng));
    }
    reports.fabricated[i] = true;
  }
  return reports;
}

}  // namespace dbsa
