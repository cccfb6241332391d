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

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dbsa/network.hpp"

namespace dbsa {

using Rng = std::mt19937_64;

enum class ScenarioMode { kIndoor, kOutdoor, kExplicit };

std::string to_string(ScenarioMode mode);
ScenarioMode scenario_mode_from_string(const std::string& s);

// Everything needed to draw a random network. Defaults for a mode come from
// indoor_defaults() / outdoor_defaults(); JSON configs override field by field.
struct ScenarioConfig {
  ScenarioMode mode = ScenarioMode::kIndoor;
  int num_users = 10;
  int num_bss = 4;
  // Indoor: total channels split across the BSs. Outdoor: subcarriers reused
  // by every BS (FFT size).
  int num_channels = 64;
  double distribution_factor = 0.5;
  double ber = 1e-6;
  double total_bandwidth_hz = 80e6;
  double shadowing_var_db2 = 64.0;
  std::uint64_t seed = 0;

  double budget_dbm = 23.0;
  double noise_psd_dbm_hz = -100.0;
  double weight = 1.0;

  // Indoor office model.
  double area_side_m = 50.0;
  double center_side_m = 25.0;
  double pl1_db = 38.0;  // free-space loss at 1 m, 1.9 GHz
  double pl_slope_db = 26.0;
  double pl_floor_db = 14.1;

  // Outdoor hexagonal layout.
  double bs_distance_km = 2.8;
  double min_distance_km = 0.035;
  std::string multipath_profile = "PedA";

  // Explicit mode: a serialized NetworkInstance.
  std::string network_path;

  static ScenarioConfig indoor_defaults();
  static ScenarioConfig outdoor_defaults();

  // Throws std::invalid_argument.
  void validate() const;
};

void to_json(nlohmann::json& j, const ScenarioConfig& cfg);
void from_json(const nlohmann::json& j, ScenarioConfig& cfg);
ScenarioConfig load_scenario(const std::string& path);

double dbm_to_watts(double dbm);

// tau = -ln(5 BER) / 1.5, defined for 0 < BER < 0.2.
double capacity_gap(double ber);

// Office path loss in dB; distances below 1 m are clamped to 1 m.
double indoor_path_loss_db(const ScenarioConfig& cfg, double distance_m);
// Macro-cell path loss in dB for a distance in km.
double outdoor_path_loss_db(double distance_km);

// How many of `count` users or BSs are placed uniformly over the full area.
int uniform_share(double distribution_factor, int count);

NetworkInstance gen_indoor(const ScenarioConfig& cfg, Rng& rng);
NetworkInstance gen_outdoor(const ScenarioConfig& cfg, Rng& rng);

// Dispatches on cfg.mode with an rng seeded from cfg.seed.
NetworkInstance generate(const ScenarioConfig& cfg);

// Power-delay profile (delays in seconds, linear powers summing to one).
struct DelayProfile {
  std::vector<double> delay_s;
  std::vector<double> power;
};
DelayProfile delay_profile(const std::string& name);

// Redraws shadowing and fading for every (user, BS) pair; positions are kept.
void regenerate_gains(NetworkInstance& net, const ScenarioConfig& cfg, Rng& rng);

// A user that can be appended to an existing instance.
struct NewUser {
  Point pos;
  bool has_pos = false;
  std::vector<double> gain;   // per global channel
  std::vector<double> noise;  // per global channel
  std::vector<double> thermal_noise;  // shared-spectrum instances only
};

// Draws `count` users uniformly over the scenario area with channels to the
// BSs already in `net`.
std::vector<NewUser> draw_users(const NetworkInstance& net, const ScenarioConfig& cfg,
                                int count, Rng& rng);

// Variance of the estimation error for a normalized gain at the given channel
// error ratio (dB).
double estimation_error_variance(double normalized_gain, double cer_db);

// Reports perturbed by zero-mean Gaussian estimation error, clamped at 0.
// cer_db = +inf yields the truthful reports.
ReportProfile inject_estimation_error(const NetworkInstance& net, double cer_db, Rng& rng);

}  // namespace dbsa
