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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dbsa {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

// A downlink OFDMA network: users, base stations owning disjoint channel
// sets, and the per-(user, channel) gain and noise seen at each user.
//
// Channels carry global indices 0..K-1. Channel k belongs to exactly one BS,
// so gain[i][k] is the gain from the owner of k to user i. In shared-spectrum
// layouts every BS owns `shared_subcarriers` consecutive channels and the
// c-th channel of every BS is the same physical subcarrier.
struct NetworkInstance {
  int num_users = 0;
  int num_bss = 0;
  std::vector<std::vector<int>> channels_of_bs;
  std::vector<std::vector<double>> gain;   // [user][channel], |h|^2
  std::vector<std::vector<double>> noise;  // [user][channel], watts
  std::vector<double> budget;              // per BS, watts
  std::vector<double> weight;              // per BS
  std::vector<double> bandwidth;           // per BS, Hz per channel
  double capacity_gap = 1.0;

  // Empty for positionless instances.
  std::vector<Point> user_pos;
  std::vector<Point> bs_pos;

  int shared_subcarriers = 0;                      // 0: orthogonal spectrum
  std::vector<std::vector<double>> thermal_noise;  // shared mode only

  int num_channels() const;
  bool has_positions() const { return !user_pos.empty(); }
  bool shared_spectrum() const { return shared_subcarriers > 0; }

  // BS that owns each global channel.
  std::vector<int> channel_owner() const;

  double normalized_gain(int user, int channel) const {
    return gain[user][channel] / noise[user][channel];
  }

  // Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  friend bool operator==(const NetworkInstance&, const NetworkInstance&) = default;
};

// Reported normalized gains the BSs allocate on; may differ from the truth.
struct ReportProfile {
  std::vector<std::vector<double>> normalized;  // [user][channel]
  std::vector<bool> fabricated;                 // per user

  static ReportProfile truthful(const NetworkInstance& net);

  friend bool operator==(const ReportProfile&, const ReportProfile&) = default;
};

void to_json(nlohmann::json& j, const Point& p);
void from_json(const nlohmann::json& j, Point& p);
void to_json(nlohmann::json& j, const NetworkInstance& net);
void from_json(const nlohmann::json& j, NetworkInstance& net);

NetworkInstance load_network(const std::string& path);
void save_network(const NetworkInstance& net, const std::string& path);

}  // namespace dbsa
