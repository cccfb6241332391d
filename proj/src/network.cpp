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

#include "dbsa/network.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/core.h>

namespace dbsa {

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

int NetworkInstance::num_channels() const {
  int total = 0;
  for (const auto& ks : channels_of_bs) total += static_cast<int>(ks.size());
  return total;
}

std::vector<int> NetworkInstance::channel_owner() const {
  std::vector<int> owner(num_channels(), -1);
  for (int w = 0; w < num_bss; ++w) {
    for (int k : channels_of_bs[w]) owner[k] = w;
  }
  return owner;
}

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument("invalid network: " + what);
}

void check_matrix(const std::vector<std::vector<double>>& m, int rows, int cols,
                  const char* name) {
  require(static_cast<int>(m.size()) == rows,
          fmt::format("{} has {} rows, expected {}", name, m.size(), rows));
  for (const auto& row : m) {
    require(static_cast<int>(row.size()) == cols,
            fmt::format("{} row has {} entries, expected {}", name, row.size(), cols));
  }
}

}  // namespace

void NetworkInstance::validate() const {
  require(num_users >= 0 && num_bss >= 1, "need at least one BS");
  require(static_cast<int>(channels_of_bs.size()) == num_bss, "channels_of_bs size");
  const int k_total = num_channels();
  std::vector<int> seen(k_total, 0);
  for (int w = 0; w < num_bss; ++w) {
    require(!channels_of_bs[w].empty(), fmt::format("BS {} owns no channel", w));
    for (int k : channels_of_bs[w]) {
      require(k >= 0 && k < k_total, fmt::format("channel index {} out of range", k));
      require(seen[k]++ == 0, fmt::format("channel {} owned twice", k));
    }
  }
  check_matrix(gain, num_users, k_total, "gain");
  check_matrix(noise, num_users, k_total, "noise");
  for (int i = 0; i < num_users; ++i) {
    for (int k = 0; k < k_total; ++k) {
      require(std::isfinite(gain[i][k]) && gain[i][k] >= 0.0,
              fmt::format("gain[{}][{}] must be finite and >= 0", i, k));
      require(std::isfinite(noise[i][k]) && noise[i][k] > 0.0,
              fmt::format("noise[{}][{}] must be > 0", i, k));
    }
  }
  require(static_cast<int>(budget.size()) == num_bss, "budget size");
  require(static_cast<int>(weight.size()) == num_bss, "weight size");
  require(static_cast<int>(bandwidth.size()) == num_bss, "bandwidth size");
  for (int w = 0; w < num_bss; ++w) {
    require(budget[w] > 0.0, fmt::format("budget of BS {} must be > 0", w));
    require(weight[w] >= 0.0, fmt::format("weight of BS {} must be >= 0", w));
    require(bandwidth[w] > 0.0, fmt::format("bandwidth of BS {} must be > 0", w));
  }
  require(capacity_gap > 0.0, "capacity gap must be > 0");
  require(user_pos.empty() || static_cast<int>(user_pos.size()) == num_users,
          "user_pos size");
  require(user_pos.empty() == bs_pos.empty(), "positions must be given for users and BSs");
  require(bs_pos.empty() || static_cast<int>(bs_pos.size()) == num_bss, "bs_pos size");
  if (shared_subcarriers > 0) {
    for (int w = 0; w < num_bss; ++w) {
      const auto& ks = channels_of_bs[w];
      require(static_cast<int>(ks.size()) == shared_subcarriers,
              "shared-spectrum BSs must own shared_subcarriers channels");
      for (int c = 0; c < shared_subcarriers; ++c) {
        require(ks[c] == ks[0] + c, "shared-spectrum channels must be contiguous");
      }
    }
    check_matrix(thermal_noise, num_users, k_total, "thermal_noise");
  }
}

ReportProfile ReportProfile::truthful(const NetworkInstance& net) {
  ReportProfile r;
  const int k_total = net.num_channels();
  r.normalized.assign(net.num_users, std::vector<double>(k_total, 0.0));
  r.fabricated.assign(net.num_users, false);
  for (int i = 0; i < net.num_users; ++i) {
    for (int k = 0; k < k_total; ++k) r.normalized[i][k] = net.normalized_gain(i, k);
  }
  return r;
}

void to_json(nlohmann::json& j, const Point& p) { j = nlohmann::json::array({p.x, p.y}); }

void from_json(const nlohmann::json& j, Point& p) {
  p.x = j.at(0).get<double>();
  p.y = j.at(1).get<double>();
}

void to_json(nlohmann::json& j, const NetworkInstance& net) {
  j = nlohmann::json{
      {"num_users", net.num_users},
      {"num_bss", net.num_bss},
      {"channels_of_bs", net.channels_of_bs},
      {"gain", net.gain},
      {"noise", net.noise},
      {"budget", net.budget},
      {"weight", net.weight},
      {"bandwidth", net.bandwidth},
      {"capacity_gap", net.capacity_gap},
      {"user_pos", net.user_pos},
      {"bs_pos", net.bs_pos},
      {"shared_subcarriers", net.shared_subcarriers},
      {"thermal_noise", net.thermal_noise},
  };
}

void from_json(const nlohmann::json& j, NetworkInstance& net) {
  j.at("num_users").get_to(net.num_users);
  j.at("num_bss").get_to(net.num_bss);
  j.at("channels_of_bs").get_to(net.channels_of_bs);
  j.at("gain").get_to(net.gain);
  j.at("noise").get_to(net.noise);
  j.at("budget").get_to(net.budget);
  j.at("weight").get_to(net.weight);
  j.at("bandwidth").get_to(net.bandwidth);
  j.at("capacity_gap").get_to(net.capacity_gap);
  net.user_pos = j.value("user_pos", std::vector<Point>{});
  net.bs_pos = j.value("bs_pos", std::vector<Point>{});
  net.shared_subcarriers = j.value("shared_subcarriers", 0);
  net.thermal_noise = j.value("thermal_noise", std::vector<std::vector<double>>{});
  net.validate();
}

NetworkInstance load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file " + path);
  return nlohmann::json::parse(in).get<NetworkInstance>();
}

void save_network(const NetworkInstance& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write network file " + path);
  out << nlohmann::json(net).dump(1) << '\n';
}

}  // namespace dbsa
