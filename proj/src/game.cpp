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

#include "dbsa/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <fmt/core.h>

namespace dbsa {

void validate_profile(const NetworkInstance& net, std::span<const int> profile) {
  if (static_cast<int>(profile.size()) != net.num_users) {
    throw std::invalid_argument(
        fmt::format("profile has {} entries for {} users", profile.size(), net.num_users));
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] < 0 || profile[i] >= net.num_bss) {
      throw std::invalid_argument(fmt::format("user {} associated with unknown BS {}", i,
                                              profile[i]));
    }
  }
}

std::string to_string(Objective o) { return o == Objective::kPF ? "pf" : "throughput"; }

Objective objective_from_string(const std::string& s) {
  if (s == "throughput") return Objective::kThroughput;
  if (s == "pf") return Objective::kPF;
  throw std::invalid_argument("unknown objective: " + s);
}

void GameMode::validate() const {
  if (objective == Objective::kPF && strategy != Strategy::kCAPF) {
    throw std::invalid_argument("PF objective requires the CA-PF strategy");
  }
}

CellOracle::CellOracle(const NetworkInstance& net, GameMode mode)
    : CellOracle(net, ReportProfile::truthful(net), mode) {}

CellOracle::CellOracle(const NetworkInstance& net, ReportProfile reports, GameMode mode)
    : net_(net), reports_(std::move(reports)), mode_(mode) {
  mode_.validate();
}

const CellOracle::Cell& CellOracle::cell(int bs, std::span<const int> users) {
  std::string key(sizeof(int) * (users.size() + 1), '\0');
  std::memcpy(key.data(), &bs, sizeof(int));
  if (!users.empty()) {
    std::memcpy(key.data() + sizeof(int), users.data(), sizeof(int) * users.size());
  }
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  Cell c;
  c.users.assign(users.begin(), users.end());
  if (!users.empty()) {
    const Allocation alloc = solve(mode_.strategy, net_, bs, users, reports_);
    const RateVector reported = reported_rates(net_, alloc, reports_);
    const RateVector realized = realized_rates(net_, alloc);
    const bool pf = mode_.objective == Objective::kPF;
    double rep_sum = 0.0;
    double real_sum = 0.0;
    for (int i : users) {
      c.reported.push_back(reported[i]);
      c.realized.push_back(realized[i]);
      rep_sum += pf ? pf_log_term(reported[i]) : reported[i];
      real_sum += pf ? pf_log_term(realized[i]) : realized[i];
    }
    c.reported_value = net_.weight[bs] * rep_sum;
    c.realized_value = net_.weight[bs] * real_sum;
  }
  return memo_.emplace(std::move(key), std::move(c)).first->second;
}

double CellOracle::utility_at(std::span<const int> profile, int user, int bs) {
  std::vector<int> others;
  std::vector<int> joined;
  for (int j = 0; j < static_cast<int>(profile.size()); ++j) {
    if (j == user) {
      joined.push_back(j);
    } else if (profile[j] == bs) {
      others.push_back(j);
      joined.push_back(j);
    }
  }
  const Cell& with = cell(bs, joined);
  const auto pos = std::lower_bound(with.users.begin(), with.users.end(), user) -
                   with.users.begin();
  const double rate = with.realized[pos];
  if (!mode_.taxed) return rate;

  const double alpha = net_.weight[bs];
  const bool pf = mode_.objective == Objective::kPF;
  const double own_reported = pf ? pf_log_term(with.reported[pos]) : with.reported[pos];
  const double own_realized = pf ? pf_log_term(rate) : rate;
  const double without = cell(bs, others).reported_value;
  const double tax = without - (with.reported_value - alpha * own_reported);
  return alpha * own_realized - tax;
}

double CellOracle::system_objective(std::span<const int> profile) {
  double total = 0.0;
  for (int w = 0; w < net_.num_bss; ++w) total += cell(w, users_of(profile, w)).realized_value;
  return total;
}

double CellOracle::system_throughput(std::span<const int> profile) {
  if (mode_.objective == Objective::kThroughput) return system_objective(profile);
  double total = 0.0;
  for (int w = 0; w < net_.num_bss; ++w) {
    const Cell& c = cell(w, users_of(profile, w));
    double sum = 0.0;
    for (double r : c.realized) sum += r;
    total += net_.weight[w] * sum;
  }
  return total;
}

std::vector<int> better_reply_set(CellOracle& oracle, std::span<const int> profile, int user,
                                  double switching_cost) {
  std::vector<int> out;
  if (std::isinf(switching_cost)) return out;
  const double current = oracle.utility(profile, user);
  for (int w = 0; w < oracle.net().num_bss; ++w) {
    if (w == profile[user]) continue;
    if (oracle.utility_at(profile, user, w) - current > kBetterMargin + switching_cost) {
      out.push_back(w);
    }
  }
  return out;
}

std::vector<int> better_reply_set(const NetworkInstance& net, std::span<const int> profile,
                                  int user, GameMode mode) {
  validate_profile(net, profile);
  CellOracle oracle(net, mode);
  return better_reply_set(oracle, profile, user);
}

bool is_ne(CellOracle& oracle, std::span<const int> profile) {
  for (int i = 0; i < static_cast<int>(profile.size()); ++i) {
    if (!better_reply_set(oracle, profile, i).empty()) return false;
  }
  return true;
}

bool is_ne(const NetworkInstance& net, std::span<const int> profile, GameMode mode) {
  validate_profile(net, profile);
  CellOracle oracle(net, mode);
  return is_ne(oracle, profile);
}

double system_throughput(const NetworkInstance& net, std::span<const int> profile,
                         Strategy strategy) {
  validate_profile(net, profile);
  const ReportProfile truth = ReportProfile::truthful(net);
  double total = 0.0;
  for (int w = 0; w < net.num_bss; ++w) total += bs_throughput(net, w, profile, truth, strategy);
  return total;
}

double deviation_identity_check(const NetworkInstance& net, std::span<const int> profile,
                                int user, int to_bs, GameMode mode) {
  validate_profile(net, profile);
  if (to_bs == profile[user]) throw std::invalid_argument("deviation must change the BS");
  CellOracle oracle(net, mode);
  AssociationProfile moved(profile.begin(), profile.end());
  moved[user] = to_bs;
  const double du = oracle.utility(moved, user) - oracle.utility(profile, user);
  const double dr = oracle.system_objective(moved) - oracle.system_objective(profile);
  return std::abs(du - dr);
}

NeEnumeration enumerate_nes(CellOracle& oracle) {
  const NetworkInstance& net = oracle.net();
  const double space = std::pow(static_cast<double>(net.num_bss), net.num_users);
  if (space > kEnumerationLimit) {
    throw SearchSpaceTooLarge(fmt::format("{} profiles exceed the enumeration limit of {}",
                                          space, kEnumerationLimit));
  }
  NeEnumeration out;
  AssociationProfile a(net.num_users, 0);
  bool first = true;
  for (;;) {
    ++out.profiles_scanned;
    const double value = oracle.system_objective(a);
    if (first || value > out.optimum_objective) {
      out.optimum_objective = value;
      out.optimum = a;
      first = false;
    }
    if (is_ne(oracle, a)) out.equilibria.push_back({a, value});

    int pos = net.num_users - 1;
    while (pos >= 0 && ++a[pos] == net.num_bss) a[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

NeEnumeration enumerate_nes(const NetworkInstance& net, GameMode mode) {
  CellOracle oracle(net, mode);
  return enumerate_nes(oracle);
}

double efficiency_ratio(const NetworkInstance& net, std::span<const int> ne_profile,
                        GameMode mode) {
  validate_profile(net, ne_profile);
  CellOracle oracle(net, mode);
  if (!is_ne(oracle, ne_profile)) {
    throw std::invalid_argument("efficiency ratio needs a pure NE profile");
  }
  const NeEnumeration e = enumerate_nes(oracle);
  if (e.optimum_objective == 0.0) return 1.0;
  return oracle.system_objective(ne_profile) / e.optimum_objective;
}

void to_json(nlohmann::json& j, const GameMode& m) {
  j = nlohmann::json{{"strategy", to_string(m.strategy)},
                     {"taxed", m.taxed},
                     {"objective", to_string(m.objective)}};
}

void from_json(const nlohmann::json& j, GameMode& m) {
  m = GameMode{};
  if (j.contains("strategy")) m.strategy = strategy_from_string(j.at("strategy"));
  if (j.contains("taxed")) m.taxed = j.at("taxed").get<bool>();
  if (j.contains("objective")) m.objective = objective_from_string(j.at("objective"));
  m.validate();
}

void to_json(nlohmann::json& j, const NeEnumeration& e) {
  nlohmann::json nes = nlohmann::json::array();
  for (const auto& ne : e.equilibria) {
    nes.push_back({{"profile", ne.profile}, {"objective", ne.objective}});
  }
  j = nlohmann::json{{"equilibria", nes},
                     {"optimum", e.optimum},
                     {"optimum_objective", e.optimum_objective},
                     {"profiles_scanned", e.profiles_scanned}};
}

}  // namespace dbsa
