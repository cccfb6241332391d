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
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "dbsa/allocation.hpp"
#include "dbsa/network.hpp"

namespace dbsa {

// Entry i is the BS user i is associated with.
using AssociationProfile = std::vector<int>;

// Throws std::invalid_argument on a wrong length or an out-of-range BS.
void validate_profile(const NetworkInstance& net, std::span<const int> profile);

enum class Objective { kThroughput, kPF };

std::string to_string(Objective o);
Objective objective_from_string(const std::string& s);

struct GameMode {
  Strategy strategy = Strategy::kCA;
  bool taxed = true;  // false: users compare raw rates
  Objective objective = Objective::kThroughput;

  // PF objective requires the CA-PF strategy.
  void validate() const;
};

// Strictness margin for "better" in better-reply comparisons.
inline constexpr double kBetterMargin = 1e-12;

class SearchSpaceTooLarge : public std::length_error {
 public:
  explicit SearchSpaceTooLarge(const std::string& what) : std::length_error(what) {}
};

// Memoized per-cell evaluation of one (instance, reports, mode) triple. Every
// utility and objective in the game is built from cell values, so repeated
// profile scans reuse the allocations. Holds a reference to `net`.
class CellOracle {
 public:
  struct Cell {
    std::vector<int> users;       // ascending
    std::vector<double> reported;  // per member, rate from reports
    std::vector<double> realized;  // per member, rate on the true channels
    double reported_value = 0.0;   // weighted objective on reports
    double realized_value = 0.0;   // weighted objective on the true channels
  };

  CellOracle(const NetworkInstance& net, GameMode mode);
  CellOracle(const NetworkInstance& net, ReportProfile reports, GameMode mode);

  const NetworkInstance& net() const { return net_; }
  const GameMode& mode() const { return mode_; }
  const ReportProfile& reports() const { return reports_; }

  // `users` must be ascending.
  const Cell& cell(int bs, std::span<const int> users);

  // Utility of `user` if it were associated with `bs` while everyone else
  // stays as in `profile`.
  double utility_at(std::span<const int> profile, int user, int bs);
  double utility(std::span<const int> profile, int user) {
    return utility_at(profile, user, profile[user]);
  }

  // Sum over BSs of the realized weighted cell objective.
  double system_objective(std::span<const int> profile);
  // Sum of realized weighted cell throughputs (the objective in throughput mode).
  double system_throughput(std::span<const int> profile);

  std::size_t cache_size() const { return memo_.size(); }

 private:
  const NetworkInstance& net_;
  ReportProfile reports_;
  GameMode mode_;
  std::unordered_map<std::string, Cell> memo_;
};

// BSs giving `user` a utility larger than its current one by more than
// kBetterMargin + switching_cost. Ascending.
std::vector<int> better_reply_set(CellOracle& oracle, std::span<const int> profile, int user,
                                  double switching_cost = 0.0);
std::vector<int> better_reply_set(const NetworkInstance& net, std::span<const int> profile,
                                  int user, GameMode mode);

bool is_ne(CellOracle& oracle, std::span<const int> profile);
bool is_ne(const NetworkInstance& net, std::span<const int> profile, GameMode mode);

// Truthful reports; alpha applied once per BS.
double system_throughput(const NetworkInstance& net, std::span<const int> profile,
                         Strategy strategy);

// |[U_i(moved) - U_i(a)] - [R(moved) - R(a)]| for user moving to `to_bs`.
double deviation_identity_check(const NetworkInstance& net, std::span<const int> profile,
                                int user, int to_bs, GameMode mode);

struct NeEntry {
  AssociationProfile profile;
  double objective = 0.0;
};

struct NeEnumeration {
  std::vector<NeEntry> equilibria;  // lexicographic profile order
  AssociationProfile optimum;       // first profile reaching the maximum
  double optimum_objective = 0.0;
  std::int64_t profiles_scanned = 0;
};

inline constexpr double kEnumerationLimit = 1e7;

// Scans all W^N profiles; throws SearchSpaceTooLarge above kEnumerationLimit.
NeEnumeration enumerate_nes(const NetworkInstance& net, GameMode mode);
NeEnumeration enumerate_nes(CellOracle& oracle);

// R(ne) / R(opt). Throws std::invalid_argument if `ne_profile` is not a NE.
double efficiency_ratio(const NetworkInstance& net, std::span<const int> ne_profile,
                        GameMode mode);

void to_json(nlohmann::json& j, const GameMode& m);
void from_json(const nlohmann::json& j, GameMode& m);
void to_json(nlohmann::json& j, const NeEnumeration& e);

}  // namespace dbsa
