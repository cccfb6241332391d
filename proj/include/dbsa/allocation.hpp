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

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbsa/network.hpp"

namespace dbsa {

// Per-BS resource management strategy.
enum class Strategy {
  kCA,    // channel assignment, equal power
  kCAPA,  // channel assignment + water-filling
  kCAPF,  // proportional-fair channel assignment, equal power
};

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

// Resource allocation of one BS. Vectors are indexed by the position of the
// channel in net.channels_of_bs[bs].
struct Allocation {
  int bs = -1;
  std::vector<int> beta;      // user served on each channel, -1 when idle
  std::vector<double> power;  // watts
  double water_level = 0.0;   // CAPA only

  // CA-PF only: users that could not be given a channel with a positive rate.
  std::vector<int> unserved;
  bool capacity_exceeded = false;
  bool pf_infeasible = false;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

// Per-user rate in nats/s, indexed by global user id.
using RateVector = std::vector<double>;

class NoUsableChannel : public std::domain_error {
 public:
  NoUsableChannel() : std::domain_error("water-filling: every channel has zero gain") {}
};

struct WaterFill {
  std::vector<double> power;
  double level = 0.0;
  int active = 0;
};

// Maximizes sum_k ln(1 + p_k / inv_gain_k) subject to sum_k p_k = budget.
// Entries of +inf mark unusable channels. Throws NoUsableChannel when every
// entry is +inf.
WaterFill water_fill(std::span<const double> inv_gains, double budget);

Allocation solve_ca(const NetworkInstance& net, int bs, std::span<const int> users,
                    const ReportProfile& reports);

// CAPA with no usable channel (all reported gains zero) returns an all-zero
// power allocation; the cell carries no throughput either way.
Allocation solve_capa(const NetworkInstance& net, int bs, std::span<const int> users,
                      const ReportProfile& reports);

enum class PfSearch { kAuto, kExhaustive, kLocalSearch };

// Exhaustive assignment search when |users|^|K_w| <= kPfExhaustiveLimit,
// greedy seeding plus single-channel local search otherwise.
inline constexpr double kPfExhaustiveLimit = 1e6;

Allocation solve_ca_pf(const NetworkInstance& net, int bs, std::span<const int> users,
                       const ReportProfile& reports, PfSearch search = PfSearch::kAuto);

Allocation solve(Strategy strategy, const NetworkInstance& net, int bs,
                 std::span<const int> users, const ReportProfile& reports);

// Rates experienced on the TRUE channels of `net` under `alloc`.
RateVector realized_rates(const NetworkInstance& net, const Allocation& alloc);

// Rates the BS believes it delivers, computed from the reports.
RateVector reported_rates(const NetworkInstance& net, const Allocation& alloc,
                          const ReportProfile& reports);

// Users associated with `bs` in the profile (ascending).
std::vector<int> users_of(std::span<const int> profile, int bs);

// alpha_w * sum of realized rates of the BS's users under the strategy.
double bs_throughput(const NetworkInstance& net, int bs, std::span<const int> profile,
                     const ReportProfile& reports, Strategy strategy);

// Proportional-fair objective term of one user; a user left at zero rate
// costs a large finite penalty instead of -inf.
inline constexpr double kPfStarvedLog = -1e6;
inline double pf_log_term(double rate) { return rate > 0.0 ? std::log(rate) : kPfStarvedLog; }

// Sum of ln(rate) over users served with a positive rate (PF objective,
// unweighted).
double pf_log_sum(const RateVector& rates, const Allocation& alloc, std::span<const int> users);

}  // namespace dbsa
