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

#include "dbsa/vcg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dbsa {

namespace {

struct CellSplit {
  int bs = -1;
  std::vector<int> with;     // N_w(a)
  std::vector<int> without;  // N_w(a) \ {user}
};

CellSplit split_cell(std::span<const int> profile, int user) {
  if (user < 0 || user >= static_cast<int>(profile.size())) {
    throw std::invalid_argument("user index out of range");
  }
  CellSplit s;
  s.bs = profile[user];
  s.with = users_of(profile, s.bs);
  for (int j : s.with) {
    if (j != user) s.without.push_back(j);
  }
  return s;
}

double sum_over(const RateVector& r, const std::vector<int>& users) {
  double total = 0.0;
  for (int j : users) total += r[j];
  return total;
}

}  // namespace

double tax(const NetworkInstance& net, std::span<const int> profile, int user,
           const ReportProfile& reports, Strategy strategy) {
  const CellSplit s = split_cell(profile, user);
  if (s.without.empty()) return 0.0;
  const RateVector present =
      reported_rates(net, solve(strategy, net, s.bs, s.with, reports), reports);
  const RateVector absent =
      reported_rates(net, solve(strategy, net, s.bs, s.without, reports), reports);
  return net.weight[s.bs] * (sum_over(absent, s.without) - sum_over(present, s.without));
}

UserOutcome utility(const NetworkInstance& net, std::span<const int> profile, int user,
                    const ReportProfile& reports, Strategy strategy) {
  const CellSplit s = split_cell(profile, user);
  UserOutcome out;
  out.rate = realized_rates(net, solve(strategy, net, s.bs, s.with, reports))[user];
  out.tax = tax(net, profile, user, reports, strategy);
  out.utility = net.weight[s.bs] * out.rate - out.tax;
  return out;
}

double misreport_gain(const NetworkInstance& net, std::span<const int> profile, int user,
                      std::span<const double> fabricated, Strategy strategy) {
  const ReportProfile truth = ReportProfile::truthful(net);
  ReportProfile lie = truth;
  lie.normalized[user].assign(fabricated.begin(), fabricated.end());
  lie.fabricated[user] = true;
  return utility(net, profile, user, lie, strategy).utility -
         utility(net, profile, user, truth, strategy).utility;
}

std::vector<double> sample_misreport(const NetworkInstance& net, std::span<const int> profile,
                                     int user, Rng& rng) {
  const int bs = profile[user];
  const auto& ks = net.channels_of_bs[bs];
  std::vector<double> row(net.num_channels());
  for (int k = 0; k < net.num_channels(); ++k) row[k] = net.normalized_gain(user, k);

  std::uniform_real_distribution<double> exponent(-2.0, 2.0);
  std::uniform_int_distribution<int> kind(0, 2);
  auto scale_each = [&] {
    for (int k : ks) row[k] *= std::pow(10.0, exponent(rng));
  };

  std::vector<int> others;
  for (int j : users_of(profile, bs)) {
    if (j != user) others.push_back(j);
  }
  switch (kind(rng)) {
    case 0:
      scale_each();
      break;
    case 1: {
      std::vector<double> vals;
      for (int k : ks) vals.push_back(row[k]);
      std::shuffle(vals.begin(), vals.end(), rng);
      for (std::size_t c = 0; c < ks.size(); ++c) row[ks[c]] = vals[c];
      if (std::bernoulli_distribution(0.5)(rng)) scale_each();
      break;
    }
    default: {
      if (others.empty()) {
        scale_each();
        break;
      }
      std::uniform_int_distribution<std::size_t> pick(0, others.size() - 1);
      const int j = others[pick(rng)];
      const double factor = std::pow(10.0, exponent(rng) / 2.0);
      for (int k : ks) row[k] = net.normalized_gain(j, k) * factor;
      break;
    }
  }
  return row;
}

double misreport_search(const NetworkInstance& net, std::span<const int> profile, int user,
                        Strategy strategy, Rng& rng, int trials) {
  if (trials < 1) throw std::invalid_argument("misreport search needs at least one trial");
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const auto row = sample_misreport(net, profile, user, rng);
    worst = std::max(worst, misreport_gain(net, profile, user, row, strategy));
  }
  return worst;
}

UserOutcome pf_tax_utility(const NetworkInstance& net, std::span<const int> profile, int user,
                           const ReportProfile& reports) {
  const CellSplit s = split_cell(profile, user);
  const Allocation present = solve_ca_pf(net, s.bs, s.with, reports);
  const RateVector present_reported = reported_rates(net, present, reports);

  UserOutcome out;
  out.rate = realized_rates(net, present)[user];
  bool feasible = !present.pf_infeasible && out.rate > 0.0;

  double absent_sum = 0.0;
  if (!s.without.empty()) {
    const Allocation absent = solve_ca_pf(net, s.bs, s.without, reports);
    feasible = feasible && !absent.pf_infeasible;
    const RateVector absent_reported = reported_rates(net, absent, reports);
    for (int j : s.without) absent_sum += std::log(absent_reported[j]);
  }
  double present_sum = 0.0;
  for (int j : s.without) present_sum += std::log(present_reported[j]);

  if (!feasible) {
    out.feasible = false;
    out.tax = std::numeric_limits<double>::quiet_NaN();
    out.utility = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double alpha = net.weight[s.bs];
  out.tax = alpha * (absent_sum - present_sum);
  out.utility = alpha * std::log(out.rate) - out.tax;
  return out;
}

}  // namespace dbsa
