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

#include <span>
#include <vector>

#include "dbsa/allocation.hpp"
#include "dbsa/network.hpp"
#include "dbsa/scenario.hpp"

namespace dbsa {

// Per-BS VCG taxation. A user's tax is the improvement the other users of its
// cell would see, measured on the reports, if it left. Utility is the
// weighted rate it actually experiences minus that tax.

struct UserOutcome {
  double rate = 0.0;     // nats/s on the true channels
  double tax = 0.0;
  double utility = 0.0;  // weight * rate - tax
  bool feasible = true;  // false for PF-infeasible cells
};

// Requires profile[user] to name a BS.
double tax(const NetworkInstance& net, std::span<const int> profile, int user,
           const ReportProfile& reports, Strategy strategy);

UserOutcome utility(const NetworkInstance& net, std::span<const int> profile, int user,
                    const ReportProfile& reports, Strategy strategy);

// Utility change for `user` when it reports `fabricated` (normalized gains on
// every global channel) instead of the truth while everyone else is truthful.
double misreport_gain(const NetworkInstance& net, std::span<const int> profile, int user,
                      std::span<const double> fabricated, Strategy strategy);

// One random fabricated report row: log-uniform per-channel scalings in
// [1e-2, 1e2], a permutation of the user's true gains within the cell
// (optionally scaled), or a copy of another cell member's gains.
std::vector<double> sample_misreport(const NetworkInstance& net, std::span<const int> profile,
                                     int user, Rng& rng);

// Largest utility gain over `trials` sampled misreports; <= 0 up to rounding
// for a strategy-proof cell.
double misreport_search(const NetworkInstance& net, std::span<const int> profile, int user,
                        Strategy strategy, Rng& rng, int trials);

// Proportional-fair tax and utility (ln rates in place of rates, CA-PF
// allocation). Flags the outcome infeasible when any involved rate is zero or
// the cell has more users than channels.
UserOutcome pf_tax_utility(const NetworkInstance& net, std::span<const int> profile, int user,
                           const ReportProfile& reports);

}  // namespace dbsa
