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

#include "dbsa/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "dbsa/vcg.hpp"

namespace dbsa {

namespace {

NetworkInstance unit_network(std::vector<std::vector<double>> gain,
                             std::vector<std::vector<int>> channels, double budget) {
  NetworkInstance net;
  net.num_users = static_cast<int>(gain.size());
  net.num_bss = static_cast<int>(channels.size());
  net.channels_of_bs = std::move(channels);
  net.noise.assign(gain.size(), std::vector<double>(gain[0].size(), 1.0));
  net.gain = std::move(gain);
  net.budget.assign(net.num_bss, budget);
  net.weight.assign(net.num_bss, 1.0);
  net.bandwidth.assign(net.num_bss, 1.0);
  net.capacity_gap = 1.0;
  net.validate();
  return net;
}

std::string profile_label(const AssociationProfile& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) s += fmt::format("{}{}", i ? "," : "", a[i] + 1);
  return s + "]";
}

std::string set_label(const std::vector<int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += fmt::format("{}{}", i ? "," : "", v[i] + 1);
  return s + "}";
}

void add(VerificationReport& r, std::string name, bool ok, std::string detail) {
  r.checks.push_back({std::move(name), ok, std::move(detail)});
}

void check_taxless_table(VerificationReport& r, const std::string& tag,
                         const NetworkInstance& net, Strategy strategy) {
  const GameMode taxless{strategy, false, Objective::kThroughput};
  CellOracle oracle(net, taxless);
  const NeEnumeration e = enumerate_nes(oracle);
  add(r, tag + " taxless game has no pure NE", e.equilibria.empty(),
      fmt::format("{} NE among {} profiles", e.equilibria.size(), e.profiles_scanned));
  for (const auto& entry : listed_better_replies(strategy)) {
    const auto got = better_reply_set(oracle, entry.profile, entry.user);
    add(r,
        fmt::format("{} better replies of user {} at {}", tag, entry.user + 1,
                    profile_label(entry.profile)),
        got == entry.better,
        fmt::format("expected {} got {}", set_label(entry.better), set_label(got)));
  }
}

}  // namespace

NetworkInstance two_user_single_bs_fixture() {
  return unit_network({{2.0, 2.0, 1.0}, {0.5, 0.5, 2.0}}, {{0, 1, 2}}, 3.0);
}

std::vector<double> two_user_inflated_report() { return {3.0, 3.0, 2.0}; }

NetworkInstance three_user_two_bs_ca_fixture() {
  return unit_network({{2.0, 0.1, 2.2, 0.1}, {0.5, 2.5, 0.1, 2.6}, {0.1, 2.4, 2.3, 0.2}},
                      {{0, 1}, {2, 3}}, 2.0);
}

NetworkInstance three_user_two_bs_capa_fixture() {
  return unit_network({{1 / 5.0, 1 / 5.0, 1 / 6.4, 1 / 11.0},
                       {1 / 6.0, 0.0, 0.0, 1 / 8.0},
                       {0.0, 1 / 4.0, 1 / 6.0, 0.0}},
                      {{0, 1}, {2, 3}}, 5.0);
}

std::vector<BetterReplyEntry> listed_better_replies(Strategy strategy) {
  // Profiles and BSs are 0-based; the two published columns differ only in
  // the user listed for the first row.
  std::vector<BetterReplyEntry> rows = {
      {{0, 0, 0}, 2, {1}}, {{0, 0, 1}, 1, {1}}, {{0, 1, 1}, 2, {0}}, {{0, 1, 0}, 0, {1}},
      {{1, 1, 0}, 1, {0}}, {{1, 0, 0}, 2, {1}}, {{1, 0, 1}, 0, {0}}, {{1, 1, 1}, 0, {0}},
  };
  if (strategy == Strategy::kCAPA) rows[0].user = 1;
  return rows;
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

VerificationReport verify_worked_examples() {
  VerificationReport r;

  const NetworkInstance one = two_user_single_bs_fixture();
  const AssociationProfile both = {0, 0};
  const ReportProfile truth = ReportProfile::truthful(one);
  ReportProfile lie = truth;
  lie.normalized[1] = two_user_inflated_report();
  lie.fabricated[1] = true;

  const double honest = bs_throughput(one, 0, both, truth, Strategy::kCA);
  const double cheated = bs_throughput(one, 0, both, lie, Strategy::kCA);
  add(r, "truthful CA throughput", std::abs(honest - 3.2958) <= 1e-3,
      fmt::format("{:.6f} nats/s", honest));
  add(r, "throughput under inflated report", std::abs(cheated - 1.9095) <= 1e-3,
      fmt::format("{:.6f} nats/s", cheated));
  const double ratio = cheated / honest;
  add(r, "manipulated share of optimum is about 58%", std::abs(ratio - 0.58) <= 0.005,
      fmt::format("{:.4f}", ratio));

  const std::vector<int> users = {0, 1};
  const RateVector honest_rates = realized_rates(one, solve_ca(one, 0, users, truth));
  const RateVector cheated_rates = realized_rates(one, solve_ca(one, 0, users, lie));
  const double gain = cheated_rates[1] / honest_rates[1] - 1.0;
  add(r, "manipulating user's rate rises by more than 70%", gain > 0.70,
      fmt::format("{:.1f}%", 100.0 * gain));
  const double vcg_gain = misreport_gain(one, both, 1, lie.normalized[1], Strategy::kCA);
  add(r, "taxed utility does not reward the inflated report", vcg_gain <= 1e-9,
      fmt::format("utility change {:.6f}", vcg_gain));

  check_taxless_table(r, "CA", three_user_two_bs_ca_fixture(), Strategy::kCA);
  check_taxless_table(r, "CAPA", three_user_two_bs_capa_fixture(), Strategy::kCAPA);

  const NetworkInstance ca = three_user_two_bs_ca_fixture();
  const GameMode taxed{Strategy::kCA, true, Objective::kThroughput};
  CellOracle oracle(ca, taxed);
  const NeEnumeration e = enumerate_nes(oracle);
  add(r, "taxed CA game: optimum profile is a NE", is_ne(oracle, e.optimum),
      fmt::format("optimum {} at {:.6f}", profile_label(e.optimum), e.optimum_objective));
  return r;
}

void print_report(std::ostream& out, const VerificationReport& report) {
  for (const auto& c : report.checks) {
    fmt::print(out, "{} {} ({})\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
  }
  const auto passed = std::count_if(report.checks.begin(), report.checks.end(),
                                    [](const Check& c) { return c.passed; });
  fmt::print(out, "{}/{} checks passed\n", passed, report.checks.size());
}

}  // namespace dbsa
