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

#include "dbsa/baselines.hpp"

#include <numeric>

#include <fmt/core.h>

#include "dbsa/mechanism.hpp"

namespace dbsa {

namespace {

GameMode throughput_mode(Strategy strategy) {
  return GameMode{strategy, true, Objective::kThroughput};
}

}  // namespace

BaselineResult nearest_bs(const NetworkInstance& net, Strategy strategy) {
  BaselineResult out;
  out.profile = nearest_profile(net);
  out.throughput = system_throughput(net, *out.profile, strategy);
  out.evaluations = 1;
  return out;
}

std::vector<std::vector<int>> pruned_candidates(const NetworkInstance& net) {
  std::vector<std::vector<int>> out(net.num_users);
  for (int i = 0; i < net.num_users; ++i) {
    for (int w = 0; w < net.num_bss; ++w) {
      for (int k : net.channels_of_bs[w]) {
        if (net.gain[i][k] > 0.0) {
          out[i].push_back(w);
          break;
        }
      }
    }
    if (out[i].empty()) {
      out[i].resize(net.num_bss);
      std::iota(out[i].begin(), out[i].end(), 0);
    }
  }
  return out;
}

BaselineResult exhaustive_opt(const NetworkInstance& net, Strategy strategy) {
  const auto cand = pruned_candidates(net);
  double space = 1.0;
  for (const auto& c : cand) space *= static_cast<double>(c.size());
  if (space > kExhaustiveLimit) {
    throw SearchSpaceTooLarge(
        fmt::format("{} pruned profiles exceed the exhaustive limit of {}", space,
                    kExhaustiveLimit));
  }
  CellOracle oracle(net, throughput_mode(strategy));
  std::vector<std::size_t> digit(net.num_users, 0);
  AssociationProfile a(net.num_users);
  for (int i = 0; i < net.num_users; ++i) a[i] = cand[i][0];

  BaselineResult out;
  bool first = true;
  for (;;) {
    ++out.evaluations;
    const double value = oracle.system_objective(a);
    if (first || value > out.throughput) {
      out.throughput = value;
      out.profile = a;
      first = false;
    }
    int pos = net.num_users - 1;
    while (pos >= 0 && ++digit[pos] == cand[pos].size()) {
      digit[pos] = 0;
      a[pos] = cand[pos][0];
      --pos;
    }
    if (pos < 0) break;
    a[pos] = cand[pos][digit[pos]];
  }
  return out;
}

BaselineResult greedy0(const NetworkInstance& net, Strategy strategy, std::span<const int> start) {
  AssociationProfile a = start.empty() ? nearest_profile(net)
                                       : AssociationProfile(start.begin(), start.end());
  validate_profile(net, a);
  CellOracle oracle(net, throughput_mode(strategy));
  BaselineResult out;
  double current = oracle.system_objective(a);
  ++out.evaluations;
  for (;;) {
    int best_user = -1;
    int best_bs = -1;
    double best_value = current + 1e-12;
    for (int i = 0; i < net.num_users; ++i) {
      const int home = a[i];
      for (int w = 0; w < net.num_bss; ++w) {
        if (w == home) continue;
        a[i] = w;
        const double v = oracle.system_objective(a);
        ++out.evaluations;
        if (v > best_value) {
          best_value = v;
          best_user = i;
          best_bs = w;
        }
      }
      a[i] = home;
    }
    if (best_user < 0) break;
    a[best_user] = best_bs;
    current = best_value;
  }
  out.profile = a;
  out.throughput = current;
  return out;
}

BaselineResult multi_connect_bound(const NetworkInstance& net, Strategy strategy) {
  const ReportProfile truth = ReportProfile::truthful(net);
  std::vector<int> everyone(net.num_users);
  std::iota(everyone.begin(), everyone.end(), 0);
  BaselineResult out;
  for (int w = 0; w < net.num_bss; ++w) {
    const RateVector r = realized_rates(net, solve(strategy, net, w, everyone, truth));
    double sum = 0.0;
    for (double v : r) sum += v;
    out.throughput += net.weight[w] * sum;
    ++out.evaluations;
  }
  return out;
}

}  // namespace dbsa
