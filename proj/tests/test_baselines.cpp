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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dbsa/baselines.hpp"
#include "dbsa/fixtures.hpp"
#include "dbsa/game.hpp"
#include "dbsa/sat_reduction.hpp"
#include "support/random_instances.hpp"

using dbsa::AssociationProfile;
using dbsa::NetworkInstance;
using dbsa::Strategy;

namespace {

NetworkInstance add_dead_bs(NetworkInstance net) {
  net.num_bss += 1;
  const int k = net.num_channels();
  net.channels_of_bs.push_back({k});
  for (auto& row : net.gain) row.push_back(0.0);
  for (auto& row : net.noise) row.push_back(1.0);
  net.budget.push_back(1.0);
  net.weight.push_back(1.0);
  net.bandwidth.push_back(1.0);
  net.validate();
  return net;
}

}  // namespace

TEST_CASE("single-BS example") {
  const NetworkInstance net = dbsa::two_user_single_bs_fixture();
  for (Strategy s : {Strategy::kCA, Strategy::kCAPA}) {
    const auto opt = dbsa::exhaustive_opt(net, s);
    const auto near = dbsa::nearest_bs(net, s);
    const auto greedy = dbsa::greedy0(net, s);
    const auto bound = dbsa::multi_connect_bound(net, s);
    CHECK(opt.evaluations == 1);
    CHECK(*opt.profile == AssociationProfile{0, 0});
    CHECK(near.throughput == doctest::Approx(opt.throughput));
    CHECK(greedy.throughput == doctest::Approx(opt.throughput));
    CHECK(bound.throughput == doctest::Approx(opt.throughput));
    CHECK_FALSE(bound.profile.has_value());
  }
  CHECK(dbsa::exhaustive_opt(net, Strategy::kCA).throughput ==
        doctest::Approx(3.2958).epsilon(1e-4));
}

TEST_CASE("a dead BS adds nothing to the bound") {
  const NetworkInstance net = add_dead_bs(dbsa::two_user_single_bs_fixture());
  const NetworkInstance single = dbsa::two_user_single_bs_fixture();
  CHECK(dbsa::multi_connect_bound(net, Strategy::kCA).throughput ==
        doctest::Approx(dbsa::exhaustive_opt(single, Strategy::kCA).throughput));
  // pruning keeps users off the dead BS
  for (const auto& c : dbsa::pruned_candidates(net)) CHECK(c == std::vector<int>{0});
}

TEST_CASE("users without any usable channel keep every candidate") {
  NetworkInstance net = dbsa::three_user_two_bs_ca_fixture();
  net.gain[1] = {0.0, 0.0, 0.0, 0.0};
  const auto c = dbsa::pruned_candidates(net);
  CHECK(c[1] == std::vector<int>{0, 1});
}

TEST_CASE("nearest BS follows the geometry") {
  auto cfg = dbsa::ScenarioConfig::indoor_defaults();
  cfg.num_users = 10;
  cfg.num_bss = 6;
  cfg.num_channels = 12;
  cfg.distribution_factor = 0.3;
  cfg.seed = 21;
  const NetworkInstance net = dbsa::generate(cfg);
  const auto r = dbsa::nearest_bs(net, Strategy::kCA);
  for (int i = 0; i < net.num_users; ++i) {
    const int w = (*r.profile)[i];
    for (int v = 0; v < net.num_bss; ++v) {
      CHECK(dbsa::distance(net.user_pos[i], net.bs_pos[w]) <=
            dbsa::distance(net.user_pos[i], net.bs_pos[v]));
    }
  }
}

TEST_CASE("greedy from the optimum makes no move") {
  const NetworkInstance net = dbsa::three_user_two_bs_ca_fixture();
  const auto opt = dbsa::exhaustive_opt(net, Strategy::kCA);
  const auto g = dbsa::greedy0(net, Strategy::kCA, *opt.profile);
  CHECK(*g.profile == *opt.profile);
  CHECK(g.evaluations == 1 + net.num_users * (net.num_bss - 1));
  CHECK(g.throughput == doctest::Approx(opt.throughput));
}

TEST_CASE("baseline ordering on random instances") {
  dbsa::Rng rng(1);
  testing_support::InstanceShape shape;
  shape.max_users = 6;
  for (int n = 0; n < 150; ++n) {
    const NetworkInstance net = testing_support::random_small_instance(rng, shape);
    for (Strategy s : {Strategy::kCA, Strategy::kCAPA}) {
      const double near = dbsa::nearest_bs(net, s).throughput;
      const double greedy = dbsa::greedy0(net, s).throughput;
      const auto opt = dbsa::exhaustive_opt(net, s);
      const double bound = dbsa::multi_connect_bound(net, s).throughput;
      CHECK(near <= greedy + 1e-9);
      CHECK(greedy <= opt.throughput + 1e-9);
      CHECK(opt.throughput <= bound + 1e-9);
      CHECK(near >= 0.0);
      CHECK(opt.throughput == doctest::Approx(dbsa::system_throughput(net, *opt.profile, s)));
      CHECK(dbsa::is_ne(net, *opt.profile, dbsa::GameMode{s, true, dbsa::Objective::kThroughput}));
    }
  }
}

TEST_CASE("exhaustive optimum ties break lexicographically") {
  NetworkInstance net;
  net.num_users = 1;
  net.num_bss = 2;
  net.channels_of_bs = {{0}, {1}};
  net.gain = {{1.0, 1.0}};
  net.noise = {{1.0, 1.0}};
  net.budget = {1.0, 1.0};
  net.weight = {1.0, 1.0};
  net.bandwidth = {1.0, 1.0};
  CHECK(*dbsa::exhaustive_opt(net, Strategy::kCA).profile == AssociationProfile{0});
}

TEST_CASE("reduced 3-SAT instance reaches its threshold") {
  const dbsa::SatInstance sat{1, {{dbsa::Literal{0, false}, dbsa::Literal{0, false},
                                   dbsa::Literal{0, false}}}};
  const auto red = dbsa::reduce_3sat(sat);
  CHECK(dbsa::exhaustive_opt(red.net, Strategy::kCAPA).throughput >= red.threshold - 1e-9);
}

TEST_CASE("oversized search spaces are refused") {
  NetworkInstance net;
  net.num_users = 24;
  net.num_bss = 2;
  net.channels_of_bs = {{0}, {1}};
  net.gain.assign(24, {1.0, 1.0});
  net.noise.assign(24, {1.0, 1.0});
  net.budget = {1.0, 1.0};
  net.weight = {1.0, 1.0};
  net.bandwidth = {1.0, 1.0};
  CHECK_THROWS_AS(dbsa::exhaustive_opt(net, Strategy::kCA), dbsa::SearchSpaceTooLarge);
  // the other baselines still work
  CHECK(dbsa::greedy0(net, Strategy::kCA).throughput > 0.0);
}
