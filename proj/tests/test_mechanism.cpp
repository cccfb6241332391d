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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dbsa/fixtures.hpp"
#include "dbsa/mechanism.hpp"
#include "support/random_instances.hpp"

using dbsa::AssociationProfile;
using dbsa::GameMode;
using dbsa::MechanismConfig;
using dbsa::MechanismEvent;
using dbsa::MemoryBuffer;
using dbsa::NetworkInstance;
using dbsa::Objective;
using dbsa::Strategy;

namespace {

const GameMode kTaxedCA{Strategy::kCA, true, Objective::kThroughput};
const GameMode kTaxedCAPA{Strategy::kCAPA, true, Objective::kThroughput};

MechanismConfig config(int memory, std::uint64_t seed, GameMode mode = kTaxedCA) {
  MechanismConfig cfg;
  cfg.memory = memory;
  cfg.seed = seed;
  cfg.mode = mode;
  return cfg;
}

// One user, two BSs; the second is strictly better.
NetworkInstance one_user_two_bs() {
  NetworkInstance net;
  net.num_users = 1;
  net.num_bss = 2;
  net.channels_of_bs = {{0}, {1}};
  net.gain = {{1.0, 4.0}};
  net.noise = {{1.0, 1.0}};
  net.budget = {1.0, 1.0};
  net.weight = {1.0, 1.0};
  net.bandwidth = {1.0, 1.0};
  return net;
}

NetworkInstance shared_pair(double cross) {
  NetworkInstance net;
  net.num_users = 2;
  net.num_bss = 2;
  net.shared_subcarriers = 2;
  net.channels_of_bs = {{0, 1}, {2, 3}};
  net.gain = {{1.0, 2.0, cross, cross}, {cross, cross, 1.0, 2.0}};
  net.thermal_noise.assign(2, std::vector<double>(4, 0.1));
  net.noise = net.thermal_noise;
  net.budget = {2.0, 2.0};
  net.weight = {1.0, 1.0};
  net.bandwidth = {1.0, 1.0};
  net.user_pos = {{0.0, 0.0}, {1.0, 0.0}};
  net.bs_pos = {{0.0, 0.0}, {1.0, 0.0}};
  net.validate();
  return net;
}

}  // namespace

TEST_CASE("memory buffer") {
  CHECK_THROWS_AS(MemoryBuffer(0), std::invalid_argument);
  MemoryBuffer m(3);
  CHECK(m.empty());
  for (int bs : {4, 5, 6, 7}) m.push(bs);
  CHECK(m.size() == 3);
  CHECK(std::vector<int>(m.entries().begin(), m.entries().end()) == std::vector<int>{7, 6, 5});

  dbsa::Rng rng(1);
  std::map<int, int> counts;
  for (int n = 0; n < 30000; ++n) ++counts[m.sample(rng)];
  for (int bs : {5, 6, 7}) CHECK(counts[bs] == doctest::Approx(10000).epsilon(0.05));

  MemoryBuffer partial(10);
  partial.push(2);
  for (int n = 0; n < 100; ++n) CHECK(partial.sample(rng) == 2);
}

TEST_CASE("initial state") {
  const NetworkInstance pos = shared_pair(0.0);
  NetworkInstance copy = pos;
  const auto s = dbsa::init_state(copy, config(2, 1));
  CHECK(s.t == 0);
  CHECK(s.profile == AssociationProfile{0, 1});
  CHECK(s.trace.size() == 1u);
  for (const auto& m : s.memory) CHECK(m.empty());

  NetworkInstance plain = one_user_two_bs();
  CHECK(dbsa::nearest_profile(plain) == AssociationProfile{1});
  NetworkInstance again = plain;
  CHECK(dbsa::init_state(plain, config(3, 9)) == dbsa::init_state(again, config(3, 9)));

  CHECK_THROWS_AS(dbsa::init_state(plain, config(0, 1)), std::invalid_argument);
  auto bad = config(1, 1);
  bad.costs = {0.0, 0.0};
  CHECK_THROWS_AS(dbsa::init_state(plain, bad), std::invalid_argument);
  bad.costs = {-1.0};
  CHECK_THROWS_AS(dbsa::init_state(plain, bad), std::invalid_argument);
}

TEST_CASE("a saturated equilibrium is absorbing") {
  NetworkInstance net = dbsa::three_user_two_bs_ca_fixture();
  const auto r = dbsa::run(net, config(3, 5));
  REQUIRE(r.converged);
  auto s = dbsa::init_state(net, config(3, 5));
  s.profile = r.profile;
  for (int i = 0; i < net.num_users; ++i) {
    for (int n = 0; n < 3; ++n) s.memory[i].push(r.profile[i]);
  }
  for (int n = 0; n < 10; ++n) {
    dbsa::step(net, s, kTaxedCA);
    CHECK(s.profile == r.profile);
  }
}

TEST_CASE("a lone user locks onto the better BS") {
  NetworkInstance net = one_user_two_bs();
  for (int m : {1, 2, 5}) {
    auto s = dbsa::init_state(net, config(m, 3));
    s.profile = {0};
    s.trace.back().profile = {0};
    for (int n = 0; n < m; ++n) dbsa::step(net, s, kTaxedCA);
    CHECK(s.profile == AssociationProfile{1});
    for (int n = 0; n < 5; ++n) {
      dbsa::step(net, s, kTaxedCA);
      CHECK(s.profile == AssociationProfile{1});
    }
  }
}

TEST_CASE("an infinite switching cost freezes the profile") {
  dbsa::Rng rng(2);
  for (int n = 0; n < 20; ++n) {
    NetworkInstance net = testing_support::random_small_instance(rng);
    auto cfg = config(2, n);
    cfg.cost = std::numeric_limits<double>::infinity();
    auto s = dbsa::init_state(net, cfg);
    const auto start = s.profile;
    for (int t = 0; t < 10; ++t) {
      dbsa::step(net, s, kTaxedCA);
      CHECK(s.profile == start);
    }
  }
}

TEST_CASE("a single BS converges at t = M") {
  const NetworkInstance net = dbsa::two_user_single_bs_fixture();
  for (int m : {1, 2, 4}) {
    auto cfg = config(m, 1);
    cfg.max_iter = 50;
    const auto r = dbsa::run(net, cfg);
    CHECK(r.converged);
    CHECK(r.iterations == m);
    CHECK(r.trace.size() == static_cast<std::size_t>(m + 1));
    CHECK(r.ne_verified);
  }
  auto cfg = config(5, 1);
  cfg.max_iter = 5;
  CHECK_THROWS_AS(dbsa::run(net, cfg), std::invalid_argument);
}

TEST_CASE("three-user taxed game converges to an equilibrium") {
  const NetworkInstance net = dbsa::three_user_two_bs_ca_fixture();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = dbsa::run(net, config(3, seed));
    CHECK(r.converged);
    CHECK(r.ne_verified);
    CHECK(dbsa::is_ne(net, r.profile, kTaxedCA));
  }
}

TEST_CASE("random instances converge with M = N") {
  dbsa::Rng rng(3);
  testing_support::InstanceShape shape;
  shape.max_users = 8;
  shape.max_bss = 4;
  for (int n = 0; n < 100; ++n) {
    const NetworkInstance net = testing_support::random_small_instance(rng, shape);
    const auto r = dbsa::run(net, config(net.num_users, n, n % 2 ? kTaxedCA : kTaxedCAPA));
    CHECK(r.converged);
    CHECK(r.ne_verified);
    CHECK(static_cast<int>(r.trace.size()) == r.iterations + 1);
    for (std::size_t t = 0; t < r.trace.size(); ++t) CHECK(r.trace[t].iteration == static_cast<int>(t));
  }
}

TEST_CASE("runs replay from the seed and ignore the update order") {
  dbsa::Rng rng(4);
  for (int n = 0; n < 20; ++n) {
    const NetworkInstance net = testing_support::random_small_instance(rng);
    const auto a = dbsa::run(net, config(2, 77));
    const auto b = dbsa::run(net, config(2, 77));
    CHECK(a.trace == b.trace);

    NetworkInstance x = net;
    NetworkInstance y = net;
    auto s1 = dbsa::init_state(x, config(2, 5));
    auto s2 = dbsa::init_state(y, config(2, 5));
    std::vector<int> reversed(net.num_users);
    std::iota(reversed.rbegin(), reversed.rend(), 0);
    for (int t = 0; t < 15; ++t) {
      dbsa::step(x, s1, kTaxedCAPA);
      dbsa::step(y, s2, kTaxedCAPA, reversed);
      for (const auto& m : s1.memory) CHECK(m.size() <= 2);
    }
    CHECK(s1 == s2);
  }
}

TEST_CASE("switching costs slow nothing down on average") {
  dbsa::Rng rng(5);
  testing_support::InstanceShape shape;
  shape.min_users = 4;
  shape.max_users = 8;
  shape.min_bss = 2;
  shape.max_bss = 4;
  double free_total = 0.0;
  double costly_total = 0.0;
  for (int n = 0; n < 60; ++n) {
    const NetworkInstance net = testing_support::random_small_instance(rng, shape);
    auto cfg = config(3, n);
    free_total += dbsa::run(net, cfg).iterations;
    cfg.cost = 0.2;
    costly_total += dbsa::run(net, cfg).iterations;
  }
  CHECK(costly_total <= free_total);
}

TEST_CASE("advance resumes an interrupted run") {
  const NetworkInstance net = dbsa::three_user_two_bs_ca_fixture();
  const auto full = dbsa::run(net, config(3, 11));
  NetworkInstance copy = net;
  auto s = dbsa::init_state(copy, config(3, 11));
  dbsa::advance(copy, s, kTaxedCA, 2);
  const bool done = dbsa::advance(copy, s, kTaxedCA, 500);
  CHECK(done);
  CHECK(s.trace == full.trace);
}

TEST_CASE("user departures and arrivals") {
  const auto cfg_s = [] {
    auto c = dbsa::ScenarioConfig::indoor_defaults();
    c.num_users = 6;
    c.num_bss = 3;
    c.num_channels = 9;
    c.seed = 8;
    return c;
  }();
  NetworkInstance net = dbsa::generate(cfg_s);
  const NetworkInstance original = net;
  auto s = dbsa::init_state(net, config(2, 4));
  dbsa::advance(net, s, kTaxedCA, 5);

  dbsa::NewUser back;
  back.has_pos = true;
  back.pos = net.user_pos[2];
  back.gain = net.gain[2];
  back.noise = net.noise[2];

  MechanismEvent leave;
  leave.kind = MechanismEvent::Kind::kRemoveUsers;
  leave.departures = {2};
  dbsa::apply_event(net, s, leave, kTaxedCA);
  CHECK(net.num_users == 5);
  CHECK(s.profile.size() == 5u);
  CHECK(s.memory.size() == 5u);
  CHECK(s.trace.back().event == "remove_users:1");
  CHECK(s.trace.size() == static_cast<std::size_t>(s.t + 1));

  MechanismEvent join;
  join.kind = MechanismEvent::Kind::kAddUsers;
  join.arrivals = {back};
  dbsa::apply_event(net, s, join, kTaxedCA);
  CHECK(net.num_users == 6);
  CHECK(s.memory.back().empty());
  CHECK(s.profile.back() == dbsa::nearest_profile(net).back());

  // same users, user 2 now sits last
  std::vector<int> perm = {0, 1, 3, 4, 5, 2};
  for (int i = 0; i < 6; ++i) {
    CHECK(net.gain[i] == original.gain[perm[i]]);
    CHECK(net.user_pos[i] == original.user_pos[perm[i]]);
  }

  MechanismEvent unknown;
  unknown.kind = MechanismEvent::Kind::kRemoveUsers;
  unknown.departures = {6};
  CHECK_THROWS_AS(dbsa::apply_event(net, s, unknown, kTaxedCA), std::invalid_argument);

  const int t_before = s.t;
  dbsa::advance(net, s, kTaxedCA, t_before + 400);
  CHECK(s.t > t_before);
}

TEST_CASE("arrivals perturb the throughput and the mechanism recovers") {
  auto cfg_s = dbsa::ScenarioConfig::indoor_defaults();
  cfg_s.num_users = 20;
  cfg_s.num_bss = 6;
  cfg_s.num_channels = 24;
  cfg_s.seed = 10;
  NetworkInstance net = dbsa::generate(cfg_s);
  auto s = dbsa::init_state(net, config(5, 1));
  dbsa::advance(net, s, kTaxedCA, 100);
  while (s.t < 100) dbsa::step(net, s, kTaxedCA);
  const double before = s.trace.back().throughput;
  dbsa::Rng rng(3);
  MechanismEvent join;
  join.kind = MechanismEvent::Kind::kAddUsers;
  join.arrivals = dbsa::draw_users(net, cfg_s, 10, rng);
  dbsa::apply_event(net, s, join, kTaxedCA);
  CHECK(s.trace[100].event == "add_users:10");
  CHECK(s.trace[100].throughput != before);
  CHECK(dbsa::advance(net, s, kTaxedCA, 1000));
  CHECK(dbsa::is_ne(net, s.profile, kTaxedCA));
}

TEST_CASE("channel regeneration is seed-determined") {
  auto cfg_s = dbsa::ScenarioConfig::indoor_defaults();
  cfg_s.num_users = 5;
  cfg_s.num_bss = 2;
  cfg_s.num_channels = 6;
  cfg_s.seed = 2;
  NetworkInstance a = dbsa::generate(cfg_s);
  NetworkInstance b = a;
  auto sa = dbsa::init_state(a, config(2, 1));
  auto sb = dbsa::init_state(b, config(2, 1));
  MechanismEvent regen;
  regen.kind = MechanismEvent::Kind::kRegenerateChannels;
  regen.scenario = cfg_s;
  regen.seed = 1234;
  dbsa::apply_event(a, sa, regen, kTaxedCA);
  dbsa::apply_event(b, sb, regen, kTaxedCA);
  CHECK(a == b);
  CHECK(sa == sb);
  CHECK(sa.trace.back().event == "regenerate_channels");
}

TEST_CASE("inter-cell interference") {
  SUBCASE("orthogonal and single-BS instances are untouched") {
    NetworkInstance net = dbsa::two_user_single_bs_fixture();
    const auto before = net.noise;
    dbsa::update_interference_noise(net, std::vector<double>{1.0, 1.0, 1.0});
    CHECK(net.noise == before);
  }
  SUBCASE("zero cross gains leave thermal noise on the serving channels") {
    NetworkInstance net = shared_pair(0.0);
    dbsa::update_interference_noise(net, std::vector<double>{1.0, 1.0, 1.0, 1.0});
    for (int k : {0, 1}) CHECK(net.noise[0][k] == net.thermal_noise[0][k]);
    for (int k : {2, 3}) CHECK(net.noise[1][k] == net.thermal_noise[1][k]);
  }
  SUBCASE("symmetric pair") {
    NetworkInstance net = shared_pair(0.3);
    const std::vector<double> p = {1.5, 0.5, 0.25, 1.75};
    dbsa::update_interference_noise(net, p);
    // user 0 on its own BS's subcarrier c hears BS 1 on the same subcarrier
    CHECK(net.noise[0][0] == doctest::Approx(0.1 + 0.3 * 0.25));
    CHECK(net.noise[0][1] == doctest::Approx(0.1 + 0.3 * 1.75));
    CHECK(net.noise[1][2] == doctest::Approx(0.1 + 0.3 * 1.5));
    CHECK(net.noise[1][3] == doctest::Approx(0.1 + 0.3 * 0.5));
    CHECK_THROWS_AS(dbsa::update_interference_noise(net, std::vector<double>{1.0}),
                    std::invalid_argument);
  }
  SUBCASE("powers gathered from allocations") {
    NetworkInstance net = shared_pair(0.3);
    dbsa::Allocation a;
    a.bs = 1;
    a.beta = {1, 1};
    a.power = {0.5, 1.5};
    CHECK(dbsa::channel_powers(net, std::vector<dbsa::Allocation>{a}) ==
          std::vector<double>{0.0, 0.0, 0.5, 1.5});
  }
  SUBCASE("shared-spectrum runs start from equal-power interference") {
    NetworkInstance net = shared_pair(0.3);
    auto s = dbsa::init_state(net, config(1, 1, kTaxedCAPA));
    CHECK(net.noise[0][0] == doctest::Approx(0.1 + 0.3 * 1.0));
    auto cfg = config(1, 1, kTaxedCAPA);
    cfg.max_iter = 40;
    const auto r = dbsa::run(shared_pair(0.3), cfg);
    CHECK(r.trace.size() <= 41u);
  }
}

TEST_CASE("trace output") {
  const NetworkInstance net = dbsa::three_user_two_bs_ca_fixture();
  const auto r = dbsa::run(net, config(3, 2));
  std::ostringstream out;
  dbsa::write_trace_csv(out, r.trace, net.num_bss);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "iteration,throughput,bs0,bs1,profile,event");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == static_cast<int>(r.trace.size()));

  const auto j = dbsa::run_summary(r);
  CHECK(j.at("converged").get<bool>() == r.converged);
  CHECK(j.at("iterations").get<int>() == r.iterations);
  CHECK(j.at("final_profile").get<AssociationProfile>() == r.profile);
}
