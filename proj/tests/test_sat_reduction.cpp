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
#include <sstream>
#include <stdexcept>

#include "dbsa/baselines.hpp"
#include "dbsa/game.hpp"
#include "dbsa/sat_reduction.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using dbsa::Literal;
using dbsa::SatInstance;
using dbsa::Strategy;

namespace {

SatInstance single(int vars, dbsa::Clause c) { return SatInstance{vars, {c}}; }

// Keeps only the two BSs of variable `m` and their users.
dbsa::NetworkInstance variable_gadget(const dbsa::NetworkInstance& net, int m, int q) {
  dbsa::NetworkInstance g;
  g.num_bss = 2;
  g.num_users = 2 * q + 1;
  const int first_user = m * (2 * q + 1);
  for (int side = 0; side < 2; ++side) {
    std::vector<int> ks;
    for (int c = 0; c < q; ++c) ks.push_back(side * q + c);
    g.channels_of_bs.push_back(ks);
  }
  for (int u = 0; u < g.num_users; ++u) {
    std::vector<double> row;
    for (int side = 0; side < 2; ++side) {
      for (int k : net.channels_of_bs[2 * m + side]) row.push_back(net.gain[first_user + u][k]);
    }
    g.gain.push_back(row);
    g.noise.emplace_back(row.size(), 1.0);
  }
  g.budget.assign(2, q);
  g.weight.assign(2, 1.0);
  g.bandwidth.assign(2, 1.0);
  g.validate();
  return g;
}

}  // namespace

TEST_CASE("reduction sizes") {
  dbsa::Rng rng(1);
  for (int m = 1; m <= 4; ++m) {
    for (int q = 1; q <= 4; ++q) {
      const auto red = dbsa::reduce_3sat(testing_support::random_3sat(rng, m, q));
      CHECK(red.net.num_users == (2 * q + 1) * m);
      CHECK(red.net.num_bss == 2 * m + q);
      CHECK(red.net.num_channels() == 2 * m * q + q);
    }
  }
}

TEST_CASE("gadget gains for a three-variable clause") {
  // X1 or not X2 or X3
  const auto sat = single(3, {Literal{0, false}, Literal{1, true}, Literal{2, false}});
  const auto red = dbsa::reduce_3sat(sat);
  const auto& net = red.net;
  const int q = 1;
  const int x1 = dbsa::reduction_user_x(0, 0, q, false);
  const int clause_ch = net.channels_of_bs[2 * 3 + 0][0];
  CHECK(net.gain[x1][net.channels_of_bs[0][0]] == 2.0);
  CHECK(net.gain[x1][clause_ch] == 1.0);
  CHECK(net.gain[dbsa::reduction_user_x(1, 0, q, true)][clause_ch] == 1.0);
  CHECK(net.gain[dbsa::reduction_user_x(1, 0, q, false)][clause_ch] == 0.0);
  CHECK(net.gain[dbsa::reduction_user_x(2, 0, q, false)][clause_ch] == 1.0);
  for (int m = 0; m < 3; ++m) {
    const int y = dbsa::reduction_user_y(m, q);
    CHECK(net.gain[y][net.channels_of_bs[2 * m][0]] == 3.0);
    CHECK(net.gain[y][net.channels_of_bs[2 * m + 1][0]] == 3.0);
    CHECK(net.gain[y][clause_ch] == 0.0);
  }
  CHECK(net.capacity_gap == 1.0);
  CHECK(net.budget[0] == 1.0);
  CHECK(net.budget[6] == 1.0);
}

TEST_CASE("thresholds for a single variable and clause") {
  const auto red = dbsa::reduce_3sat(single(1, {Literal{0, false}, Literal{0, false},
                                                 Literal{0, false}}));
  CHECK(red.net.num_users == 3);
  CHECK(red.net.num_bss == 3);
  CHECK(dbsa::mixed_unit_threshold(1, 1) == doctest::Approx(4.0986).epsilon(1e-4));
  CHECK(red.threshold == doctest::Approx(std::log(24.0)));
}

TEST_CASE("isolated variable gadget optimum") {
  dbsa::Rng rng(2);
  for (int q = 1; q <= 4; ++q) {
    const auto red = dbsa::reduce_3sat(testing_support::random_3sat(rng, 2, q));
    for (int m = 0; m < 2; ++m) {
      const auto gadget = variable_gadget(red.net, m, q);
      const double opt = dbsa::exhaustive_opt(gadget, Strategy::kCAPA).throughput;
      // 2Q bits plus Q ln 3, i.e. Q ln 4 + Q ln 3 in nats
      CHECK(std::abs(opt - (q * std::log(4.0) + q * std::log(3.0))) <= 1e-9);
    }
  }
}

TEST_CASE("single clause gadget optimum and its unique assignment") {
  const auto red = dbsa::reduce_3sat(single(1, {Literal{0, false}, Literal{0, false},
                                                 Literal{0, false}}));
  const auto best = dbsa::exhaustive_opt(red.net, Strategy::kCAPA);
  CHECK(std::abs(best.throughput - (std::log(4.0) + std::log(3.0) + std::log(2.0))) <= 1e-9);
  // y on the true-side BS, the positive literal user on the clause BS, the
  // negative literal user on the false-side BS
  CHECK(*best.profile == dbsa::AssociationProfile{2, 1, 0});
  int optima = 0;
  dbsa::AssociationProfile a(3, 0);
  for (int code = 0; code < 27; ++code) {
    a = {code % 3, (code / 3) % 3, code / 9};
    if (dbsa::system_throughput(red.net, a, Strategy::kCAPA) >= best.throughput - 1e-9) ++optima;
  }
  CHECK(optima == 1);
}

TEST_CASE("satisfiable instances reach the threshold, unsatisfiable ones do not") {
  dbsa::Rng rng(3);
  int sat_count = 0;
  int unsat_count = 0;
  for (int n = 0; n < 40; ++n) {
    const auto sat = testing_support::random_3sat(rng, 1 + n % 3, 1 + (n / 3) % 3);
    const auto red = dbsa::reduce_3sat(sat);
    const double opt = dbsa::exhaustive_opt(red.net, Strategy::kCAPA).throughput;
    if (oracle::brute_force_sat(sat)) {
      ++sat_count;
      CHECK(opt >= red.threshold - 1e-6);
    } else {
      ++unsat_count;
      CHECK(opt < red.threshold - 1e-6);
    }
  }
  CHECK(sat_count > 0);
  const auto red = dbsa::reduce_3sat(testing_support::crafted_unsatisfiable());
  CHECK(dbsa::exhaustive_opt(red.net, Strategy::kCAPA).throughput < red.threshold - 1e-6);
}

TEST_CASE("DIMACS parsing") {
  std::istringstream ok("c comment\np cnf 3 2\n1 -2 3 0\n-1 -1 2 0\n");
  const auto sat = dbsa::parse_dimacs(ok);
  CHECK(sat.num_vars == 3);
  REQUIRE(sat.clauses.size() == 2u);
  CHECK(sat.clauses[0][1] == Literal{1, true});
  CHECK(sat.clauses[1][0] == Literal{0, true});
  CHECK(sat.satisfied_by({true, true, false}));
  CHECK_FALSE(sat.satisfied_by({true, false, false}));

  std::istringstream two("p cnf 2 1\n1 2 0\n");
  CHECK_THROWS_AS(dbsa::parse_dimacs(two), std::invalid_argument);
  std::istringstream range("p cnf 2 1\n1 2 3 0\n");
  CHECK_THROWS_AS(dbsa::parse_dimacs(range), std::invalid_argument);
  std::istringstream count("p cnf 2 2\n1 2 2 0\n");
  CHECK_THROWS_AS(dbsa::parse_dimacs(count), std::invalid_argument);
}
