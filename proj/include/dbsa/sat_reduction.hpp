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

#include <array>
#include <istream>
#include <string>
#include <vector>

#include "dbsa/network.hpp"

namespace dbsa {

struct Literal {
  int var = 0;  // 0-based variable index
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::array<Literal, 3>;

struct SatInstance {
  int num_vars = 0;
  std::vector<Clause> clauses;

  void validate() const;
  bool satisfied_by(const std::vector<bool>& assignment) const;
};

// DIMACS CNF. Every clause must have exactly three literals.
SatInstance parse_dimacs(std::istream& in);
SatInstance load_dimacs(const std::string& path);

// Network built from a 3-SAT instance together with the throughput level that
// is reachable exactly when the formula is satisfiable.
//
// Layout for M variables and Q clauses: for variable m, users x_m^q
// (index m*(2Q+1) + q), xbar_m^q (m*(2Q+1) + Q + q) and y_m (m*(2Q+1) + 2Q);
// BSs X_m (2m), Xbar_m (2m+1) with Q channels and budget Q each, then one
// single-channel clause BS per clause (2M + q) with budget 1.
struct SatReduction {
  NetworkInstance net;
  // Threshold in nats/s: the best value of a variable-BS pair is
  // Q ln 4 + Q ln 3 and a clause BS serving one user is worth ln 2.
  double threshold = 0.0;
};

SatReduction reduce_3sat(const SatInstance& sat);

int reduction_user_x(int m, int q, int num_clauses, bool negated);
int reduction_user_y(int m, int num_clauses);

// Threshold as the closed form 2MQ + MQ ln 3 + Q, which mixes base-2 and
// natural-log units; kept for comparison with the unit-consistent threshold.
double mixed_unit_threshold(int num_vars, int num_clauses);

}  // namespace dbsa
