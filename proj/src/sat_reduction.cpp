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

#include "dbsa/sat_reduction.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/core.h>

namespace dbsa {

void SatInstance::validate() const {
  if (num_vars < 1) throw std::invalid_argument("3-SAT instance needs a variable");
  for (const auto& clause : clauses) {
    for (const auto& lit : clause) {
      if (lit.var < 0 || lit.var >= num_vars) {
        throw std::invalid_argument(fmt::format("literal variable {} out of range", lit.var));
      }
    }
  }
}

bool SatInstance::satisfied_by(const std::vector<bool>& assignment) const {
  for (const auto& clause : clauses) {
    bool ok = false;
    for (const auto& lit : clause) ok = ok || (assignment[lit.var] != lit.negated);
    if (!ok) return false;
  }
  return true;
}

SatInstance parse_dimacs(std::istream& in) {
  SatInstance sat;
  int declared_clauses = -1;
  std::vector<int> pending;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c" || first[0] == 'c' || first[0] == '%') continue;
    if (first == "p") {
      std::string fmt_name;
      ls >> fmt_name >> sat.num_vars >> declared_clauses;
      if (fmt_name != "cnf" || !ls) throw std::invalid_argument("bad DIMACS header: " + line);
      continue;
    }
    if (declared_clauses < 0) throw std::invalid_argument("clause before DIMACS header");
    std::istringstream all(line);
    long v = 0;
    while (all >> v) {
      if (v == 0) {
        if (pending.size() != 3) {
          throw std::invalid_argument(
              fmt::format("clause {} has {} literals, expected 3", sat.clauses.size() + 1,
                          pending.size()));
        }
        Clause c;
        for (int j = 0; j < 3; ++j) c[j] = Literal{std::abs(pending[j]) - 1, pending[j] < 0};
        sat.clauses.push_back(c);
        pending.clear();
      } else {
        pending.push_back(static_cast<int>(v));
      }
    }
  }
  if (!pending.empty()) throw std::invalid_argument("unterminated final clause");
  if (declared_clauses >= 0 && static_cast<int>(sat.clauses.size()) != declared_clauses) {
    throw std::invalid_argument(fmt::format("header declares {} clauses, found {}",
                                            declared_clauses, sat.clauses.size()));
  }
  sat.validate();
  return sat;
}

SatInstance load_dimacs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CNF file " + path);
  return parse_dimacs(in);
}

int reduction_user_x(int m, int q, int num_clauses, bool negated) {
  return m * (2 * num_clauses + 1) + (negated ? num_clauses : 0) + q;
}

int reduction_user_y(int m, int num_clauses) { return m * (2 * num_clauses + 1) + 2 * num_clauses; }

SatReduction reduce_3sat(const SatInstance& sat) {
  sat.validate();
  const int m_vars = sat.num_vars;
  const int q_clauses = static_cast<int>(sat.clauses.size());
  if (q_clauses < 1) throw std::invalid_argument("3-SAT instance needs a clause");

  NetworkInstance net;
  net.num_users = (2 * q_clauses + 1) * m_vars;
  net.num_bss = 2 * m_vars + q_clauses;
  const int k_total = 2 * m_vars * q_clauses + q_clauses;
  net.channels_of_bs.resize(net.num_bss);
  int next = 0;
  for (int w = 0; w < 2 * m_vars; ++w) {
    for (int q = 0; q < q_clauses; ++q) net.channels_of_bs[w].push_back(next++);
  }
  for (int q = 0; q < q_clauses; ++q) net.channels_of_bs[2 * m_vars + q].push_back(next++);

  net.gain.assign(net.num_users, std::vector<double>(k_total, 0.0));
  net.noise.assign(net.num_users, std::vector<double>(k_total, 1.0));
  net.budget.assign(net.num_bss, static_cast<double>(q_clauses));
  for (int q = 0; q < q_clauses; ++q) net.budget[2 * m_vars + q] = 1.0;
  net.weight.assign(net.num_bss, 1.0);
  net.bandwidth.assign(net.num_bss, 1.0);
  net.capacity_gap = 1.0;

  for (int m = 0; m < m_vars; ++m) {
    const int y = reduction_user_y(m, q_clauses);
    for (int side = 0; side < 2; ++side) {
      for (int k : net.channels_of_bs[2 * m + side]) net.gain[y][k] = 3.0;
      for (int q = 0; q < q_clauses; ++q) {
        const int x = reduction_user_x(m, q, q_clauses, side == 1);
        net.gain[x][net.channels_of_bs[2 * m + side][q]] = 2.0;
      }
    }
  }
  for (int q = 0; q < q_clauses; ++q) {
    const int k = net.channels_of_bs[2 * m_vars + q][0];
    // Repeated literals collapse: the clause BS sees each term once.
    for (const auto& lit : sat.clauses[q]) {
      net.gain[reduction_user_x(lit.var, q, q_clauses, lit.negated)][k] = 1.0;
    }
  }
  net.validate();

  const double mq = static_cast<double>(m_vars) * q_clauses;
  SatReduction out;
  out.net = std::move(net);
  out.threshold = mq * std::log(4.0) + mq * std::log(3.0) + q_clauses * std::log(2.0);
  return out;
}

double mixed_unit_threshold(int num_vars, int num_clauses) {
  const double mq = static_cast<double>(num_vars) * num_clauses;
  return 2.0 * mq + mq * std::log(3.0) + num_clauses;
}

}  // namespace dbsa
