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

#include "dbsa/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <fmt/core.h>
#include <fmt/ostream.h>

namespace dbsa {

MemoryBuffer::MemoryBuffer(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("memory length must be at least 1");
}

void MemoryBuffer::push(int bs) {
  entries_.push_front(bs);
  if (static_cast<int>(entries_.size()) > capacity_) entries_.pop_back();
}

int MemoryBuffer::sample(Rng& rng) const {
  if (entries_.empty()) throw std::logic_error("sampling an empty memory");
  std::uniform_int_distribution<std::size_t> pick(0, entries_.size() - 1);
  return entries_[pick(rng)];
}

AssociationProfile nearest_profile(const NetworkInstance& net) {
  AssociationProfile a(net.num_users, 0);
  for (int i = 0; i < net.num_users; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int w = 0; w < net.num_bss; ++w) {
      double score = 0.0;
      if (net.has_positions()) {
        score = distance(net.user_pos[i], net.bs_pos[w]);
      } else {
        const auto& ks = net.channels_of_bs[w];
        for (int k : ks) score -= net.normalized_gain(i, k);
        score /= static_cast<double>(ks.size());
      }
      if (score < best) {
        best = score;
        a[i] = w;
      }
    }
  }
  return a;
}

namespace {

Rng user_rng(std::uint64_t seed, int t, int user) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(user)};
  return Rng(seq);
}

ReportProfile reports_for(const NetworkInstance& net, const MechanismState& state) {
  return state.reports ? *state.reports : ReportProfile::truthful(net);
}

void record(CellOracle& oracle, MechanismState& state, std::string event) {
  const NetworkInstance& net = oracle.net();
  TraceRecord r;
  r.iteration = state.t;
  r.profile = state.profile;
  r.event = std::move(event);
  for (int w = 0; w < net.num_bss; ++w) {
    const auto& cell = oracle.cell(w, users_of(state.profile, w));
    double sum = 0.0;
    for (double rate : cell.realized) sum += rate;
    r.bs_throughput.push_back(net.weight[w] * sum);
    r.throughput += r.bs_throughput.back();
  }
  for (int i = 0; i < net.num_users; ++i) r.utilities.push_back(oracle.utility(state.profile, i));
  if (static_cast<int>(state.trace.size()) == state.t) {
    state.trace.push_back(std::move(r));
  } else {
    state.trace[state.t] = std::move(r);
  }
}

std::vector<Allocation> allocate_all(const NetworkInstance& net, const MechanismState& state,
                                     Strategy strategy) {
  const ReportProfile reports = reports_for(net, state);
  std::vector<Allocation> out;
  for (int w = 0; w < net.num_bss; ++w) {
    out.push_back(solve(strategy, net, w, users_of(state.profile, w), reports));
  }
  return out;
}

void equal_power_interference(NetworkInstance& net) {
  std::vector<double> power(net.num_channels());
  for (int w = 0; w < net.num_bss; ++w) {
    for (int k : net.channels_of_bs[w]) {
      power[k] = net.budget[w] / static_cast<double>(net.channels_of_bs[w].size());
    }
  }
  update_interference_noise(net, power);
}

// S3 against a frozen profile, then the memory draw.
void choose_and_sample(CellOracle& oracle, MechanismState& state, std::span<const int> order) {
  const int n = static_cast<int>(state.profile.size());
  std::vector<int> ascending;
  if (order.empty()) {
    ascending.resize(n);
    std::iota(ascending.begin(), ascending.end(), 0);
    order = ascending;
  }
  if (static_cast<int>(order.size()) != n) {
    throw std::invalid_argument("user order must be a permutation of all users");
  }
  const AssociationProfile frozen = state.profile;
  AssociationProfile next = frozen;
  for (int i : order) {
    Rng rng = user_rng(state.seed, state.t, i);
    const auto br = better_reply_set(oracle, frozen, i, state.costs[i]);
    int choice = frozen[i];
    if (!br.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, br.size() - 1);
      choice = br[pick(rng)];
    }
    state.memory[i].push(choice);
    next[i] = state.memory[i].sample(rng);
  }
  state.stable = next == frozen ? state.stable + 1 : 0;
  state.profile = std::move(next);
  ++state.t;
}

// Shared spectrum: interference from the last allocations, then S2 on the
// updated noise, then S3.
void shared_step(NetworkInstance& net, MechanismState& state, GameMode mode,
                 std::span<const int> order) {
  if (!state.allocations.empty()) {
    update_interference_noise(net, channel_powers(net, state.allocations));
  }
  state.allocations = allocate_all(net, state, mode.strategy);
  CellOracle oracle(net, reports_for(net, state), mode);
  choose_and_sample(oracle, state, order);
  record(oracle, state, {});
}

}  // namespace

MechanismState init_state(NetworkInstance& net, const MechanismConfig& cfg) {
  if (cfg.memory < 1) throw std::invalid_argument("memory length must be at least 1");
  net.validate();
  MechanismState s;
  s.memory_length = cfg.memory;
  s.seed = cfg.seed;
  if (cfg.costs.empty()) {
    s.costs.assign(net.num_users, cfg.cost);
  } else if (static_cast<int>(cfg.costs.size()) == net.num_users) {
    s.costs = cfg.costs;
  } else {
    throw std::invalid_argument("one switching cost per user expected");
  }
  for (double c : s.costs) {
    if (!(c >= 0.0)) throw std::invalid_argument("switching costs must be non-negative");
  }
  if (cfg.reports) {
    if (net.shared_spectrum()) {
      throw std::invalid_argument("fixed reports are not supported with shared spectrum");
    }
    s.reports = cfg.reports;
  }
  s.profile = nearest_profile(net);
  s.memory.assign(net.num_users, MemoryBuffer(cfg.memory));
  if (net.shared_spectrum()) equal_power_interference(net);
  CellOracle oracle(net, reports_for(net, s), cfg.mode);
  record(oracle, s, {});
  return s;
}

void step(NetworkInstance& net, MechanismState& state, GameMode mode,
          std::span<const int> order) {
  if (net.shared_spectrum()) {
    shared_step(net, state, mode, order);
    return;
  }
  CellOracle oracle(net, reports_for(net, state), mode);
  choose_and_sample(oracle, state, order);
  record(oracle, state, {});
}

bool stopping_rule_met(const MechanismState& state) {
  return state.stable >= state.memory_length;
}

bool advance(NetworkInstance& net, MechanismState& state, GameMode mode, int until_iter) {
  if (net.shared_spectrum()) {
    while (!stopping_rule_met(state) && state.t < until_iter) shared_step(net, state, mode, {});
    return stopping_rule_met(state);
  }
  // Orthogonal spectrum: the instance is fixed, so one oracle serves every round.
  CellOracle oracle(net, reports_for(net, state), mode);
  while (!stopping_rule_met(state) && state.t < until_iter) {
    choose_and_sample(oracle, state, {});
    record(oracle, state, {});
  }
  return stopping_rule_met(state);
}

RunResult run(const NetworkInstance& net_in, const MechanismConfig& cfg) {
  if (cfg.max_iter < cfg.memory + 1) {
    throw std::invalid_argument("max_iter must be at least memory + 1");
  }
  NetworkInstance net = net_in;
  MechanismState state = init_state(net, cfg);
  RunResult out;
  out.converged = advance(net, state, cfg.mode, cfg.max_iter);
  out.iterations = state.t;
  out.profile = state.profile;
  CellOracle oracle(net, reports_for(net, state), cfg.mode);
  out.ne_verified = is_ne(oracle, out.profile);
  out.trace = std::move(state.trace);
  return out;
}

void apply_event(NetworkInstance& net, MechanismState& state, const MechanismEvent& event,
                 GameMode mode, double arrival_cost) {
  std::string note;
  switch (event.kind) {
    case MechanismEvent::Kind::kAddUsers: {
      const int k_total = net.num_channels();
      for (const auto& u : event.arrivals) {
        if (static_cast<int>(u.gain.size()) != k_total ||
            static_cast<int>(u.noise.size()) != k_total) {
          throw std::invalid_argument("arriving user needs one gain and noise per channel");
        }
        if (net.has_positions() != u.has_pos) {
          throw std::invalid_argument("arriving user must match the instance's positioning");
        }
      }
      const int first_new = net.num_users;
      for (const auto& u : event.arrivals) {
        net.gain.push_back(u.gain);
        net.noise.push_back(u.noise);
        if (net.shared_spectrum()) {
          net.thermal_noise.push_back(u.thermal_noise.empty() ? u.noise : u.thermal_noise);
        }
        if (u.has_pos) net.user_pos.push_back(u.pos);
        ++net.num_users;
      }
      const AssociationProfile nearest = nearest_profile(net);
      for (int i = first_new; i < net.num_users; ++i) {
        state.profile.push_back(nearest[i]);
        state.memory.emplace_back(state.memory_length);
        state.costs.push_back(arrival_cost);
        if (state.reports) {
          state.reports->normalized.emplace_back(net.num_channels());
          for (int k = 0; k < net.num_channels(); ++k) {
            state.reports->normalized.back()[k] = net.normalized_gain(i, k);
          }
          state.reports->fabricated.push_back(false);
        }
      }
      note = fmt::format("add_users:{}", event.arrivals.size());
      break;
    }
    case MechanismEvent::Kind::kRemoveUsers: {
      std::vector<int> gone = event.departures;
      std::sort(gone.begin(), gone.end());
      if (std::adjacent_find(gone.begin(), gone.end()) != gone.end()) {
        throw std::invalid_argument("a user can only depart once per event");
      }
      for (int i : gone) {
        if (i < 0 || i >= net.num_users) {
          throw std::invalid_argument(fmt::format("cannot remove unknown user {}", i));
        }
      }
      for (auto it = gone.rbegin(); it != gone.rend(); ++it) {
        const int i = *it;
        net.gain.erase(net.gain.begin() + i);
        net.noise.erase(net.noise.begin() + i);
        if (!net.thermal_noise.empty()) net.thermal_noise.erase(net.thermal_noise.begin() + i);
        if (net.has_positions()) net.user_pos.erase(net.user_pos.begin() + i);
        --net.num_users;
        state.profile.erase(state.profile.begin() + i);
        state.memory.erase(state.memory.begin() + i);
        state.costs.erase(state.costs.begin() + i);
        if (state.reports) {
          state.reports->normalized.erase(state.reports->normalized.begin() + i);
          state.reports->fabricated.erase(state.reports->fabricated.begin() + i);
        }
      }
      // Allocations index users; only their powers stay meaningful.
      for (auto& a : state.allocations) std::fill(a.beta.begin(), a.beta.end(), -1);
      note = fmt::format("remove_users:{}", gone.size());
      break;
    }
    case MechanismEvent::Kind::kRegenerateChannels: {
      Rng rng(event.seed);
      regenerate_gains(net, event.scenario, rng);
      // Reports described the old channels.
      state.reports.reset();
      note = "regenerate_channels";
      break;
    }
  }
  if (net.shared_spectrum()) {
    if (state.allocations.empty()) {
      equal_power_interference(net);
    } else {
      update_interference_noise(net, channel_powers(net, state.allocations));
    }
  }
  net.validate();
  state.stable = 0;
  CellOracle oracle(net, reports_for(net, state), mode);
  const std::string previous = state.trace.empty() ? "" : state.trace.back().event;
  record(oracle, state, previous.empty() ? note : previous + ";" + note);
}

void update_interference_noise(NetworkInstance& net, std::span<const double> power_of_channel) {
  if (!net.shared_spectrum()) return;
  if (static_cast<int>(power_of_channel.size()) != net.num_channels()) {
    throw std::invalid_argument("one power per channel expected");
  }
  const int subcarriers = net.shared_subcarriers;
  for (int i = 0; i < net.num_users; ++i) {
    for (int c = 0; c < subcarriers; ++c) {
      for (int w = 0; w < net.num_bss; ++w) {
        const int k = net.channels_of_bs[w][c];
        double interference = 0.0;
        for (int v = 0; v < net.num_bss; ++v) {
          if (v == w) continue;
          const int kv = net.channels_of_bs[v][c];
          interference += net.gain[i][kv] * power_of_channel[kv];
        }
        net.noise[i][k] = net.thermal_noise[i][k] + interference;
      }
    }
  }
}

std::vector<double> channel_powers(const NetworkInstance& net,
                                   std::span<const Allocation> allocations) {
  std::vector<double> power(net.num_channels(), 0.0);
  for (const auto& a : allocations) {
    if (a.bs < 0) continue;
    const auto& ks = net.channels_of_bs[a.bs];
    for (std::size_t c = 0; c < ks.size() && c < a.power.size(); ++c) power[ks[c]] = a.power[c];
  }
  return power;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace, int num_bss) {
  out << "iteration,throughput";
  for (int w = 0; w < num_bss; ++w) out << ",bs" << w;
  out << ",profile,event\n";
  for (const auto& r : trace) {
    fmt::print(out, "{},{:.17g}", r.iteration, r.throughput);
    for (double v : r.bs_throughput) fmt::print(out, ",{:.17g}", v);
    std::string joined;
    for (std::size_t i = 0; i < r.profile.size(); ++i) {
      if (i) joined += ';';
      joined += std::to_string(r.profile[i]);
    }
    fmt::print(out, ",{},{}\n", joined, r.event);
  }
}

nlohmann::json run_summary(const RunResult& result) {
  return nlohmann::json{
      {"converged", result.converged},
      {"iterations", result.iterations},
      {"ne_verified", result.ne_verified},
      {"final_profile", result.profile},
      {"final_throughput", result.trace.empty() ? 0.0 : result.trace.back().throughput}};
}

}  // namespace dbsa
