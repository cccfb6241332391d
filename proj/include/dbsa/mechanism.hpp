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

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dbsa/allocation.hpp"
#include "dbsa/game.hpp"
#include "dbsa/network.hpp"
#include "dbsa/scenario.hpp"

namespace dbsa {

// Per-user FIFO of recently chosen BSs; newest entry at the front.
class MemoryBuffer {
 public:
  explicit MemoryBuffer(int capacity);

  void push(int bs);
  // Uniform over the entries currently held. Requires !empty().
  int sample(Rng& rng) const;

  bool empty() const { return entries_.empty(); }
  int size() const { return static_cast<int>(entries_.size()); }
  int capacity() const { return capacity_; }
  const std::deque<int>& entries() const { return entries_; }

  friend bool operator==(const MemoryBuffer&, const MemoryBuffer&) = default;

 private:
  std::deque<int> entries_;
  int capacity_ = 1;
};

struct TraceRecord {
  int iteration = 0;
  AssociationProfile profile;
  double throughput = 0.0;            // realized, weighted
  std::vector<double> utilities;      // per user, game utility
  std::vector<double> bs_throughput;  // per BS
  std::string event;                  // empty unless an event hit this iteration

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct MechanismConfig {
  int memory = 1;
  double cost = 0.0;          // switching cost for every user...
  std::vector<double> costs;  // ...unless given per user
  GameMode mode;
  int max_iter = 500;
  std::uint64_t seed = 0;
  // Reports the BSs allocate on; truthful when absent.
  std::optional<ReportProfile> reports;
};

struct MechanismState {
  int t = 0;
  int memory_length = 1;
  std::uint64_t seed = 0;
  AssociationProfile profile;
  std::vector<MemoryBuffer> memory;
  std::vector<double> costs;
  std::vector<TraceRecord> trace;  // trace[t] describes profile a^(t)
  // Consecutive iterations that left the profile unchanged.
  int stable = 0;
  // Most recent per-BS allocations (drive inter-cell interference).
  std::vector<Allocation> allocations;
  std::optional<ReportProfile> reports;

  friend bool operator==(const MechanismState&, const MechanismState&) = default;
};

// Nearest BS per user by position; without positions, the BS with the
// highest mean normalized gain (lowest index on ties).
AssociationProfile nearest_profile(const NetworkInstance& net);

// Throws std::invalid_argument for memory < 1 or a cost vector of the wrong
// size. In shared-spectrum instances the noise of `net` is reset to thermal
// noise plus interference under equal power on every channel.
MechanismState init_state(NetworkInstance& net, const MechanismConfig& cfg);

// One round: BS allocation, simultaneous better-reply choices against the
// frozen profile, memory update and sampling. Each user draws from its own
// generator seeded by (seed, t, user), so `order` (a permutation of users,
// empty for ascending) never changes the outcome.
void step(NetworkInstance& net, MechanismState& state, GameMode mode,
          std::span<const int> order = {});

// True once the profile has stayed constant for memory_length + 1 iterations.
bool stopping_rule_met(const MechanismState& state);

struct RunResult {
  AssociationProfile profile;
  std::vector<TraceRecord> trace;
  bool converged = false;
  int iterations = 0;
  bool ne_verified = false;  // terminal profile passed the NE check
};

// Throws std::invalid_argument when max_iter < memory + 1.
RunResult run(const NetworkInstance& net, const MechanismConfig& cfg);

// Continues `state` until the stopping rule fires or t reaches `until_iter`.
// Returns whether the rule fired.
bool advance(NetworkInstance& net, MechanismState& state, GameMode mode, int until_iter);

struct MechanismEvent {
  enum class Kind { kAddUsers, kRemoveUsers, kRegenerateChannels };
  Kind kind = Kind::kAddUsers;
  std::vector<NewUser> arrivals;
  std::vector<int> departures;  // user indices in the current instance
  ScenarioConfig scenario;      // channel model for regeneration
  std::uint64_t seed = 0;
};

// Mutates the instance and the state in place. Arrivals join at their nearest
// BS with an empty memory and switching cost `arrival_cost`; departures are
// removed and later users shift down. The iteration counter keeps running and
// trace[t] is re-recorded with the event annotated.
// Throws std::invalid_argument for an unknown departing user.
void apply_event(NetworkInstance& net, MechanismState& state, const MechanismEvent& event,
                 GameMode mode, double arrival_cost = 0.0);

// Shared-spectrum instances: noise(i, k) = thermal + sum over the other BSs
// transmitting on the same subcarrier of gain * power. `power_of_channel`
// is indexed by global channel. Orthogonal instances are left untouched.
void update_interference_noise(NetworkInstance& net, std::span<const double> power_of_channel);
std::vector<double> channel_powers(const NetworkInstance& net,
                                   std::span<const Allocation> allocations);

// iteration,throughput,bs0..bsW-1,profile,event with the profile joined by ';'.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace, int num_bss);
nlohmann::json run_summary(const RunResult& result);

}  // namespace dbsa
