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
#include <optional>
#include <span>

#include "dbsa/allocation.hpp"
#include "dbsa/game.hpp"
#include "dbsa/network.hpp"

namespace dbsa {

struct BaselineResult {
  std::optional<AssociationProfile> profile;  // absent for bounds
  double throughput = 0.0;
  std::int64_t evaluations = 0;  // profiles or moves evaluated
};

BaselineResult nearest_bs(const NetworkInstance& net, Strategy strategy);

// Per-user candidate BSs: those with a positive gain on some channel, or
// every BS when the user has no positive gain anywhere.
std::vector<std::vector<int>> pruned_candidates(const NetworkInstance& net);

inline constexpr double kExhaustiveLimit = 1e7;

// Global optimum of the system throughput over the pruned profiles; the
// lexicographically first optimum wins ties. Throws SearchSpaceTooLarge when
// the pruned space exceeds kExhaustiveLimit.
BaselineResult exhaustive_opt(const NetworkInstance& net, Strategy strategy);

// Steepest single-user-move ascent on the system throughput from `start`
// (nearest-BS profile when empty) until no move improves it by more than 1e-12.
BaselineResult greedy0(const NetworkInstance& net, Strategy strategy,
                       std::span<const int> start = {});

// Every BS serves every user at once.
BaselineResult multi_connect_bound(const NetworkInstance& net, Strategy strategy);

}  // namespace dbsa
