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

#include <iosfwd>
#include <string>
#include <vector>

#include "dbsa/allocation.hpp"
#include "dbsa/game.hpp"
#include "dbsa/network.hpp"

namespace dbsa {

// Hand-sized regression networks. All use unit noise, unit bandwidth,
// unit weights and a capacity gap of 1.

// One BS, two users, three channels, budget 3. Gains (2, 2, 1) and
// (0.5, 0.5, 2).
NetworkInstance two_user_single_bs_fixture();
// The inflated report user 1 (0-based) sends in the manipulation scenario.
std::vector<double> two_user_inflated_report();

// Two BSs with two channels each (BS 0 owns channels 0-1), three users.
// The CA instance has budget 2 per BS, the CAPA instance budget 5.
NetworkInstance three_user_two_bs_ca_fixture();
NetworkInstance three_user_two_bs_capa_fixture();

// A row of the published better-reply table: in `profile` (0-based BSs),
// user `user` has better-reply set `better`.
struct BetterReplyEntry {
  AssociationProfile profile;
  int user = 0;
  std::vector<int> better;
};
std::vector<BetterReplyEntry> listed_better_replies(Strategy strategy);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;
  bool all_passed() const;
};

// Re-derives the published numbers of the fixtures above.
VerificationReport verify_worked_examples();
void print_report(std::ostream& out, const VerificationReport& report);

}  // namespace dbsa
