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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dbsa/allocation.hpp"
#include "dbsa/scenario.hpp"

namespace dbsa {

inline constexpr const char* kVersion = "0.1.0";

enum class Algorithm { kDbsa, kNearest, kGreedy0, kExhaustive, kBound };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

// Empty axes fall back to the scenario's value (M: the number of users,
// cost: 0, CER: no estimation error). An M entry of 0 also means "N".
struct Campaign {
  ScenarioConfig scenario;
  std::vector<Algorithm> algorithms{Algorithm::kDbsa};
  Strategy strategy = Strategy::kCA;
  bool taxed = true;
  std::vector<double> d_values;
  std::vector<int> n_values;
  std::vector<int> w_values;
  std::vector<int> m_values;
  std::vector<double> cost_values;
  std::vector<std::optional<double>> cer_values;  // nullopt: exact reports
  int trials = 1;
  int max_iter = 500;
  std::uint64_t base_seed = 0;

  void validate() const;
};

void to_json(nlohmann::json& j, const Campaign& c);
// base_seed is not part of the file; it comes from the command line.
void from_json(const nlohmann::json& j, Campaign& c);

struct SweepPoint {
  double d = 0.0;
  int n = 0;
  int w = 0;
  int m = 0;
  double cost = 0.0;
  std::optional<double> cer_db;
};

std::vector<SweepPoint> sweep_points(const Campaign& c);

// One algorithm on one trial of one sweep point.
struct TrialOutcome {
  bool ok = false;
  std::string error;
  double throughput = 0.0;
  int iterations = 0;  // DBSA only
  bool converged = false;
  bool ne_verified = false;
  std::vector<double> bs_throughput;
  std::vector<double> user_rates;
};

struct MetricsRow {
  SweepPoint point;
  Algorithm algorithm = Algorithm::kDbsa;
  int samples = 0;  // successful trials
  double throughput_mean = 0.0;
  double throughput_std = 0.0;
  double iterations_mean = 0.0;
  double iterations_std = 0.0;
  double converged_fraction = 0.0;
  double ne_fraction = 0.0;
  std::optional<double> efficiency_mean;  // against the exhaustive optimum
  std::optional<double> efficiency_min;
  int errors = 0;
};

struct CampaignResult {
  std::vector<SweepPoint> points;
  // outcomes[point][algorithm][trial]
  std::vector<std::vector<std::vector<TrialOutcome>>> outcomes;
  std::vector<MetricsRow> rows;
};

// Trials run on `threads` workers (0: hardware concurrency); results are
// merged in trial order, so the output never depends on the thread count.
CampaignResult run_campaign(const Campaign& c, int threads = 0);

// Writes summary.csv, throughput_samples.csv, bs_rates.csv, user_rates.csv
// and errors.csv into `dir` and returns {file name -> SHA-256}.
std::vector<std::pair<std::string, std::string>> write_outputs(const CampaignResult& r,
                                                                const std::string& dir);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// Runs the campaign described by `config_path` and writes the outputs plus
// manifest.json into `out_dir`.
CampaignResult run_campaign_file(const std::string& config_path, std::uint64_t base_seed,
                                 const std::string& out_dir, int threads = 0);

class ManifestMismatch : public std::runtime_error {
 public:
  explicit ManifestMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Re-runs a campaign from its manifest into `out_dir`. Throws
// ManifestMismatch when the referenced config no longer hashes to the
// recorded value or a regenerated file differs from the recorded hash.
CampaignResult replay(const std::string& manifest_path, const std::string& out_dir,
                      int threads = 0);

}  // namespace dbsa
