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

#include "dbsa/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <thread>

#include <fmt/core.h>
#include <openssl/evp.h>

#include "dbsa/baselines.hpp"
#include "dbsa/game.hpp"
#include "dbsa/mechanism.hpp"

namespace dbsa {

namespace fs = std::filesystem;

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kDbsa: return "dbsa";
    case Algorithm::kNearest: return "nearest";
    case Algorithm::kGreedy0: return "greedy0";
    case Algorithm::kExhaustive: return "exhaustive";
    case Algorithm::kBound: return "bound";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& s) {
  for (Algorithm a : {Algorithm::kDbsa, Algorithm::kNearest, Algorithm::kGreedy0,
                      Algorithm::kExhaustive, Algorithm::kBound}) {
    if (s == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm: " + s);
}

void Campaign::validate() const {
  if (trials < 1) throw std::invalid_argument("campaign needs at least one trial");
  if (algorithms.empty()) throw std::invalid_argument("campaign needs an algorithm");
  if (max_iter < 2) throw std::invalid_argument("max_iter must be at least 2");
  for (int m : m_values) {
    if (m < 0) throw std::invalid_argument("memory length must be non-negative (0: N)");
  }
  for (double c : cost_values) {
    if (!(c >= 0.0)) throw std::invalid_argument("switching costs must be non-negative");
  }
  scenario.validate();
}

namespace {

nlohmann::json cer_to_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return "inf";
  return *v;
}

std::optional<double> cer_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("CER must be a number, \"inf\" or null");
  }
  return j.get<double>();
}

std::string cer_label(const std::optional<double>& v) {
  return v ? fmt::format("{:.17g}", *v) : std::string("none");
}

}  // namespace

void to_json(nlohmann::json& j, const Campaign& c) {
  nlohmann::json algos = nlohmann::json::array();
  for (Algorithm a : c.algorithms) algos.push_back(to_string(a));
  nlohmann::json cer = nlohmann::json::array();
  for (const auto& v : c.cer_values) cer.push_back(cer_to_json(v));
  j = nlohmann::json{{"scenario", c.scenario},
                     {"algorithms", algos},
                     {"strategy", to_string(c.strategy)},
                     {"taxed", c.taxed},
                     {"sweep",
                      {{"D", c.d_values},
                       {"N", c.n_values},
                       {"W", c.w_values},
                       {"M", c.m_values},
                       {"cost", c.cost_values},
                       {"cer_db", cer}}},
                     {"trials", c.trials},
                     {"max_iter", c.max_iter}};
}

void from_json(const nlohmann::json& j, Campaign& c) {
  c = Campaign{};
  if (j.contains("scenario")) j.at("scenario").get_to(c.scenario);
  if (j.contains("algorithms")) {
    c.algorithms.clear();
    for (const auto& a : j.at("algorithms")) c.algorithms.push_back(algorithm_from_string(a));
  }
  if (j.contains("strategy")) c.strategy = strategy_from_string(j.at("strategy"));
  if (j.contains("taxed")) c.taxed = j.at("taxed").get<bool>();
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    auto take = [&s](const char* key, auto& field) {
      if (s.contains(key)) s.at(key).get_to(field);
    };
    take("D", c.d_values);
    take("N", c.n_values);
    take("W", c.w_values);
    take("M", c.m_values);
    take("cost", c.cost_values);
    if (s.contains("cer_db")) {
      for (const auto& v : s.at("cer_db")) c.cer_values.push_back(cer_from_json(v));
    }
  }
  if (j.contains("trials")) c.trials = j.at("trials").get<int>();
  if (j.contains("max_iter")) c.max_iter = j.at("max_iter").get<int>();
  c.validate();
}

std::vector<SweepPoint> sweep_points(const Campaign& c) {
  auto or_default = [](auto values, auto fallback) {
    if (values.empty()) values.push_back(fallback);
    return values;
  };
  const auto ds = or_default(c.d_values, c.scenario.distribution_factor);
  const auto ns = or_default(c.n_values, c.scenario.num_users);
  const auto ws = or_default(c.w_values, c.scenario.num_bss);
  const auto ms = or_default(c.m_values, 0);
  const auto costs = or_default(c.cost_values, 0.0);
  const auto cers = or_default(c.cer_values, std::optional<double>{});
  std::vector<SweepPoint> out;
  for (double d : ds) {
    for (int n : ns) {
      for (int w : ws) {
        for (int m : ms) {
          for (double cost : costs) {
            for (const auto& cer : cers) out.push_back({d, n, w, m > 0 ? m : n, cost, cer});
          }
        }
      }
    }
  }
  return out;
}

namespace {

std::vector<double> user_rates_at(const NetworkInstance& net, const ReportProfile& reports,
                                  GameMode mode, const AssociationProfile& a) {
  CellOracle oracle(net, reports, mode);
  std::vector<double> rates(net.num_users, 0.0);
  for (int w = 0; w < net.num_bss; ++w) {
    const auto& cell = oracle.cell(w, users_of(a, w));
    for (std::size_t n = 0; n < cell.users.size(); ++n) rates[cell.users[n]] = cell.realized[n];
  }
  return rates;
}

TrialOutcome baseline_outcome(const NetworkInstance& net, const BaselineResult& b,
                              Strategy strategy) {
  TrialOutcome o;
  o.ok = true;
  o.throughput = b.throughput;
  o.converged = true;
  const ReportProfile truth = ReportProfile::truthful(net);
  if (b.profile) {
    for (int w = 0; w < net.num_bss; ++w) {
      o.bs_throughput.push_back(bs_throughput(net, w, *b.profile, truth, strategy));
    }
    o.user_rates = user_rates_at(net, truth, GameMode{strategy, true, Objective::kThroughput},
                                 *b.profile);
  }
  return o;
}

// All algorithms of one trial share one generated instance.
std::vector<TrialOutcome> run_trial(const Campaign& c, const SweepPoint& p, int trial) {
  const std::uint64_t seed = c.base_seed + static_cast<std::uint64_t>(trial);
  std::vector<TrialOutcome> out(c.algorithms.size());
  NetworkInstance net;
  ReportProfile reports;
  try {
    ScenarioConfig cfg = c.scenario;
    cfg.distribution_factor = p.d;
    cfg.num_users = p.n;
    cfg.num_bss = p.w;
    cfg.seed = seed;
    cfg.validate();
    net = generate(cfg);
    if (p.cer_db) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        0xCE5u};
      Rng rng(seq);
      reports = inject_estimation_error(net, *p.cer_db, rng);
    } else {
      reports = ReportProfile::truthful(net);
    }
  } catch (const std::exception& e) {
    for (auto& o : out) o.error = fmt::format("instance: {}", e.what());
    return out;
  }

  const GameMode mode{c.strategy, c.taxed, Objective::kThroughput};
  for (std::size_t a = 0; a < c.algorithms.size(); ++a) {
    TrialOutcome& o = out[a];
    try {
      switch (c.algorithms[a]) {
        case Algorithm::kDbsa: {
          MechanismConfig mc;
          mc.memory = p.m;
          mc.cost = p.cost;
          mc.mode = mode;
          mc.max_iter = std::max(c.max_iter, p.m + 1);
          mc.seed = seed;
          if (p.cer_db && !net.shared_spectrum()) mc.reports = reports;
          const RunResult r = run(net, mc);
          o.ok = true;
          o.throughput = r.trace.back().throughput;
          o.iterations = r.iterations;
          o.converged = r.converged;
          o.ne_verified = r.ne_verified;
          o.bs_throughput = r.trace.back().bs_throughput;
          if (!net.shared_spectrum()) o.user_rates = user_rates_at(net, reports, mode, r.profile);
          break;
        }
        case Algorithm::kNearest:
          o = baseline_outcome(net, nearest_bs(net, c.strategy), c.strategy);
          break;
        case Algorithm::kGreedy0:
          o = baseline_outcome(net, greedy0(net, c.strategy), c.strategy);
          break;
        case Algorithm::kExhaustive:
          o = baseline_outcome(net, exhaustive_opt(net, c.strategy), c.strategy);
          break;
        case Algorithm::kBound:
          o = baseline_outcome(net, multi_connect_bound(net, c.strategy), c.strategy);
          break;
      }
    } catch (const std::exception& e) {
      o = TrialOutcome{};
      o.error = e.what();
    }
  }
  return out;
}

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

CampaignResult run_campaign(const Campaign& c, int threads) {
  c.validate();
  CampaignResult res;
  res.points = sweep_points(c);
  const int n_points = static_cast<int>(res.points.size());
  const int n_tasks = n_points * c.trials;
  std::vector<std::vector<TrialOutcome>> by_task(n_tasks);

  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(1, n_tasks));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int task = next++; task < n_tasks; task = next++) {
      by_task[task] = run_trial(c, res.points[task / c.trials], task % c.trials);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  const std::size_t n_algos = c.algorithms.size();
  res.outcomes.assign(n_points, std::vector<std::vector<TrialOutcome>>(n_algos));
  for (int task = 0; task < n_tasks; ++task) {
    for (std::size_t a = 0; a < n_algos; ++a) {
      res.outcomes[task / c.trials][a].push_back(std::move(by_task[task][a]));
    }
  }

  const auto exhaustive_at = std::find(c.algorithms.begin(), c.algorithms.end(),
                                       Algorithm::kExhaustive);
  for (int p = 0; p < n_points; ++p) {
    for (std::size_t a = 0; a < n_algos; ++a) {
      MetricsRow row;
      row.point = res.points[p];
      row.algorithm = c.algorithms[a];
      std::vector<double> thr;
      std::vector<double> its;
      std::vector<double> eff;
      int converged = 0;
      int ne = 0;
      for (int t = 0; t < c.trials; ++t) {
        const TrialOutcome& o = res.outcomes[p][a][t];
        if (!o.ok) {
          ++row.errors;
          continue;
        }
        thr.push_back(o.throughput);
        its.push_back(o.iterations);
        converged += o.converged ? 1 : 0;
        ne += o.ne_verified ? 1 : 0;
        if (exhaustive_at != c.algorithms.end()) {
          const TrialOutcome& opt = res.outcomes[p][exhaustive_at - c.algorithms.begin()][t];
          if (opt.ok && opt.throughput > 0.0) eff.push_back(o.throughput / opt.throughput);
        }
      }
      row.samples = static_cast<int>(thr.size());
      mean_std(thr, row.throughput_mean, row.throughput_std);
      mean_std(its, row.iterations_mean, row.iterations_std);
      if (row.samples > 0) {
        row.converged_fraction = static_cast<double>(converged) / row.samples;
        row.ne_fraction = static_cast<double>(ne) / row.samples;
      }
      if (!eff.empty()) {
        double m = 0.0;
        double sd = 0.0;
        mean_std(eff, m, sd);
        row.efficiency_mean = m;
        row.efficiency_min = *std::min_element(eff.begin(), eff.end());
      }
      res.rows.push_back(row);
    }
  }
  return res;
}

namespace {

std::string g17(double v) { return fmt::format("{:.17g}", v); }

std::string opt_g17(const std::optional<double>& v) { return v ? g17(*v) : std::string(); }

std::string axes(const SweepPoint& p) {
  return fmt::format("{},{},{},{},{},{}", g17(p.d), p.n, p.w, p.m, g17(p.cost),
                     cer_label(p.cer_db));
}

constexpr const char* kAxesHeader = "D,N,W,M,cost,cer_db";

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return sha256_hex(std::string(std::istreambuf_iterator<char>(in), {}));
}

std::vector<std::pair<std::string, std::string>> write_outputs(const CampaignResult& r,
                                                                const std::string& dir) {
  fs::create_directories(dir);
  std::vector<std::pair<std::string, std::string>> files;

  std::string summary = fmt::format(
      "{},algorithm,samples,throughput_mean,throughput_std,iterations_mean,iterations_std,"
      "converged_fraction,ne_fraction,efficiency_mean,efficiency_min,errors\n",
      kAxesHeader);
  for (const auto& row : r.rows) {
    summary += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", axes(row.point),
                           to_string(row.algorithm), row.samples, g17(row.throughput_mean),
                           g17(row.throughput_std), g17(row.iterations_mean),
                           g17(row.iterations_std), g17(row.converged_fraction),
                           g17(row.ne_fraction), opt_g17(row.efficiency_mean),
                           opt_g17(row.efficiency_min), row.errors);
  }
  files.emplace_back("summary.csv", summary);

  std::string samples = fmt::format(
      "point,{},algorithm,trial,throughput,iterations,converged,ne_verified\n", kAxesHeader);
  std::string bs = "point,algorithm,trial,bs,throughput\n";
  std::string users = "point,algorithm,trial,user,rate\n";
  std::string errors = "point,algorithm,trial,message\n";
  const std::size_t n_algos = r.outcomes.empty() ? 0 : r.outcomes[0].size();
  for (std::size_t p = 0; p < r.points.size(); ++p) {
    for (std::size_t a = 0; a < n_algos; ++a) {
      const auto algo = to_string(r.rows[p * n_algos + a].algorithm);
      for (std::size_t t = 0; t < r.outcomes[p][a].size(); ++t) {
        const TrialOutcome& o = r.outcomes[p][a][t];
        if (!o.ok) {
          std::string msg = o.error;
          std::replace(msg.begin(), msg.end(), ',', ';');
          std::replace(msg.begin(), msg.end(), '\n', ' ');
          errors += fmt::format("{},{},{},{}\n", p, algo, t, msg);
          continue;
        }
        samples += fmt::format("{},{},{},{},{},{},{},{}\n", p, axes(r.points[p]), algo, t,
                               g17(o.throughput), o.iterations, o.converged ? 1 : 0,
                               o.ne_verified ? 1 : 0);
        for (std::size_t w = 0; w < o.bs_throughput.size(); ++w) {
          bs += fmt::format("{},{},{},{},{}\n", p, algo, t, w, g17(o.bs_throughput[w]));
        }
        for (std::size_t i = 0; i < o.user_rates.size(); ++i) {
          users += fmt::format("{},{},{},{},{}\n", p, algo, t, i, g17(o.user_rates[i]));
        }
      }
    }
  }
  files.emplace_back("throughput_samples.csv", samples);
  files.emplace_back("bs_rates.csv", bs);
  files.emplace_back("user_rates.csv", users);
  files.emplace_back("errors.csv", errors);

  std::vector<std::pair<std::string, std::string>> hashes;
  for (const auto& [name, body] : files) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    out << body;
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    hashes.emplace_back(name, sha256_hex(body));
  }
  return hashes;
}

namespace {

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Campaign parse_campaign(const std::string& text, std::uint64_t base_seed) {
  Campaign c = nlohmann::json::parse(text).get<Campaign>();
  c.base_seed = base_seed;
  return c;
}

}  // namespace

CampaignResult run_campaign_file(const std::string& config_path, std::uint64_t base_seed,
                                 const std::string& out_dir, int threads) {
  const std::string text = read_all(config_path);
  const Campaign c = parse_campaign(text, base_seed);
  CampaignResult r = run_campaign(c, threads);
  const auto hashes = write_outputs(r, out_dir);

  nlohmann::json seeds = nlohmann::json::array();
  for (int t = 0; t < c.trials; ++t) seeds.push_back(base_seed + static_cast<std::uint64_t>(t));
  nlohmann::json files = nlohmann::json::object();
  for (const auto& [name, hash] : hashes) files[name] = hash;
  const nlohmann::json manifest = {
      {"version", kVersion},
      {"config_path", fs::absolute(config_path).lexically_normal().string()},
      {"config_sha256", sha256_hex(text)},
      {"base_seed", base_seed},
      {"seeds", seeds},
      {"files", files},
  };
  std::ofstream out(fs::path(out_dir) / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write manifest.json");
  return r;
}

CampaignResult replay(const std::string& manifest_path, const std::string& out_dir,
                      int threads) {
  const nlohmann::json m = nlohmann::json::parse(read_all(manifest_path));
  const std::string config_path = m.at("config_path").get<std::string>();
  const std::string recorded = m.at("config_sha256").get<std::string>();
  const std::string actual = sha256_file(config_path);
  if (actual != recorded) {
    throw ManifestMismatch(fmt::format("config {} hashes to {} but the manifest records {}",
                                       config_path, actual, recorded));
  }
  const auto base_seed = m.at("base_seed").get<std::uint64_t>();
  CampaignResult r = run_campaign_file(config_path, base_seed, out_dir, threads);
  for (const auto& [name, hash] : m.at("files").items()) {
    const std::string got = sha256_file((fs::path(out_dir) / name).string());
    if (got != hash.get<std::string>()) {
      throw ManifestMismatch(fmt::format("replayed {} differs from the recorded output", name));
    }
  }
  return r;
}

}  // namespace dbsa
