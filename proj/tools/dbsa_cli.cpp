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

// dbsa: generate networks, run the association mechanism, drive seeded
// campaigns and replay them.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include "dbsa/campaign.hpp"
#include "dbsa/fixtures.hpp"
#include "dbsa/mechanism.hpp"
#include "dbsa/sat_reduction.hpp"
#include "dbsa/scenario.hpp"

namespace {

using dbsa::ScenarioConfig;

// Scenario flags; unset flags leave the config (file or mode defaults) alone.
struct ScenarioFlags {
  std::string config;
  std::optional<std::string> mode;
  std::optional<int> users, bss, channels;
  std::optional<double> d, ber, bandwidth, shadowing, budget_dbm, noise_psd, weight;
  std::optional<double> area, center, pl1, slope, floor_db, bs_distance, min_distance;
  std::optional<std::string> multipath;

  void attach(CLI::App* app) {
    app->add_option("--scenario", config, "Scenario JSON file")->check(CLI::ExistingFile);
    app->add_option("--mode", mode, "indoor | outdoor");
    app->add_option("--users", users, "Number of users");
    app->add_option("--bss", bss, "Number of base stations");
    app->add_option("--channels", channels, "Indoor: total channels; outdoor: subcarriers");
    app->add_option("--distribution-factor,-D", d, "Fraction of uniformly placed nodes");
    app->add_option("--ber", ber, "Target bit error rate");
    app->add_option("--bandwidth", bandwidth, "Total bandwidth in Hz");
    app->add_option("--shadowing-var", shadowing, "Shadowing variance in dB^2");
    app->add_option("--budget-dbm", budget_dbm, "Per-BS power budget in dBm");
    app->add_option("--noise-psd", noise_psd, "Noise PSD in dBm/Hz");
    app->add_option("--weight", weight, "Weight of every BS");
    app->add_option("--area", area, "Indoor area side in m");
    app->add_option("--center", center, "Indoor hotspot side in m");
    app->add_option("--pl1", pl1, "Indoor path loss at 1 m in dB");
    app->add_option("--pl-slope", slope, "Indoor path loss slope in dB");
    app->add_option("--pl-floor", floor_db, "Indoor floor penetration loss in dB");
    app->add_option("--bs-distance", bs_distance, "Outdoor inter-site distance in km");
    app->add_option("--min-distance", min_distance, "Outdoor minimum user distance in km");
    app->add_option("--multipath", multipath, "Outdoor power-delay profile (PedA, flat)");
  }

  ScenarioConfig resolve(std::uint64_t seed) const {
    ScenarioConfig cfg;
    if (!config.empty()) {
      cfg = dbsa::load_scenario(config);
    } else if (mode && dbsa::scenario_mode_from_string(*mode) == dbsa::ScenarioMode::kOutdoor) {
      cfg = ScenarioConfig::outdoor_defaults();
    } else {
      cfg = ScenarioConfig::indoor_defaults();
    }
    if (mode && dbsa::scenario_mode_from_string(*mode) != cfg.mode) {
      const auto m = dbsa::scenario_mode_from_string(*mode);
      if (m == dbsa::ScenarioMode::kOutdoor) cfg = ScenarioConfig::outdoor_defaults();
      cfg.mode = m;
    }
    auto set = [](auto& field, const auto& flag) {
      if (flag) field = *flag;
    };
    set(cfg.num_users, users);
    set(cfg.num_bss, bss);
    set(cfg.num_channels, channels);
    set(cfg.distribution_factor, d);
    set(cfg.ber, ber);
    set(cfg.total_bandwidth_hz, bandwidth);
    set(cfg.shadowing_var_db2, shadowing);
    set(cfg.budget_dbm, budget_dbm);
    set(cfg.noise_psd_dbm_hz, noise_psd);
    set(cfg.weight, weight);
    set(cfg.area_side_m, area);
    set(cfg.center_side_m, center);
    set(cfg.pl1_db, pl1);
    set(cfg.pl_slope_db, slope);
    set(cfg.pl_floor_db, floor_db);
    set(cfg.bs_distance_km, bs_distance);
    set(cfg.min_distance_km, min_distance);
    set(cfg.multipath_profile, multipath);
    cfg.seed = seed;
    cfg.validate();
    return cfg;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

// "add:T:COUNT", "remove:T:COUNT" or "regen:T".
struct EventSpec {
  std::string kind;
  int at = 0;
  int count = 0;
};

EventSpec parse_event(const std::string& s) {
  EventSpec e;
  const auto first = s.find(':');
  if (first == std::string::npos) throw std::invalid_argument("bad event spec: " + s);
  e.kind = s.substr(0, first);
  const auto second = s.find(':', first + 1);
  e.at = std::stoi(s.substr(first + 1, second - first - 1));
  if (second != std::string::npos) e.count = std::stoi(s.substr(second + 1));
  if (e.kind != "add" && e.kind != "remove" && e.kind != "regen") {
    throw std::invalid_argument("unknown event kind: " + e.kind);
  }
  if (e.kind != "regen" && e.count < 1) throw std::invalid_argument("event needs a count: " + s);
  if (e.at < 0) throw std::invalid_argument("event time must be non-negative: " + s);
  return e;
}

int cmd_generate(const ScenarioFlags& flags, std::uint64_t seed, const std::string& cnf,
                 const std::string& out) {
  if (!cnf.empty()) {
    const auto red = dbsa::reduce_3sat(dbsa::load_dimacs(cnf));
    nlohmann::json j = red.net;
    write_text(out, j.dump(2) + "\n");
    fmt::print(std::cerr, "threshold {:.17g}\n", red.threshold);
    return 0;
  }
  nlohmann::json j = dbsa::generate(flags.resolve(seed));
  write_text(out, j.dump(2) + "\n");
  return 0;
}

struct RunFlags {
  std::string network;
  int memory = 0;
  double cost = 0.0;
  std::string strategy = "ca";
  bool taxless = false;
  int max_iter = 500;
  std::optional<double> cer;
  std::vector<std::string> events;
  std::string trace;
  std::string summary;
};

int cmd_run(const ScenarioFlags& flags, const RunFlags& rf, std::uint64_t seed) {
  const ScenarioConfig cfg = flags.resolve(seed);
  dbsa::NetworkInstance net =
      rf.network.empty() ? dbsa::generate(cfg) : dbsa::load_network(rf.network);

  dbsa::MechanismConfig mc;
  mc.memory = rf.memory > 0 ? rf.memory : net.num_users;
  mc.cost = rf.cost;
  mc.mode = dbsa::GameMode{dbsa::strategy_from_string(rf.strategy), !rf.taxless,
                           dbsa::Objective::kThroughput};
  mc.max_iter = rf.max_iter;
  mc.seed = seed;
  if (rf.cer) {
    dbsa::Rng rng(seed ^ 0x9E3779B97F4A7C15ull);
    mc.reports = dbsa::inject_estimation_error(net, *rf.cer, rng);
  }
  if (mc.max_iter < mc.memory + 1) throw std::invalid_argument("--max-iter must exceed --memory");

  std::vector<EventSpec> events;
  for (const auto& s : rf.events) events.push_back(parse_event(s));
  std::stable_sort(events.begin(), events.end(),
                   [](const EventSpec& a, const EventSpec& b) { return a.at < b.at; });

  dbsa::MechanismState state = dbsa::init_state(net, mc);
  for (const auto& e : events) {
    while (state.t < e.at) dbsa::step(net, state, mc.mode);
    dbsa::MechanismEvent ev;
    dbsa::Rng rng(seed + static_cast<std::uint64_t>(e.at) * 7919u);
    if (e.kind == "add") {
      ev.kind = dbsa::MechanismEvent::Kind::kAddUsers;
      ev.arrivals = dbsa::draw_users(net, cfg, e.count, rng);
    } else if (e.kind == "remove") {
      ev.kind = dbsa::MechanismEvent::Kind::kRemoveUsers;
      std::vector<int> ids(net.num_users);
      for (int i = 0; i < net.num_users; ++i) ids[i] = i;
      std::shuffle(ids.begin(), ids.end(), rng);
      ids.resize(std::min<std::size_t>(ids.size(), e.count));
      ev.departures = ids;
    } else {
      ev.kind = dbsa::MechanismEvent::Kind::kRegenerateChannels;
      ev.scenario = cfg;
      ev.seed = rng();
    }
    dbsa::apply_event(net, state, ev, mc.mode, rf.cost);
  }
  const int horizon = std::max(mc.max_iter, state.t + mc.memory + 1);
  dbsa::RunResult result;
  result.converged = dbsa::advance(net, state, mc.mode, horizon);
  result.iterations = state.t;
  result.profile = state.profile;
  dbsa::CellOracle oracle(net, state.reports ? *state.reports : dbsa::ReportProfile::truthful(net),
                          mc.mode);
  result.ne_verified = dbsa::is_ne(oracle, result.profile);
  result.trace = state.trace;

  if (!rf.trace.empty()) {
    std::ofstream out(rf.trace, std::ios::binary);
    dbsa::write_trace_csv(out, result.trace, net.num_bss);
    if (!out) throw std::runtime_error("cannot write " + rf.trace);
  }
  write_text(rf.summary, dbsa::run_summary(result).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed base-station association toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dbsa::kVersion);

  ScenarioFlags gen_flags;
  std::uint64_t gen_seed = 0;
  std::string cnf;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Draw a network instance (JSON)");
  gen_flags.attach(gen);
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--from-cnf", cnf, "Build the reduction network of a 3-CNF DIMACS file")
      ->check(CLI::ExistingFile);
  gen->add_option("--out,-o", gen_out, "Output file (stdout by default)");

  ScenarioFlags run_flags;
  RunFlags rf;
  std::uint64_t run_seed = 0;
  auto* run = app.add_subcommand("run", "Run the association mechanism on one network");
  run_flags.attach(run);
  run->add_option("--seed", run_seed, "Random seed")->required();
  run->add_option("--network", rf.network, "Network JSON instead of a generated one")
      ->check(CLI::ExistingFile);
  run->add_option("--memory,-M", rf.memory, "Memory length (default: number of users)");
  run->add_option("--cost", rf.cost, "Switching cost for every user");
  run->add_option("--strategy", rf.strategy, "ca | capa | ca-pf");
  run->add_flag("--taxless", rf.taxless, "Users compare raw rates instead of taxed utilities");
  run->add_option("--max-iter", rf.max_iter, "Iteration cap");
  run->add_option("--cer", rf.cer, "Channel error ratio in dB for the reports");
  run->add_option("--event", rf.events, "add:T:COUNT, remove:T:COUNT or regen:T");
  run->add_option("--trace", rf.trace, "Trace CSV output");
  run->add_option("--summary", rf.summary, "Summary JSON output (stdout by default)");

  std::string campaign_config;
  std::uint64_t campaign_seed = 0;
  std::string campaign_out = "out";
  int threads = 0;
  auto* campaign = app.add_subcommand("campaign", "Run a seeded Monte Carlo campaign");
  campaign->add_option("--config", campaign_config, "Campaign JSON")
      ->required()
      ->check(CLI::ExistingFile);
  campaign->add_option("--seed", campaign_seed, "Base seed")->required();
  campaign->add_option("--out,-o", campaign_out, "Output directory");
  campaign->add_option("--threads", threads, "Worker threads (0: all cores)");

  std::string manifest;
  std::string replay_out = "replay";
  auto* replay = app.add_subcommand("replay", "Re-run a campaign from its manifest");
  replay->add_option("--manifest", manifest, "manifest.json of an earlier campaign")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--out,-o", replay_out, "Output directory");
  replay->add_option("--threads", threads, "Worker threads (0: all cores)");

  auto* verify = app.add_subcommand("verify", "Check the built-in worked examples");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(gen_flags, gen_seed, cnf, gen_out);
    if (run->parsed()) return cmd_run(run_flags, rf, run_seed);
    if (campaign->parsed()) {
      const auto r = dbsa::run_campaign_file(campaign_config, campaign_seed, campaign_out, threads);
      fmt::print("{} rows written to {}\n", r.rows.size(), campaign_out);
      return 0;
    }
    if (replay->parsed()) {
      const auto r = dbsa::replay(manifest, replay_out, threads);
      fmt::print("replay reproduced {} rows in {}\n", r.rows.size(), replay_out);
      return 0;
    }
    if (verify->parsed()) {
      const auto report = dbsa::verify_worked_examples();
      dbsa::print_report(std::cout, report);
      return report.all_passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
