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

#include "dbsa/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dbsa {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kCA: return "ca";
    case Strategy::kCAPA: return "capa";
    case Strategy::kCAPF: return "ca-pf";
  }
  return "unknown";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "ca" || s == "CA") return Strategy::kCA;
  if (s == "capa" || s == "CAPA") return Strategy::kCAPA;
  if (s == "ca-pf" || s == "CA-PF" || s == "capf") return Strategy::kCAPF;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

WaterFill water_fill(std::span<const double> inv_gains, double budget) {
  if (!(budget > 0.0)) throw std::invalid_argument("water-filling budget must be > 0");
  std::vector<int> order;
  for (int k = 0; k < static_cast<int>(inv_gains.size()); ++k) {
    if (std::isfinite(inv_gains[k])) order.push_back(k);
  }
  if (order.empty()) throw NoUsableChannel();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return inv_gains[a] < inv_gains[b]; });

  // Grow the active set while the candidate level still covers the next
  // cheapest channel.
  double prefix = 0.0;
  double level = 0.0;
  int active = 0;
  const int usable = static_cast<int>(order.size());
  while (active < usable) {
    prefix += inv_gains[order[active]];
    ++active;
    level = (budget + prefix) / active;
    if (active == usable || level <= inv_gains[order[active]]) break;
  }

  WaterFill out;
  out.power.assign(inv_gains.size(), 0.0);
  out.level = level;
  out.active = active;
  for (int n = 0; n < active; ++n) {
    out.power[order[n]] = std::max(0.0, level - inv_gains[order[n]]);
  }
  return out;
}

namespace {

// Best reporter per channel of the BS, lowest user index on ties.
std::vector<int> best_users(const NetworkInstance& net, int bs, std::span<const int> users,
                            const ReportProfile& reports) {
  const auto& ks = net.channels_of_bs[bs];
  std::vector<int> beta(ks.size(), -1);
  for (std::size_t c = 0; c < ks.size(); ++c) {
    double best = -1.0;
    for (int i : users) {
      const double g = reports.normalized[i][ks[c]];
      if (g > best || (g == best && i < beta[c])) {
        best = g;
        beta[c] = i;
      }
    }
  }
  return beta;
}

Allocation empty_allocation(const NetworkInstance& net, int bs) {
  Allocation a;
  a.bs = bs;
  a.beta.assign(net.channels_of_bs[bs].size(), -1);
  a.power.assign(net.channels_of_bs[bs].size(), 0.0);
  return a;
}

double channel_rate(double bandwidth, double normalized, double power, double tau) {
  return bandwidth * std::log1p(normalized * power / tau);
}

}  // namespace

Allocation solve_ca(const NetworkInstance& net, int bs, std::span<const int> users,
                    const ReportProfile& reports) {
  Allocation a = empty_allocation(net, bs);
  if (users.empty()) return a;
  a.beta = best_users(net, bs, users, reports);
  const double p = net.budget[bs] / static_cast<double>(a.beta.size());
  std::fill(a.power.begin(), a.power.end(), p);
  return a;
}

Allocation solve_capa(const NetworkInstance& net, int bs, std::span<const int> users,
                      const ReportProfile& reports) {
  Allocation a = empty_allocation(net, bs);
  if (users.empty()) return a;
  a.beta = best_users(net, bs, users, reports);
  const auto& ks = net.channels_of_bs[bs];
  std::vector<double> inv(ks.size());
  for (std::size_t c = 0; c < ks.size(); ++c) {
    const double g = reports.normalized[a.beta[c]][ks[c]];
    inv[c] = g > 0.0 ? net.capacity_gap / g : std::numeric_limits<double>::infinity();
  }
  try {
    const WaterFill wf = water_fill(inv, net.budget[bs]);
    a.power = wf.power;
    a.water_level = wf.level;
  } catch (const NoUsableChannel&) {
    // Nothing to serve: every reported gain in the cell is zero.
  }
  return a;
}

namespace {

struct PfProblem {
  std::vector<int> served;                // global user ids
  std::vector<std::vector<double>> gain;  // [served idx][channel pos] rate contribution
  int channels = 0;

  double objective(const std::vector<int>& owner) const {
    std::vector<double> r(served.size(), 0.0);
    for (int c = 0; c < channels; ++c) r[owner[c]] += gain[owner[c]][c];
    double total = 0.0;
    for (double v : r) total += pf_log_term(v);
    return total;
  }
};

std::vector<int> pf_exhaustive(const PfProblem& pb) {
  const int n = static_cast<int>(pb.served.size());
  std::vector<int> owner(pb.channels, 0);
  std::vector<int> best = owner;
  double best_value = -std::numeric_limits<double>::infinity();
  for (;;) {
    const double v = pb.objective(owner);
    if (v > best_value) {
      best_value = v;
      best = owner;
    }
    int pos = pb.channels - 1;
    while (pos >= 0 && ++owner[pos] == n) owner[pos--] = 0;
    if (pos < 0) break;
  }
  return best;
}

std::vector<int> pf_local_search(const PfProblem& pb) {
  const int n = static_cast<int>(pb.served.size());
  std::vector<int> owner(pb.channels, -1);
  std::vector<double> rate(n, 0.0);
  std::vector<int> count(n, 0);

  // Seeding: one round-robin pass, each user takes its best free channel.
  for (int u = 0; u < n && u < pb.channels; ++u) {
    int pick = -1;
    for (int c = 0; c < pb.channels; ++c) {
      if (owner[c] == -1 && (pick == -1 || pb.gain[u][c] > pb.gain[u][pick])) pick = c;
    }
    owner[pick] = u;
  }
  for (int c = 0; c < pb.channels; ++c) {
    if (owner[c] != -1) continue;
    int best = 0;
    for (int u = 1; u < n; ++u) {
      if (pb.gain[u][c] > pb.gain[best][c]) best = u;
    }
    owner[c] = best;
  }
  for (int c = 0; c < pb.channels; ++c) {
    rate[owner[c]] += pb.gain[owner[c]][c];
    ++count[owner[c]];
  }

  for (bool improved = true; improved;) {
    improved = false;
    for (int c = 0; c < pb.channels; ++c) {
      const int u = owner[c];
      if (count[u] == 1) continue;
      const double loss = pf_log_term(rate[u] - pb.gain[u][c]) - pf_log_term(rate[u]);
      int best_v = -1;
      double best_delta = 1e-12;
      for (int v = 0; v < n; ++v) {
        if (v == u) continue;
        const double delta = loss + pf_log_term(rate[v] + pb.gain[v][c]) - pf_log_term(rate[v]);
        if (delta > best_delta) {
          best_delta = delta;
          best_v = v;
        }
      }
      if (best_v < 0) continue;
      rate[u] -= pb.gain[u][c];
      rate[best_v] += pb.gain[best_v][c];
      --count[u];
      ++count[best_v];
      owner[c] = best_v;
      improved = true;
    }
    if (improved) continue;
    // Exchanging two channels between their owners keeps every user served
    // and escapes many single-move optima.
    for (int c1 = 0; c1 < pb.channels && !improved; ++c1) {
      for (int c2 = c1 + 1; c2 < pb.channels; ++c2) {
        const int u = owner[c1];
        const int v = owner[c2];
        if (u == v) continue;
        const double ru = rate[u] - pb.gain[u][c1] + pb.gain[u][c2];
        const double rv = rate[v] - pb.gain[v][c2] + pb.gain[v][c1];
        const double delta = pf_log_term(ru) + pf_log_term(rv) - pf_log_term(rate[u]) -
                             pf_log_term(rate[v]);
        if (delta <= 1e-12) continue;
        rate[u] = ru;
        rate[v] = rv;
        std::swap(owner[c1], owner[c2]);
        improved = true;
        break;
      }
    }
  }
  return owner;
}

}  // namespace

Allocation solve_ca_pf(const NetworkInstance& net, int bs, std::span<const int> users,
                       const ReportProfile& reports, PfSearch search) {
  Allocation a = empty_allocation(net, bs);
  if (users.empty()) return a;
  const auto& ks = net.channels_of_bs[bs];
  const int channels = static_cast<int>(ks.size());
  const double p = net.budget[bs] / channels;
  std::fill(a.power.begin(), a.power.end(), p);

  // Users with no positive reported gain can never reach a positive rate.
  std::vector<std::pair<double, int>> candidates;
  for (int i : users) {
    double best = 0.0;
    for (int k : ks) best = std::max(best, reports.normalized[i][k]);
    if (best > 0.0) {
      candidates.emplace_back(best, i);
    } else {
      a.unserved.push_back(i);
    }
  }
  if (static_cast<int>(candidates.size()) > channels) {
    a.capacity_exceeded = true;
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for (std::size_t n = channels; n < candidates.size(); ++n) {
      a.unserved.push_back(candidates[n].second);
    }
    candidates.resize(channels);
  }
  std::sort(a.unserved.begin(), a.unserved.end());
  if (candidates.empty()) {
    a.pf_infeasible = true;
    return a;
  }

  PfProblem pb;
  pb.channels = channels;
  for (const auto& [g, i] : candidates) pb.served.push_back(i);
  std::sort(pb.served.begin(), pb.served.end());
  for (int i : pb.served) {
    std::vector<double> row(channels);
    for (int c = 0; c < channels; ++c) {
      row[c] = channel_rate(net.bandwidth[bs], reports.normalized[i][ks[c]], p, net.capacity_gap);
    }
    pb.gain.push_back(std::move(row));
  }

  bool exhaustive = search == PfSearch::kExhaustive;
  if (search == PfSearch::kAuto) {
    exhaustive = std::pow(static_cast<double>(pb.served.size()), channels) <= kPfExhaustiveLimit;
  }
  const std::vector<int> owner = exhaustive ? pf_exhaustive(pb) : pf_local_search(pb);

  std::vector<double> rate(pb.served.size(), 0.0);
  for (int c = 0; c < channels; ++c) {
    a.beta[c] = pb.served[owner[c]];
    rate[owner[c]] += pb.gain[owner[c]][c];
  }
  a.pf_infeasible = !a.unserved.empty() ||
                    std::any_of(rate.begin(), rate.end(), [](double r) { return r <= 0.0; });
  return a;
}

Allocation solve(Strategy strategy, const NetworkInstance& net, int bs,
                 std::span<const int> users, const ReportProfile& reports) {
  switch (strategy) {
    case Strategy::kCA: return solve_ca(net, bs, users, reports);
    case Strategy::kCAPA: return solve_capa(net, bs, users, reports);
    case Strategy::kCAPF: return solve_ca_pf(net, bs, users, reports);
  }
  throw std::logic_error("unreachable");
}

RateVector realized_rates(const NetworkInstance& net, const Allocation& alloc) {
  RateVector r(net.num_users, 0.0);
  const auto& ks = net.channels_of_bs[alloc.bs];
  for (std::size_t c = 0; c < ks.size(); ++c) {
    const int i = alloc.beta[c];
    if (i < 0) continue;
    r[i] += channel_rate(net.bandwidth[alloc.bs], net.normalized_gain(i, ks[c]), alloc.power[c],
                         net.capacity_gap);
  }
  return r;
}

RateVector reported_rates(const NetworkInstance& net, const Allocation& alloc,
                          const ReportProfile& reports) {
  RateVector r(net.num_users, 0.0);
  const auto& ks = net.channels_of_bs[alloc.bs];
  for (std::size_t c = 0; c < ks.size(); ++c) {
    const int i = alloc.beta[c];
    if (i < 0) continue;
    r[i] += channel_rate(net.bandwidth[alloc.bs], reports.normalized[i][ks[c]], alloc.power[c],
                         net.capacity_gap);
  }
  return r;
}

std::vector<int> users_of(std::span<const int> profile, int bs) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(profile.size()); ++i) {
    if (profile[i] == bs) out.push_back(i);
  }
  return out;
}

double bs_throughput(const NetworkInstance& net, int bs, std::span<const int> profile,
                     const ReportProfile& reports, Strategy strategy) {
  const auto users = users_of(profile, bs);
  if (users.empty()) return 0.0;
  const RateVector r = realized_rates(net, solve(strategy, net, bs, users, reports));
  double total = 0.0;
  for (int i : users) total += r[i];
  return net.weight[bs] * total;
}

double pf_log_sum(const RateVector& rates, const Allocation& alloc, std::span<const int> users) {
  double total = 0.0;
  for (int i : users) {
    if (std::binary_search(alloc.unserved.begin(), alloc.unserved.end(), i)) continue;
    if (rates[i] > 0.0) total += std::log(rates[i]);
  }
  return total;
}

}  // namespace dbsa
