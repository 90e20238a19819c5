// SPDX-License-Identifier: Apache-2.0
//
// hbnoma: hybrid-beamforming NOMA downlink simulation library
// Copyright (C) 2026 hbnoma contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Seeded Monte Carlo execution of a scenario configuration.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hbnoma/downlink.hpp"
#include "hbnoma/errors.hpp"
#include "hbnoma/harness/config.hpp"

namespace hbnoma::harness {

inline constexpr const char* kVersionTag = "hbnoma-1.0.0";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-trial stream seed: run seed xor a hash of the trial index.
inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
  return seed ^ splitmix64(static_cast<std::uint64_t>(trial));
}

struct UserAggregate {
  UserLabel label;
  double rate_mean = 0.0;
  double rate_bound_mean = 0.0;
  double intra_mean = 0.0;
  double inter_mean = 0.0;
  double rho_mean = 0.0;
  bool operator==(const UserAggregate&) const = default;
};

/// How often the closed-form bound exceeded the exact rate (non-first users only).
struct BoundCheck {
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  double max_excess = 0.0;

  double violation_rate() const { return evaluated ? static_cast<double>(violations) / evaluated : 0.0; }
  void merge(const BoundCheck& o) {
    evaluated += o.evaluated;
    violations += o.violations;
    max_excess = std::max(max_excess, o.max_excess);
  }
  bool operator==(const BoundCheck&) const = default;
};

struct PointAggregate {
  double snr_db = 0.0;
  std::optional<double> sweep_value;
  std::optional<double> target_aod_deg;
  std::vector<UserAggregate> users;  // label order
  double sum_rate_mean = 0.0;
  BoundCheck bound_check;
  std::size_t redraws = 0;
  bool operator==(const PointAggregate&) const = default;
};

struct SweepRow {
  double aod_deg = 0.0;
  double rho = 0.0;
  double rate_sim_bps_hz = 0.0;
  double rate_bound_bps_hz = 0.0;
  double snr_db = 0.0;
  bool operator==(const SweepRow&) const = default;
};

struct TrendStat {
  double snr_db = 0.0;
  double spearman_rho_rate = 0.0;
  double spearman_aod_rho = 0.0;
  bool operator==(const TrendStat&) const = default;
};

struct RunManifest {
  ScenarioConfig config;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::string version = kVersionTag;
  std::vector<PointAggregate> points;
  std::vector<SweepRow> sweep_rows;
  std::vector<TrendStat> trends;
  BoundCheck bound_check;
  std::size_t singular_redraws = 0;
  bool operator==(const RunManifest&) const = default;
};

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return 0.0;
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

inline std::size_t flat_index(const ScenarioConfig& cfg, UserLabel label) {
  return (label.cluster - 1) * cfg.users_per_cluster() + (label.user - 1);
}

/// Overrides applied on top of the configuration for one run point.
struct PointOverride {
  std::optional<UserLabel> target;
  std::optional<double> target_aod_deg;
};

/// One channel realization. Every user consumes four draws in label order
/// (Re g, Im g, AoD, AoA) whether or not the value is fixed, so fixing one
/// field never shifts the random stream of another.
inline DownlinkScenario draw_scenario(const ScenarioConfig& cfg, double snr_db, const PointOverride& ov,
                                      std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> angle(-kPi / 2.0, kPi / 2.0);
  const ArrayGeometry bs(cfg.bs_antennas, cfg.spacing_ratio);
  const ArrayGeometry mu(cfg.mu_antennas, cfg.spacing_ratio);

  DownlinkScenario s;
  s.total_power = std::pow(10.0, snr_db / 10.0);
  s.intra_fractions = cfg.intra_fractions;
  const std::size_t m_users = cfg.users_per_cluster();
  for (std::size_t n = 0; n < cfg.num_clusters(); ++n) {
    std::vector<UserId> members;
    for (std::size_t m = 0; m < m_users; ++m) {
      const UserConfig& u = cfg.clusters[n].users[m];
      const double re = gauss(rng);
      const double im = gauss(rng);
      const double aod_draw = angle(rng);
      const double aoa_draw = angle(rng);

      double aod = u.aod_deg ? deg_to_rad(*u.aod_deg) : aod_draw;
      if (ov.target && ov.target_aod_deg && ov.target->cluster == n + 1 && ov.target->user == m + 1)
        aod = deg_to_rad(*ov.target_aod_deg);
      const double aoa = u.aoa_deg ? deg_to_rad(*u.aoa_deg) : aoa_draw;
      const std::complex<double> g = u.small_scale.value_or(std::complex<double>(re, im));

      members.push_back(UserId{s.channels.size()});
      s.channels.push_back(SinglePathChannel{AngleSpec::from_physical(aoa, cfg.spacing_ratio),
                                             AngleSpec::from_physical(aod, cfg.spacing_ratio),
                                             PathGain(g, u.effective_large_scale_db()), bs, mu});
    }
    s.clusters.push_back(std::move(members));
  }
  return s;
}

/// Monte Carlo over cfg.trials trials at one (SNR, override) point.
/// Singular clusterings are redrawn from the same trial stream; more than
/// trials / 100 redraws aborts the point.
inline PointAggregate evaluate_point(const ScenarioConfig& cfg, double snr_db, const PointOverride& ov = {}) {
  const std::size_t total_users = cfg.num_clusters() * cfg.users_per_cluster();
  const std::size_t redraw_cap = cfg.trials / 100;

  PointAggregate agg;
  agg.snr_db = snr_db;
  agg.target_aod_deg = ov.target_aod_deg;
  agg.users.resize(total_users);
  for (std::size_t n = 0; n < cfg.num_clusters(); ++n)
    for (std::size_t m = 0; m < cfg.users_per_cluster(); ++m)
      agg.users[n * cfg.users_per_cluster() + m].label = {n + 1, m + 1};

  for (std::size_t t = 0; t < cfg.trials; ++t) {
    std::mt19937_64 rng(trial_seed(cfg.seed, t));
    std::optional<DownlinkResult> result;
    while (!result) {
      const DownlinkScenario scenario = draw_scenario(cfg, snr_db, ov, rng);
      try {
        result = evaluate_downlink(scenario);
      } catch (const SingularClusteringError& e) {
        if (++agg.redraws > redraw_cap)
          throw NumericalError(std::string(e.what()) + "; redraw cap of " + std::to_string(redraw_cap) + " per " +
                               std::to_string(cfg.trials) + " trials exceeded");
      }
    }
    for (std::size_t u = 0; u < total_users; ++u) {
      const UserEvaluation& ev = result->user(UserId{u});
      UserAggregate& a = agg.users[u];
      a.rate_mean += ev.rate.rate_bps_hz;
      a.rate_bound_mean += ev.rate.lower_bound_bps_hz.value_or(ev.rate.rate_bps_hz);
      a.intra_mean += ev.rate.intra_interference;
      a.inter_mean += ev.rate.inter_interference;
      a.rho_mean += ev.rho;
      if (ev.rate.position.position > 0 && ev.rate.lower_bound_bps_hz) {
        const double excess = *ev.rate.lower_bound_bps_hz - ev.rate.rate_bps_hz;
        ++agg.bound_check.evaluated;
        if (excess > 1e-12) {
          ++agg.bound_check.violations;
          agg.bound_check.max_excess = std::max(agg.bound_check.max_excess, excess);
        }
      }
    }
    agg.sum_rate_mean += result->sum_rate_bps_hz;
  }

  const double inv = 1.0 / static_cast<double>(cfg.trials);
  for (auto& a : agg.users) {
    a.rate_mean *= inv;
    a.rate_bound_mean *= inv;
    a.intra_mean *= inv;
    a.inter_mean *= inv;
    a.rho_mean *= inv;
  }
  agg.sum_rate_mean *= inv;
  return agg;
}

/// Correlation of `target` against its cluster anchor with every AoD fixed,
/// unit small-scale gains and large-scale ordering (rho does not depend on
/// the small-scale gain once the anchor is fixed).
inline double deterministic_rho(const ScenarioConfig& cfg, UserLabel target, double target_aod_deg) {
  ScenarioConfig fixed = cfg;
  for (std::size_t n = 0; n < fixed.clusters.size(); ++n)
    for (std::size_t m = 0; m < fixed.clusters[n].users.size(); ++m) {
      auto& u = fixed.clusters[n].users[m];
      if (!u.aod_deg && !(target.cluster == n + 1 && target.user == m + 1))
        throw ConfigError("rho targets need fixed AoDs for every user");
      u.aoa_deg = 0.0;
      u.small_scale = std::complex<double>(1.0, 0.0);
    }
  std::mt19937_64 rng(0);
  const DownlinkScenario s = draw_scenario(fixed, 0.0, {target, target_aod_deg}, rng);
  return evaluate_downlink(s).user(UserId{flat_index(cfg, target)}).rho;
}

/// AoD of `target` between its anchor's AoD and its configured AoD at which
/// rho reaches `rho_target`: 0.01 degree scan, then bisection.
inline double solve_aod_for_rho(const ScenarioConfig& cfg, UserLabel target, double rho_target) {
  const UserConfig& tu = cfg.user(target);
  if (!tu.aod_deg) throw ConfigError("rho targets need a fixed AoD for the target user (search end point)");
  std::size_t anchor_m = 0;
  const auto& members = cfg.clusters.at(target.cluster - 1).users;
  for (std::size_t m = 1; m < members.size(); ++m)
    if (members[m].effective_large_scale_db() > members[anchor_m].effective_large_scale_db()) anchor_m = m;
  if (anchor_m + 1 == target.user) throw ConfigError("rho target user is its cluster's beam anchor");
  const double from = *members[anchor_m].aod_deg;
  const double to = *tu.aod_deg;
  if (rho_target >= 1.0) return from;

  const double span = to - from;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / 0.01)));
  double prev_x = from;
  for (int i = 1; i <= steps; ++i) {
    const double x = from + span * static_cast<double>(i) / steps;
    if (deterministic_rho(cfg, target, x) <= rho_target) {
      double lo = prev_x, hi = x;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (deterministic_rho(cfg, target, mid) > rho_target ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_x = x;
  }
  throw ConfigError("rho target " + std::to_string(rho_target) + " is not reached between " + std::to_string(from) +
                    " and " + std::to_string(to) + " degrees");
}

inline void add_trends(RunManifest& manifest) {
  manifest.trends.clear();
  std::vector<double> snrs;
  for (const auto& r : manifest.sweep_rows)
    if (std::find(snrs.begin(), snrs.end(), r.snr_db) == snrs.end()) snrs.push_back(r.snr_db);
  for (double snr : snrs) {
    std::vector<double> aod, rho, rate;
    for (const auto& r : manifest.sweep_rows)
      if (r.snr_db == snr) {
        aod.push_back(r.aod_deg);
        rho.push_back(r.rho);
        rate.push_back(r.rate_sim_bps_hz);
      }
    manifest.trends.push_back({snr, spearman(rho, rate), spearman(aod, rho)});
  }
}

/// Runs every SNR point of the configuration, or every sweep point when the
/// configuration carries a sweep block.
inline RunManifest run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  RunManifest manifest;
  manifest.config = cfg;
  manifest.seed = cfg.seed;
  manifest.trials = cfg.trials;

  auto record = [&](PointAggregate p) {
    manifest.bound_check.merge(p.bound_check);
    manifest.singular_redraws += p.redraws;
    manifest.points.push_back(std::move(p));
  };

  if (!cfg.sweep) {
    for (double snr : cfg.snr_db) record(evaluate_point(cfg, snr));
    return manifest;
  }

  const SweepSpec& sweep = *cfg.sweep;
  const UserLabel target = sweep.target_user;
  const std::size_t target_idx = flat_index(cfg, target);
  auto add_row = [&](const PointAggregate& p, double aod) {
    const UserAggregate& u = p.users[target_idx];
    manifest.sweep_rows.push_back({aod, u.rho_mean, u.rate_mean, u.rate_bound_mean, p.snr_db});
  };

  if (sweep.variable == SweepVariable::snr_db) {
    const UserConfig& tu = cfg.user(target);
    for (double snr : sweep.values()) {
      PointAggregate p = evaluate_point(cfg, snr);
      p.sweep_value = snr;
      add_row(p, *tu.aod_deg);
      record(std::move(p));
    }
  } else {
    std::vector<std::pair<double, double>> grid;  // (sweep value, target AoD)
    for (double v : sweep.values())
      grid.emplace_back(v, sweep.variable == SweepVariable::aod_of_user ? v : solve_aod_for_rho(cfg, target, v));
    for (double snr : cfg.snr_db)
      for (const auto& [value, aod] : grid) {
        PointAggregate p = evaluate_point(cfg, snr, {target, aod});
        p.sweep_value = value;
        add_row(p, aod);
        record(std::move(p));
      }
  }
  add_trends(manifest);
  return manifest;
}

}  // namespace hbnoma::harness
