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

// Built-in experiment presets: rate vs correlation sweep (two clusters) and
// correlation vs AoD sweep (three clusters).

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "hbnoma/harness/config.hpp"
#include "hbnoma/harness/monte_carlo.hpp"

namespace hbnoma::harness {

struct Fig2Options {
  std::vector<double> snr_db{0.0, 5.0};
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double step_deg = 0.25;
};

/// 16-element BS, 4-element MUs, two clusters of two users; first users at
/// 0 dB, second users at -10 dB, (1/4, 3/4) split. MU-(1,1) sits at 60 deg and
/// MU-(1,2) sweeps 50..60 deg; cluster 2 is anchored at 20 deg with its
/// second user at 30 deg. AoAs are drawn uniformly.
inline ScenarioConfig fig2_config(const Fig2Options& opt = {}) {
  ScenarioConfig cfg;
  cfg.bs_antennas = 16;
  cfg.mu_antennas = 4;
  cfg.snr_db = opt.snr_db;
  cfg.intra_fractions = {0.25, 0.75};
  cfg.seed = opt.seed;
  cfg.trials = opt.trials;
  auto user = [](double aod, double db) {
    UserConfig u;
    u.aod_deg = aod;
    u.aoa_deg = std::nullopt;
    u.large_scale_db = db;
    return u;
  };
  cfg.clusters = {ClusterConfig{{user(60.0, 0.0), user(50.0, -10.0)}},
                  ClusterConfig{{user(20.0, 0.0), user(30.0, -10.0)}}};
  cfg.sweep = SweepSpec{SweepVariable::aod_of_user, 50.0, 60.0, opt.step_deg, UserLabel{1, 2}};
  return cfg;
}

inline RunManifest sweep_fig2(const ScenarioConfig& cfg) { return run_scenario(cfg); }

struct Fig3Row {
  double aod_deg = 0.0;
  double rho = 0.0;
  bool operator==(const Fig3Row&) const = default;
};

struct Fig3Options {
  double step_deg = 0.5;
  int bs_antennas = 16;
  std::uint64_t seed = 1;
};

/// Three clusters anchored at 0, -40 and 40 deg; MU-(1,2) sweeps -90..90 deg.
/// Gains and AoAs are fixed, so the curve is a deterministic function of the
/// geometry.
inline ScenarioConfig fig3_config(const Fig3Options& opt = {}) {
  ScenarioConfig cfg;
  cfg.bs_antennas = opt.bs_antennas;
  cfg.mu_antennas = 4;
  cfg.snr_db = {5.0};
  cfg.intra_fractions = {0.25, 0.75};
  cfg.seed = opt.seed;
  cfg.trials = 1;
  auto user = [](double aod, double db) {
    UserConfig u;
    u.aod_deg = aod;
    u.aoa_deg = 0.0;
    u.large_scale_db = db;
    u.small_scale = std::complex<double>(1.0, 0.0);
    return u;
  };
  cfg.clusters = {ClusterConfig{{user(0.0, 0.0), user(0.0, -10.0)}},
                  ClusterConfig{{user(-40.0, 0.0), user(-30.0, -10.0)}},
                  ClusterConfig{{user(40.0, 0.0), user(30.0, -10.0)}}};
  cfg.sweep = SweepSpec{SweepVariable::aod_of_user, -90.0, 90.0, opt.step_deg, UserLabel{1, 2}};
  return cfg;
}

inline std::vector<Fig3Row> sweep_fig3(const ScenarioConfig& cfg) {
  const RunManifest m = run_scenario(cfg);
  std::vector<Fig3Row> rows;
  rows.reserve(m.sweep_rows.size());
  for (const auto& r : m.sweep_rows) rows.push_back({r.aod_deg, r.rho});
  return rows;
}

}  // namespace hbnoma::harness
