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

// Scenario configuration: types, validation and the text file format.
//
// The format is line based. `#` starts a comment. Top-level lines are
// `key = value`; `cluster { ... }` holds `user { ... }` blocks and an
// optional `sweep { ... }` block sits at top level. Lists are comma
// separated. Angles are physical degrees or the word `random`.
//
//   bs_antennas      = 16            # BS ULA elements
//   mu_antennas      = 4             # MU ULA elements
//   spacing_ratio    = 0.5           # d / lambda, both arrays
//   rf_chains        = 2             # optional; must be >= number of clusters
//   snr_db           = 0, 5          # one run point per value
//   intra_fractions  = 0.25, 0.75    # optional; default geometric (ratio 3)
//   seed             = 1
//   trials           = 1000
//   cluster {
//     user {
//       aod_deg           = 60       # or random
//       aoa_deg           = random   # or degrees
//       large_scale_db    = 0        # or distance_m + pathloss_exponent
//       small_scale       = 1, 0     # optional fixed complex gain (re, im)
//     }
//   }
//   sweep {
//     variable    = aod_of_user      # aod_of_user | snr_db | rho_target
//     start       = 50
//     stop        = 60
//     step        = 0.25
//     target_user = 1, 2             # cluster, user (1-based, file order)
//   }

#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hbnoma/errors.hpp"

namespace hbnoma::harness {

/// A fixed angle in degrees, or nullopt for a uniform draw over [-90, 90].
using AngleSetting = std::optional<double>;

struct UserConfig {
  AngleSetting aod_deg;
  AngleSetting aoa_deg;
  double large_scale_db = 0.0;
  std::optional<double> distance_m;
  std::optional<double> pathloss_exponent;
  std::optional<std::complex<double>> small_scale;

  /// dB attenuation from whichever parameterization was given.
  double effective_large_scale_db() const {
    if (distance_m) return -10.0 * pathloss_exponent.value_or(2.0) * std::log10(*distance_m);
    return large_scale_db;
  }
  bool operator==(const UserConfig&) const = default;
};

struct ClusterConfig {
  std::vector<UserConfig> users;
  bool operator==(const ClusterConfig&) const = default;
};

/// 1-based (cluster, user) label in file order.
struct UserLabel {
  std::size_t cluster = 1;
  std::size_t user = 1;
  bool operator==(const UserLabel&) const = default;
};

enum class SweepVariable { aod_of_user, snr_db, rho_target };

struct SweepSpec {
  SweepVariable variable = SweepVariable::aod_of_user;
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
  UserLabel target_user;

  /// start, start + step, ... up to stop (inclusive, with a 1e-9 step slack).
  std::vector<double> values() const {
    std::vector<double> v;
    if (!(step > 0.0)) return v;
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) v.push_back(start + static_cast<double>(i) * step);
    return v;
  }
  bool operator==(const SweepSpec&) const = default;
};

struct ScenarioConfig {
  int bs_antennas = 16;
  int mu_antennas = 4;
  double spacing_ratio = 0.5;
  std::optional<int> rf_chains;
  std::vector<ClusterConfig> clusters;
  std::vector<double> snr_db{5.0};
  std::vector<double> intra_fractions;
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  std::optional<SweepSpec> sweep;

  std::size_t num_clusters() const noexcept { return clusters.size(); }
  std::size_t users_per_cluster() const noexcept { return clusters.empty() ? 0 : clusters.front().users.size(); }
  const UserConfig& user(UserLabel label) const { return clusters.at(label.cluster - 1).users.at(label.user - 1); }
  UserConfig& user(UserLabel label) { return clusters.at(label.cluster - 1).users.at(label.user - 1); }

  bool operator==(const ScenarioConfig&) const = default;
};

inline const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::aod_of_user: return "aod_of_user";
    case SweepVariable::snr_db: return "snr_db";
    case SweepVariable::rho_target: return "rho_target";
  }
  return "?";
}

inline SweepVariable parse_sweep_variable(std::string_view s) {
  if (s == "aod_of_user") return SweepVariable::aod_of_user;
  if (s == "snr_db") return SweepVariable::snr_db;
  if (s == "rho_target") return SweepVariable::rho_target;
  throw ConfigError("unknown sweep variable '" + std::string(s) + "'");
}

inline void validate(const ScenarioConfig& c) {
  if (c.bs_antennas < 1) throw ConfigError("bs_antennas must be >= 1");
  if (c.mu_antennas < 1) throw ConfigError("mu_antennas must be >= 1");
  if (!(c.spacing_ratio > 0.0)) throw ConfigError("spacing_ratio must be positive");
  if (c.clusters.empty()) throw ConfigError("at least one cluster is required");
  const std::size_t m = c.users_per_cluster();
  if (m == 0) throw ConfigError("cluster 1 has no users");
  for (std::size_t n = 0; n < c.clusters.size(); ++n) {
    if (c.clusters[n].users.size() != m)
      throw ConfigError("cluster " + std::to_string(n + 1) + " has " + std::to_string(c.clusters[n].users.size()) +
                        " users; every cluster must have " + std::to_string(m));
    for (std::size_t u = 0; u < m; ++u) {
      const auto& user = c.clusters[n].users[u];
      const std::string where = "user (" + std::to_string(n + 1) + "," + std::to_string(u + 1) + ")";
      for (const auto& a : {user.aod_deg, user.aoa_deg})
        if (a && !(std::abs(*a) <= 90.0)) throw ConfigError(where + ": angle outside [-90, 90] degrees");
      if (user.distance_m && !(*user.distance_m > 0.0)) throw ConfigError(where + ": distance_m must be positive");
      if (!std::isfinite(user.effective_large_scale_db())) throw ConfigError(where + ": large-scale gain is not finite");
    }
  }
  if (c.rf_chains && static_cast<std::size_t>(*c.rf_chains) < c.clusters.size())
    throw ConfigError(std::to_string(c.clusters.size()) + " clusters need " + std::to_string(c.clusters.size()) +
                      " RF chains, only " + std::to_string(*c.rf_chains) + " configured");
  if (c.snr_db.empty()) throw ConfigError("snr_db needs at least one value");
  for (double s : c.snr_db)
    if (!std::isfinite(s)) throw ConfigError("snr_db values must be finite");
  if (!c.intra_fractions.empty()) {
    if (c.intra_fractions.size() != m)
      throw ConfigError("intra_fractions has " + std::to_string(c.intra_fractions.size()) + " entries, clusters have " +
                        std::to_string(m) + " users");
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(c.intra_fractions[i] > 0.0)) throw ConfigError("intra_fractions must be positive");
      if (i > 0 && c.intra_fractions[i] < c.intra_fractions[i - 1])
        throw ConfigError("intra_fractions must be nondecreasing");
      sum += c.intra_fractions[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("intra_fractions must sum to 1");
  }
  if (c.trials < 1) throw ConfigError("trials must be >= 1");
  if (c.sweep) {
    const auto& s = *c.sweep;
    if (!(s.step > 0.0)) throw ConfigError("sweep step must be positive");
    if (!(s.stop >= s.start)) throw ConfigError("sweep range is empty (stop < start)");
    if (s.target_user.cluster < 1 || s.target_user.cluster > c.clusters.size() || s.target_user.user < 1 ||
        s.target_user.user > m)
      throw ConfigError("sweep target user does not exist");
    if (s.variable == SweepVariable::aod_of_user && (s.start < -90.0 || s.stop > 90.0))
      throw ConfigError("AoD sweep must stay within [-90, 90] degrees");
    if (s.variable == SweepVariable::snr_db && !c.user(s.target_user).aod_deg)
      throw ConfigError("snr_db sweeps report the target user's AoD, which must be fixed");
    if (s.variable == SweepVariable::rho_target && (s.start < 0.0 || s.stop > 1.0))
      throw ConfigError("rho targets must lie in [0, 1]");
  }
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct LineContext {
  std::size_t line = 0;
  std::string key;
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line) + (key.empty() ? "" : " (" + key + ")") + ": " + what);
  }
};

inline double parse_double(const std::string& text, const LineContext& ctx) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) ctx.fail("expected a number, got '" + text + "'");
  return v;
}

inline std::vector<double> parse_list(const std::string& text, const LineContext& ctx) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), ctx));
  if (out.empty()) ctx.fail("expected a comma-separated list");
  return out;
}

template <class Int>
Int parse_integer(const std::string& text, const LineContext& ctx) {
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) ctx.fail("expected an integer, got '" + text + "'");
  return v;
}

inline AngleSetting parse_angle(const std::string& text, const LineContext& ctx) {
  if (text == "random") return std::nullopt;
  return parse_double(text, ctx);
}

}  // namespace detail

inline ScenarioConfig parse_config(std::istream& in) {
  using detail::LineContext;
  ScenarioConfig cfg;
  cfg.clusters.clear();
  enum class Block { top, cluster, user, sweep };
  std::vector<Block> stack{Block::top};
  std::optional<SweepSpec> sweep;
  bool have_target = false;
  std::string raw;
  LineContext ctx;

  while (std::getline(in, raw)) {
    ++ctx.line;
    ctx.key.clear();
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;

    if (line == "}") {
      if (stack.size() == 1) ctx.fail("unmatched '}'");
      if (stack.back() == Block::sweep && !have_target) ctx.fail("sweep block needs target_user");
      stack.pop_back();
      continue;
    }
    if (line.back() == '{') {
      const std::string name = detail::trim(std::string_view(line).substr(0, line.size() - 1));
      if (name == "cluster" && stack.back() == Block::top) {
        cfg.clusters.emplace_back();
        stack.push_back(Block::cluster);
      } else if (name == "user" && stack.back() == Block::cluster) {
        cfg.clusters.back().users.emplace_back();
        stack.push_back(Block::user);
      } else if (name == "sweep" && stack.back() == Block::top) {
        if (sweep) ctx.fail("only one sweep block is allowed");
        sweep.emplace();
        have_target = false;
        stack.push_back(Block::sweep);
      } else {
        ctx.fail("unexpected block '" + name + "'");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) ctx.fail("expected 'key = value'");
    ctx.key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (value.empty()) ctx.fail("missing value");
    const std::string& key = ctx.key;

    switch (stack.back()) {
      case Block::top:
        if (key == "bs_antennas") cfg.bs_antennas = detail::parse_integer<int>(value, ctx);
        else if (key == "mu_antennas") cfg.mu_antennas = detail::parse_integer<int>(value, ctx);
        else if (key == "spacing_ratio") cfg.spacing_ratio = detail::parse_double(value, ctx);
        else if (key == "rf_chains") cfg.rf_chains = detail::parse_integer<int>(value, ctx);
        else if (key == "snr_db") cfg.snr_db = detail::parse_list(value, ctx);
        else if (key == "intra_fractions") cfg.intra_fractions = detail::parse_list(value, ctx);
        else if (key == "seed") cfg.seed = detail::parse_integer<std::uint64_t>(value, ctx);
        else if (key == "trials") cfg.trials = detail::parse_integer<std::size_t>(value, ctx);
        else ctx.fail("unknown key");
        break;
      case Block::cluster:
        ctx.fail("cluster blocks only contain user blocks");
      case Block::user: {
        auto& u = cfg.clusters.back().users.back();
        if (key == "aod_deg") u.aod_deg = detail::parse_angle(value, ctx);
        else if (key == "aoa_deg") u.aoa_deg = detail::parse_angle(value, ctx);
        else if (key == "large_scale_db") u.large_scale_db = detail::parse_double(value, ctx);
        else if (key == "distance_m") u.distance_m = detail::parse_double(value, ctx);
        else if (key == "pathloss_exponent") u.pathloss_exponent = detail::parse_double(value, ctx);
        else if (key == "small_scale") {
          const auto parts = detail::parse_list(value, ctx);
          if (parts.size() != 2) ctx.fail("small_scale takes 're, im'");
          u.small_scale = std::complex<double>(parts[0], parts[1]);
        } else ctx.fail("unknown key");
        break;
      }
      case Block::sweep:
        if (key == "variable") sweep->variable = parse_sweep_variable(value);
        else if (key == "start") sweep->start = detail::parse_double(value, ctx);
        else if (key == "stop") sweep->stop = detail::parse_double(value, ctx);
        else if (key == "step") sweep->step = detail::parse_double(value, ctx);
        else if (key == "target_user") {
          const auto parts = detail::parse_list(value, ctx);
          if (parts.size() != 2 || parts[0] < 1 || parts[1] < 1 || parts[0] != std::floor(parts[0]) ||
              parts[1] != std::floor(parts[1]))
            ctx.fail("target_user takes 'cluster, user' (1-based integers)");
          sweep->target_user = {static_cast<std::size_t>(parts[0]), static_cast<std::size_t>(parts[1])};
          have_target = true;
        } else ctx.fail("unknown key");
        break;
    }
  }
  if (stack.size() != 1) throw ConfigError("unterminated block at end of file");
  for (const auto& c : cfg.clusters)
    for (const auto& u : c.users)
      if (u.distance_m && u.large_scale_db != 0.0)
        throw ConfigError("give either large_scale_db or distance_m for a user, not both");
  cfg.sweep = sweep;
  validate(cfg);
  return cfg;
}

inline ScenarioConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace hbnoma::harness
