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

// CSV and JSON result emission.

#pragma once

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hbnoma/errors.hpp"
#include "hbnoma/harness/config.hpp"
#include "hbnoma/harness/monte_carlo.hpp"
#include "hbnoma/harness/presets.hpp"

namespace hbnoma::harness {

using nlohmann::json;

enum class OutputFormat { csv, json };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + s + "' (expected csv or json)");
}

// 17 significant digits round-trip every double.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline constexpr const char* kFig2Header = "aod_deg,rho,rate_sim_bps_hz,rate_bound_bps_hz,snr_db";
inline constexpr const char* kFig3Header = "aod_deg,rho";
inline constexpr const char* kRunHeader = "user_n,user_m,rate_mean,rate_bound_mean,intra_mean,inter_mean";

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kFig2Header << '\n';
  for (const auto& r : rows)
    out << format_number(r.aod_deg) << ',' << format_number(r.rho) << ',' << format_number(r.rate_sim_bps_hz) << ','
        << format_number(r.rate_bound_bps_hz) << ',' << format_number(r.snr_db) << '\n';
  return out.str();
}

inline std::string fig3_csv(const std::vector<Fig3Row>& rows) {
  std::ostringstream out;
  out << kFig3Header << '\n';
  for (const auto& r : rows) out << format_number(r.aod_deg) << ',' << format_number(r.rho) << '\n';
  return out.str();
}

/// One row per user per run point, points in run order.
inline std::string run_csv(const RunManifest& m) {
  std::ostringstream out;
  out << kRunHeader << '\n';
  for (const auto& p : m.points)
    for (const auto& u : p.users)
      out << u.label.cluster << ',' << u.label.user << ',' << format_number(u.rate_mean) << ','
          << format_number(u.rate_bound_mean) << ',' << format_number(u.intra_mean) << ','
          << format_number(u.inter_mean) << '\n';
  return out.str();
}

namespace detail {

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace detail

// --- configuration -------------------------------------------------------

inline void to_json(json& j, const UserLabel& l) { j = json{{"cluster", l.cluster}, {"user", l.user}}; }
inline void from_json(const json& j, UserLabel& l) {
  j.at("cluster").get_to(l.cluster);
  j.at("user").get_to(l.user);
}

inline void to_json(json& j, const UserConfig& u) {
  j = json::object();
  detail::put_optional(j, "aod_deg", u.aod_deg);
  detail::put_optional(j, "aoa_deg", u.aoa_deg);
  j["large_scale_db"] = u.large_scale_db;
  detail::put_optional(j, "distance_m", u.distance_m);
  detail::put_optional(j, "pathloss_exponent", u.pathloss_exponent);
  j["small_scale"] = u.small_scale ? json::array({u.small_scale->real(), u.small_scale->imag()}) : json(nullptr);
}
inline void from_json(const json& j, UserConfig& u) {
  u.aod_deg = detail::get_optional<double>(j, "aod_deg");
  u.aoa_deg = detail::get_optional<double>(j, "aoa_deg");
  j.at("large_scale_db").get_to(u.large_scale_db);
  u.distance_m = detail::get_optional<double>(j, "distance_m");
  u.pathloss_exponent = detail::get_optional<double>(j, "pathloss_exponent");
  if (j.contains("small_scale") && !j.at("small_scale").is_null())
    u.small_scale = std::complex<double>(j.at("small_scale").at(0).get<double>(), j.at("small_scale").at(1).get<double>());
  else
    u.small_scale.reset();
}

inline void to_json(json& j, const ClusterConfig& c) { j = json{{"users", c.users}}; }
inline void from_json(const json& j, ClusterConfig& c) { j.at("users").get_to(c.users); }

inline void to_json(json& j, const SweepSpec& s) {
  j = json{{"variable", to_string(s.variable)}, {"start", s.start}, {"stop", s.stop}, {"step", s.step},
           {"target_user", s.target_user}};
}
inline void from_json(const json& j, SweepSpec& s) {
  s.variable = parse_sweep_variable(j.at("variable").get<std::string>());
  j.at("start").get_to(s.start);
  j.at("stop").get_to(s.stop);
  j.at("step").get_to(s.step);
  j.at("target_user").get_to(s.target_user);
}

inline void to_json(json& j, const ScenarioConfig& c) {
  j = json{{"bs_antennas", c.bs_antennas},       {"mu_antennas", c.mu_antennas}, {"spacing_ratio", c.spacing_ratio},
           {"clusters", c.clusters},             {"snr_db", c.snr_db},           {"intra_fractions", c.intra_fractions},
           {"seed", c.seed},                     {"trials", c.trials}};
  detail::put_optional(j, "rf_chains", c.rf_chains);
  j["sweep"] = c.sweep ? json(*c.sweep) : json(nullptr);
}
inline void from_json(const json& j, ScenarioConfig& c) {
  j.at("bs_antennas").get_to(c.bs_antennas);
  j.at("mu_antennas").get_to(c.mu_antennas);
  j.at("spacing_ratio").get_to(c.spacing_ratio);
  j.at("clusters").get_to(c.clusters);
  j.at("snr_db").get_to(c.snr_db);
  j.at("intra_fractions").get_to(c.intra_fractions);
  j.at("seed").get_to(c.seed);
  j.at("trials").get_to(c.trials);
  c.rf_chains = detail::get_optional<int>(j, "rf_chains");
  c.sweep = detail::get_optional<SweepSpec>(j, "sweep");
}

// --- results -------------------------------------------------------------

inline void to_json(json& j, const UserAggregate& u) {
  j = json{{"label", u.label},           {"rate_mean", u.rate_mean}, {"rate_bound_mean", u.rate_bound_mean},
           {"intra_mean", u.intra_mean}, {"inter_mean", u.inter_mean}, {"rho_mean", u.rho_mean}};
}
inline void from_json(const json& j, UserAggregate& u) {
  j.at("label").get_to(u.label);
  j.at("rate_mean").get_to(u.rate_mean);
  j.at("rate_bound_mean").get_to(u.rate_bound_mean);
  j.at("intra_mean").get_to(u.intra_mean);
  j.at("inter_mean").get_to(u.inter_mean);
  j.at("rho_mean").get_to(u.rho_mean);
}

inline void to_json(json& j, const BoundCheck& b) {
  j = json{{"evaluated", b.evaluated},
           {"violations", b.violations},
           {"violation_rate", b.violation_rate()},
           {"max_excess_bps_hz", b.max_excess}};
}
inline void from_json(const json& j, BoundCheck& b) {
  j.at("evaluated").get_to(b.evaluated);
  j.at("violations").get_to(b.violations);
  j.at("max_excess_bps_hz").get_to(b.max_excess);
}

inline void to_json(json& j, const PointAggregate& p) {
  j = json{{"snr_db", p.snr_db},
           {"users", p.users},
           {"sum_rate_mean", p.sum_rate_mean},
           {"bound_check", p.bound_check},
           {"redraws", p.redraws}};
  detail::put_optional(j, "sweep_value", p.sweep_value);
  detail::put_optional(j, "target_aod_deg", p.target_aod_deg);
}
inline void from_json(const json& j, PointAggregate& p) {
  j.at("snr_db").get_to(p.snr_db);
  j.at("users").get_to(p.users);
  j.at("sum_rate_mean").get_to(p.sum_rate_mean);
  j.at("bound_check").get_to(p.bound_check);
  j.at("redraws").get_to(p.redraws);
  p.sweep_value = detail::get_optional<double>(j, "sweep_value");
  p.target_aod_deg = detail::get_optional<double>(j, "target_aod_deg");
}

inline void to_json(json& j, const SweepRow& r) {
  j = json{{"aod_deg", r.aod_deg},
           {"rho", r.rho},
           {"rate_sim_bps_hz", r.rate_sim_bps_hz},
           {"rate_bound_bps_hz", r.rate_bound_bps_hz},
           {"snr_db", r.snr_db}};
}
inline void from_json(const json& j, SweepRow& r) {
  j.at("aod_deg").get_to(r.aod_deg);
  j.at("rho").get_to(r.rho);
  j.at("rate_sim_bps_hz").get_to(r.rate_sim_bps_hz);
  j.at("rate_bound_bps_hz").get_to(r.rate_bound_bps_hz);
  j.at("snr_db").get_to(r.snr_db);
}

inline void to_json(json& j, const TrendStat& t) {
  j = json{{"snr_db", t.snr_db}, {"spearman_rho_rate", t.spearman_rho_rate}, {"spearman_aod_rho", t.spearman_aod_rho}};
}
inline void from_json(const json& j, TrendStat& t) {
  j.at("snr_db").get_to(t.snr_db);
  j.at("spearman_rho_rate").get_to(t.spearman_rho_rate);
  j.at("spearman_aod_rho").get_to(t.spearman_aod_rho);
}

inline void to_json(json& j, const RunManifest& m) {
  j = json{{"version", m.version},       {"config", m.config},         {"seed", m.seed},
           {"trials", m.trials},         {"points", m.points},         {"sweep_rows", m.sweep_rows},
           {"trends", m.trends},         {"bound_check", m.bound_check}, {"singular_redraws", m.singular_redraws}};
}
inline void from_json(const json& j, RunManifest& m) {
  j.at("version").get_to(m.version);
  j.at("config").get_to(m.config);
  j.at("seed").get_to(m.seed);
  j.at("trials").get_to(m.trials);
  j.at("points").get_to(m.points);
  j.at("sweep_rows").get_to(m.sweep_rows);
  j.at("trends").get_to(m.trends);
  j.at("bound_check").get_to(m.bound_check);
  j.at("singular_redraws").get_to(m.singular_redraws);
}

inline void to_json(json& j, const Fig3Row& r) { j = json{{"aod_deg", r.aod_deg}, {"rho", r.rho}}; }
inline void from_json(const json& j, Fig3Row& r) {
  j.at("aod_deg").get_to(r.aod_deg);
  j.at("rho").get_to(r.rho);
}

inline std::string manifest_json(const RunManifest& m) { return json(m).dump(2) + "\n"; }
inline std::string fig3_json(const std::vector<Fig3Row>& rows) { return json{{"rows", rows}}.dump(2) + "\n"; }

inline RunManifest parse_manifest_json(const std::string& text) { return json::parse(text).get<RunManifest>(); }

/// Writes `content` to `path`, or to stdout when `path` is empty.
inline void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace hbnoma::harness
