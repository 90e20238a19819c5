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

// Per-user SINR terms and achievable rates under error-free SIC.

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "hbnoma/cluster_plan.hpp"
#include "hbnoma/hybrid_precoding.hpp"
#include "hbnoma/noma_power.hpp"

namespace hbnoma {

/// Everything the rate expressions read. Holds references; the referenced
/// objects must outlive the view.
struct LinkView {
  const EffectiveChannelSet& effective;
  const BasebandPrecoder& baseband;
  const ClusterPlan& plan;
  const PowerPlan& powers;
};

struct RateBreakdown {
  SicPosition position;
  UserId user;
  double desired_power = 0.0;
  double intra_interference = 0.0;
  double inter_interference = 0.0;
  double rate_bps_hz = 0.0;
  std::optional<double> lower_bound_bps_hz;
};

/// |h_bar_u^H f^beam|^2 = |w^H H F_RF f^beam|^2.
inline double beam_gain(const LinkView& link, UserId user, std::size_t beam) {
  return std::norm(link.effective[user].dot(link.baseband.column(beam)));
}

/// Signals of the weaker-power users decoded after this one:
/// sum_{k<m} P_{n,k} |h_bar^H f^n|^2. Zero at position 0.
inline double intra_interference(const LinkView& link, SicPosition pos) {
  if (pos.position == 0) return 0.0;
  const double gain = beam_gain(link, link.plan.at(pos), pos.cluster);
  double acc = 0.0;
  for (std::size_t k = 0; k < pos.position; ++k) acc += link.powers.at({pos.cluster, k}) * gain;
  return acc;
}

/// sum_{l != n} sum_q P_{l,q} |h_bar^H f^l|^2, accumulated in (cluster, position) order.
inline double inter_interference(const LinkView& link, SicPosition pos) {
  const UserId user = link.plan.at(pos);
  double acc = 0.0;
  for (std::size_t l = 0; l < link.plan.num_clusters(); ++l) {
    if (l == pos.cluster) continue;
    const double gain = beam_gain(link, user, l);
    for (std::size_t q = 0; q < link.plan.assignments[l].size(); ++q) acc += link.powers.at({l, q}) * gain;
  }
  return acc;
}

inline RateBreakdown user_rate(const LinkView& link, SicPosition pos) {
  RateBreakdown r;
  r.position = pos;
  r.user = link.plan.at(pos);
  r.desired_power = link.powers.at(pos) * beam_gain(link, r.user, pos.cluster);
  r.intra_interference = intra_interference(link, pos);
  r.inter_interference = inter_interference(link, pos);
  r.rate_bps_hz = std::log1p(r.desired_power / (r.intra_interference + r.inter_interference + 1.0)) / std::numbers::ln2;
  return r;
}

/// All users in (cluster, SIC position) order.
inline std::vector<RateBreakdown> all_user_rates(const LinkView& link) {
  std::vector<RateBreakdown> out;
  out.reserve(link.plan.num_users());
  for (std::size_t n = 0; n < link.plan.num_clusters(); ++n)
    for (std::size_t m = 0; m < link.plan.assignments[n].size(); ++m) out.push_back(user_rate(link, {n, m}));
  return out;
}

inline double sum_rate(std::span<const RateBreakdown> rates) {
  double s = 0.0;
  for (const auto& r : rates) s += r.rate_bps_hz;
  return s;
}

}  // namespace hbnoma
