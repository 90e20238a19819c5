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

// User ordering inside clusters and the fixed two-stage NOMA power split.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hbnoma/cluster_plan.hpp"
#include "hbnoma/errors.hpp"
#include "hbnoma/hybrid_precoding.hpp"

namespace hbnoma {

struct UserGain {
  UserId user;
  double magnitude = 0.0;  // |beta| or ||h_bar||, depending on the caller
};

/// Descending by magnitude, ties by ascending user id.
inline std::vector<UserId> order_by_gain(std::span<const UserGain> users) {
  std::vector<UserGain> sorted(users.begin(), users.end());
  std::sort(sorted.begin(), sorted.end(), [](const UserGain& a, const UserGain& b) {
    if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
    return a.user < b.user;
  });
  std::vector<UserId> out;
  out.reserve(sorted.size());
  for (const auto& u : sorted) out.push_back(u.user);
  return out;
}

/// Orders each cluster of `membership` by |beta| and fixes the beam anchors.
inline ClusterPlan plan_by_gain(const std::vector<std::vector<UserId>>& membership, std::span<const double> beta_magnitudes) {
  ClusterPlan plan;
  plan.ordering_basis = OrderingBasis::large_scale_gain;
  for (const auto& cluster : membership) {
    if (cluster.empty()) throw ConfigError("cluster " + std::to_string(plan.assignments.size() + 1) + " is empty");
    std::vector<UserGain> gains;
    for (UserId u : cluster) {
      if (u.value >= beta_magnitudes.size()) throw ConfigError("cluster references unknown user " + std::to_string(u.value));
      gains.push_back({u, beta_magnitudes[u.value]});
    }
    plan.assignments.push_back(order_by_gain(gains));
    plan.anchors.push_back(plan.assignments.back().front());
  }
  plan.validate(beta_magnitudes.size());
  return plan;
}

/// Re-sorts every cluster by effective-channel norm. The beam anchors are
/// carried over; a cluster whose anchor loses position 0 is reported by
/// `ClusterPlan::anchor_demoted` and keeps the norm ordering.
inline ClusterPlan reorder_by_effective_norm(const EffectiveChannelSet& effective, const ClusterPlan& plan) {
  ClusterPlan out = plan;
  out.ordering_basis = OrderingBasis::effective_norm;
  if (out.anchors.empty())
    for (std::size_t n = 0; n < plan.num_clusters(); ++n) out.anchors.push_back(plan.first_user(n));
  for (auto& cluster : out.assignments) {
    std::vector<UserGain> gains;
    for (UserId u : cluster) gains.push_back({u, effective.norm(u)});
    cluster = order_by_gain(gains);
  }
  return out;
}

/// P_{n,m} indexed [cluster][SIC position]; noise power is 1, so the total
/// power equals the linear SNR.
struct PowerPlan {
  double total_power = 0.0;
  double cluster_power = 0.0;
  std::vector<std::vector<double>> user_powers;

  double at(SicPosition pos) const { return user_powers.at(pos.cluster).at(pos.position); }

  double sum() const {
    double s = 0.0;
    for (const auto& c : user_powers)
      for (double p : c) s += p;
    return s;
  }

  /// Sum of the powers of positions 0..m-1 in cluster n.
  double stronger_sum(SicPosition pos) const {
    double s = 0.0;
    for (std::size_t k = 0; k < pos.position; ++k) s += user_powers.at(pos.cluster).at(k);
    return s;
  }
};

/// Geometric split with ratio 3: f_m = 2 * 3^(m-1) / (3^M - 1). M = 2 gives (1/4, 3/4).
inline std::vector<double> default_intra_fractions(std::size_t users_per_cluster) {
  if (users_per_cluster == 0) throw ConfigError("clusters need at least one user");
  const double denom = std::pow(3.0, static_cast<double>(users_per_cluster)) - 1.0;
  std::vector<double> f(users_per_cluster);
  for (std::size_t m = 0; m < users_per_cluster; ++m) f[m] = 2.0 * std::pow(3.0, static_cast<double>(m)) / denom;
  return f;
}

inline void validate_intra_fractions(std::span<const double> fractions) {
  if (fractions.empty()) throw ConfigError("intra-cluster fractions are empty");
  double sum = 0.0;
  for (std::size_t m = 0; m < fractions.size(); ++m) {
    if (!(fractions[m] > 0.0)) throw ConfigError("intra-cluster fractions must be positive");
    if (m > 0 && fractions[m] < fractions[m - 1])
      throw ConfigError("intra-cluster fractions must be nondecreasing in SIC position");
    sum += fractions[m];
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("intra-cluster fractions sum to " + std::to_string(sum) + ", not 1");
}

/// Equal split across clusters, then the fixed fraction vector inside each.
inline PowerPlan allocate_power(const ClusterPlan& plan, double total_power, std::span<const double> intra_fractions) {
  if (!(total_power > 0.0) || !std::isfinite(total_power)) throw ConfigError("total power must be positive and finite");
  validate_intra_fractions(intra_fractions);
  PowerPlan out;
  out.total_power = total_power;
  out.cluster_power = total_power / static_cast<double>(plan.num_clusters());
  for (const auto& cluster : plan.assignments) {
    if (cluster.size() != intra_fractions.size())
      throw ConfigError("cluster has " + std::to_string(cluster.size()) + " users but " +
                        std::to_string(intra_fractions.size()) + " power fractions were given");
    std::vector<double> p(cluster.size());
    for (std::size_t m = 0; m < cluster.size(); ++m) p[m] = intra_fractions[m] * out.cluster_power;
    out.user_powers.push_back(std::move(p));
  }
  return out;
}

}  // namespace hbnoma
