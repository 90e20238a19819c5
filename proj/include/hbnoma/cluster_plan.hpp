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

#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hbnoma/errors.hpp"

namespace hbnoma {

/// Index of a user in the flat per-user channel list.
struct UserId {
  std::size_t value = 0;
  auto operator<=>(const UserId&) const = default;
};

/// Cluster index n and SIC position m (both 0-based; position 0 is MU-(n,1)).
struct SicPosition {
  std::size_t cluster = 0;
  std::size_t position = 0;
  auto operator<=>(const SicPosition&) const = default;
};

enum class OrderingBasis { large_scale_gain, effective_norm };

/// User-to-cluster assignment plus the SIC decoding order inside each cluster.
///
/// `assignments[n]` lists the users of cluster n in SIC order. `anchors[n]`
/// is the user whose steering vector forms column n of the analog precoder;
/// it is fixed when the plan is first ordered by gain and is kept by later
/// reorderings, even if a reordering moves it away from position 0.
struct ClusterPlan {
  std::vector<std::vector<UserId>> assignments;
  std::vector<UserId> anchors;
  OrderingBasis ordering_basis = OrderingBasis::large_scale_gain;

  std::size_t num_clusters() const noexcept { return assignments.size(); }
  std::size_t users_per_cluster() const noexcept { return assignments.empty() ? 0 : assignments.front().size(); }
  std::size_t num_users() const noexcept {
    std::size_t n = 0;
    for (const auto& c : assignments) n += c.size();
    return n;
  }

  UserId first_user(std::size_t cluster) const { return assignments.at(cluster).front(); }
  UserId at(SicPosition pos) const { return assignments.at(pos.cluster).at(pos.position); }

  std::optional<SicPosition> locate(UserId user) const {
    for (std::size_t n = 0; n < assignments.size(); ++n)
      for (std::size_t m = 0; m < assignments[n].size(); ++m)
        if (assignments[n][m] == user) return SicPosition{n, m};
    return std::nullopt;
  }

  // True when a reordering moved the beam anchor of `cluster` off position 0.
  bool anchor_demoted(std::size_t cluster) const { return first_user(cluster) != anchors.at(cluster); }

  /// Every user in [0, num_users) appears exactly once and no cluster is empty.
  void validate(std::size_t total_users) const {
    if (assignments.empty()) throw ConfigError("cluster plan has no clusters");
    std::vector<int> seen(total_users, 0);
    for (std::size_t n = 0; n < assignments.size(); ++n) {
      if (assignments[n].empty()) throw ConfigError("cluster " + std::to_string(n + 1) + " is empty");
      for (UserId u : assignments[n]) {
        if (u.value >= total_users) throw ConfigError("cluster plan references unknown user " + std::to_string(u.value));
        if (seen[u.value]++) throw ConfigError("user " + std::to_string(u.value) + " assigned more than once");
      }
    }
    for (std::size_t u = 0; u < total_users; ++u)
      if (!seen[u]) throw ConfigError("user " + std::to_string(u) + " is not assigned to any cluster");
    if (!anchors.empty() && anchors.size() != assignments.size())
      throw ConfigError("cluster plan anchor count does not match cluster count");
  }
};

}  // namespace hbnoma
