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

// One complete downlink evaluation: gain ordering, analog stage, zero-forcing
// baseband, effective-norm reordering, power split, rates and rate bounds.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hbnoma/array_channel.hpp"
#include "hbnoma/bound_analysis.hpp"
#include "hbnoma/cluster_plan.hpp"
#include "hbnoma/hybrid_precoding.hpp"
#include "hbnoma/noma_power.hpp"
#include "hbnoma/rate_engine.hpp"

namespace hbnoma {

struct DownlinkScenario {
  std::vector<SinglePathChannel> channels;          // indexed by UserId
  std::vector<std::vector<UserId>> clusters;        // membership, any order
  double total_power = 1.0;                         // linear SNR
  std::vector<double> intra_fractions;              // empty: geometric default
};

struct UserEvaluation {
  RateBreakdown rate;
  double rho = 1.0;                                 // vs the cluster's beam anchor
  std::optional<BoundComponents> bound;             // set for SIC positions > 0
};

struct DownlinkResult {
  ClusterPlan gain_plan;
  ClusterPlan plan;
  AnalogStage analog;
  EffectiveChannelSet effective;
  BasebandPrecoder baseband;
  PowerPlan powers;
  double eta = 1.0;
  std::vector<UserEvaluation> users;                // indexed by UserId
  double sum_rate_bps_hz = 0.0;

  LinkView link() const { return {effective, baseband, plan, powers}; }
  const UserEvaluation& user(UserId u) const { return users.at(u.value); }
};

inline DownlinkResult evaluate_downlink(const DownlinkScenario& scenario) {
  const auto& channels = scenario.channels;
  if (channels.empty()) throw ConfigError("scenario has no users");
  const int t_bs = channels.front().bs_array.num_elements();
  const int t_mu = channels.front().mu_array.num_elements();

  std::vector<double> beta_mag;
  beta_mag.reserve(channels.size());
  for (const auto& ch : channels) beta_mag.push_back(ch.gain.magnitude());

  DownlinkResult r;
  r.gain_plan = plan_by_gain(scenario.clusters, beta_mag);
  const std::size_t num_clusters = r.gain_plan.num_clusters();

  r.analog = design_analog_stage(channels, r.gain_plan);
  r.effective = effective_channels(channels, r.analog.precoder, r.analog.combiners);

  std::vector<CVector> anchor_channels;
  std::vector<double> anchor_gains;
  std::vector<double> anchor_aods;
  for (UserId a : r.gain_plan.anchors) {
    anchor_channels.push_back(r.effective[a]);
    anchor_gains.push_back(beta_mag[a.value]);
    anchor_aods.push_back(channels[a.value].aod.normalized());
  }
  r.baseband = zero_forcing_precoder(anchor_channels, r.analog.precoder, anchor_gains, t_mu);

  r.plan = reorder_by_effective_norm(r.effective, r.gain_plan);
  const std::vector<double> fractions = scenario.intra_fractions.empty()
                                            ? default_intra_fractions(r.plan.users_per_cluster())
                                            : scenario.intra_fractions;
  r.powers = allocate_power(r.plan, scenario.total_power, fractions);
  r.eta = eta_factor(r.analog.precoder);

  const LinkView link = r.link();
  r.users.resize(channels.size());
  std::vector<double> lambda_s(num_clusters);
  for (std::size_t n = 0; n < num_clusters; ++n) lambda_s[n] = lambda_max_without_column(r.baseband, n);

  for (std::size_t n = 0; n < num_clusters; ++n) {
    const UserId anchor = r.plan.anchors[n];
    const double k_anchor = kernel_sum(anchor_aods, channels[anchor.value].aod.normalized(), t_bs);
    for (std::size_t m = 0; m < r.plan.assignments[n].size(); ++m) {
      const SicPosition pos{n, m};
      UserEvaluation eval;
      eval.rate = user_rate(link, pos);
      const UserId u = eval.rate.user;
      const bool zero_channel = !(r.effective.norm(u) > 0.0);
      if (u == anchor) {
        eval.rho = 1.0;
      } else {
        eval.rho = zero_channel ? 0.0 : hermitian_correlation(r.effective[u], r.effective[anchor]).rho;
      }

      if (m == 0) {
        eval.rate.lower_bound_bps_hz = eval.rate.rate_bps_hz;
      } else if (zero_channel) {
        eval.rate.lower_bound_bps_hz = 0.0;
      } else {
        BoundInputs in;
        in.rho = eval.rho;
        in.user_power = r.powers.at(pos);
        in.stronger_power = r.powers.stronger_sum(pos);
        in.cluster_power = r.powers.cluster_power;
        in.beta_magnitude = beta_mag[u.value];
        in.bs_antennas = t_bs;
        in.mu_antennas = t_mu;
        in.lambda_max_s = lambda_s[n];
        in.eta = r.eta;
        in.kernel_sum_anchor = k_anchor;
        in.kernel_sum_user = kernel_sum(anchor_aods, channels[u.value].aod.normalized(), t_bs);
        eval.bound = bound_components(in);
        eval.rate.lower_bound_bps_hz = eval.bound->rate_bps_hz();
      }
      r.sum_rate_bps_hz += eval.rate.rate_bps_hz;
      r.users[u.value] = std::move(eval);
    }
  }
  return r;
}

}  // namespace hbnoma
