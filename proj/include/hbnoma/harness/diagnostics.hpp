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

// Constraint diagnostics for one realization of a scenario (the `validate`
// subcommand).

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hbnoma/downlink.hpp"
#include "hbnoma/harness/config.hpp"
#include "hbnoma/harness/monte_carlo.hpp"

namespace hbnoma::harness {

struct ValidationReport {
  PowerDiagnostics power;
  double max_first_user_leakage = 0.0;  // max_{l != n} |h_bar_{n,1}^H f^l| / ||h_bar_{n,1}||
  double power_budget_sum = 0.0;
  double total_power = 0.0;
  std::vector<std::size_t> demoted_clusters;

  bool ok(double tol = 1e-9) const {
    return power.ok(tol) && max_first_user_leakage <= tol &&
           std::abs(power_budget_sum - total_power) <= 1e-12 * std::max(1.0, total_power);
  }

  std::string describe() const {
    std::ostringstream out;
    out.precision(6);
    out << "frobenius_sq          " << power.frobenius_sq << " (target " << power.num_streams << ")\n";
    out << "max_modulus_deviation " << power.max_modulus_deviation << "\n";
    out << "column_norms         ";
    for (double c : power.column_norms) out << ' ' << c;
    out << "\nmax_zf_leakage        " << max_first_user_leakage << "\n";
    out << "power_sum             " << power_budget_sum << " (budget " << total_power << ")\n";
    for (std::size_t n : demoted_clusters)
      out << "note: cluster " << n + 1 << " anchor is not the strongest effective channel\n";
    out << (ok() ? "constraints OK\n" : "constraint violation\n");
    return out.str();
  }
};

inline ValidationReport diagnose(const DownlinkResult& r) {
  ValidationReport rep;
  rep.power = power_constraint_check(r.analog.precoder, r.baseband);
  for (std::size_t n = 0; n < r.plan.num_clusters(); ++n) {
    const CVector& h = r.effective[r.plan.anchors[n]];
    for (std::size_t l = 0; l < r.plan.num_clusters(); ++l)
      if (l != n)
        rep.max_first_user_leakage =
            std::max(rep.max_first_user_leakage, std::abs(h.dot(r.baseband.column(l))) / h.norm());
    if (r.plan.anchor_demoted(n)) rep.demoted_clusters.push_back(n);
  }
  rep.power_budget_sum = r.powers.sum();
  rep.total_power = r.powers.total_power;
  return rep;
}

/// Diagnostics for trial 0 of the first SNR point.
inline ValidationReport validate_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  std::mt19937_64 rng(trial_seed(cfg.seed, 0));
  return diagnose(evaluate_downlink(draw_scenario(cfg, cfg.snr_db.front(), {}, rng)));
}

}  // namespace hbnoma::harness
