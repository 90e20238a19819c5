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

// Acceptance suite. Runs every acceptance criterion at its stated tolerance
// and runtime limit and prints one PASS/FAIL line per criterion.
//
//   acceptance <path-to-hbnoma-cli> <scratch-dir>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hbnoma/downlink.hpp"
#include "hbnoma/harness/monte_carlo.hpp"
#include "hbnoma/harness/presets.hpp"
#include "oracle.hpp"

namespace {

using namespace hbnoma;
using namespace hbnoma::harness;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0: none stated
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SinglePathChannel channel(double aod_rad, double aoa_rad, cplx g, double db, int t_bs, int t_mu) {
  return {AngleSpec::from_physical(aoa_rad), AngleSpec::from_physical(aod_rad), PathGain(g, db), ArrayGeometry(t_bs),
          ArrayGeometry(t_mu)};
}

// Random physical angles in [-90, 90] deg, pairwise at least `gap_deg` apart.
std::vector<double> separated_angles(std::mt19937_64& rng, std::size_t n, double gap_deg) {
  std::uniform_real_distribution<double> u(-90.0, 90.0);
  for (;;) {
    std::vector<double> a(n);
    for (auto& x : a) x = u(rng);
    std::vector<double> s = a;
    std::sort(s.begin(), s.end());
    bool ok = true;
    for (std::size_t i = 1; i < s.size(); ++i) ok = ok && s[i] - s[i - 1] >= gap_deg;
    if (ok) {
      for (auto& x : a) x = deg_to_rad(x);
      return a;
    }
  }
}

Outcome zf_orthogonality() {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> ang(-kPi / 2, kPi / 2);
  const int sizes[] = {16, 32, 64};
  double worst = 0.0;
  for (int s = 0; s < 500; ++s) {
    const std::size_t n = 2 + static_cast<std::size_t>(s % 3);
    const int t_bs = sizes[(s / 3) % 3];
    const auto aods = separated_angles(rng, n, 10.0);
    std::vector<SinglePathChannel> ch;
    ClusterPlan plan;
    for (std::size_t i = 0; i < n; ++i) {
      ch.push_back(channel(aods[i], ang(rng), {g(rng), g(rng)}, 0.0, t_bs, 4));
      plan.assignments.push_back({UserId{i}});
    }
    const AnalogStage stage = design_analog_stage(ch, plan);
    const EffectiveChannelSet eff = effective_channels(ch, stage.precoder, stage.combiners);
    std::vector<double> gains;
    for (const auto& c : ch) gains.push_back(c.gain.magnitude());
    const BasebandPrecoder bb = zero_forcing_precoder(eff.vectors, stage.precoder, gains, 4);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l)
        if (l != i) worst = std::max(worst, std::abs(eff[UserId{i}].dot(bb.column(l))) / eff.norm(UserId{i}));
  }
  return {worst <= 1e-9, "max relative leakage " + fmt("%.3g", worst) + " (limit 1e-9)"};
}

Outcome norm_identity() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> ang(-kPi / 2, kPi / 2);
  std::uniform_int_distribution<int> tdist(1, 128);
  std::uniform_int_distribution<int> ndist(1, 4);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  double worst = 0.0;
  for (int d = 0; d < 10000; ++d) {
    const int t = tdist(rng);
    const int t_mu = 1 + d % 8;
    const int n = ndist(rng);
    AnalogPrecoder p;
    p.matrix.resize(t, n);
    std::vector<double> anchors;
    for (int l = 0; l < n; ++l) {
      anchors.push_back(std::sin(ang(rng)));
      p.matrix.col(l) = steering_vector(anchors.back(), t);
    }
    const SinglePathChannel u = channel(ang(rng), ang(rng), {g(rng), g(rng)}, -5.0, t, t_mu);
    const std::vector<SinglePathChannel> one{u};
    const std::vector<AnalogCombiner> w{{steering_vector(u.aoa, u.mu_array)}};
    const double direct = std::pow(effective_channels(one, p, w).norm(UserId{0}), 2);
    double ks = 0.0;
    for (double a : anchors) ks += fejer_correlation(a - u.aod.normalized(), t);
    const double closed = double(t) * t_mu * std::norm(u.beta()) * ks;
    const double scale = std::max(direct, closed);
    if (scale > 0.0) worst = std::max(worst, std::abs(direct - closed) / scale);
  }
  return {worst <= 1e-10, "max relative error " + fmt("%.3g", worst) + " (limit 1e-10)"};
}

Outcome fig3_reproduction() {
  const auto rows = sweep_fig3(fig3_config());
  double rho0 = -1.0, min_center = 2.0;
  for (const auto& r : rows) {
    if (r.aod_deg == 0.0) rho0 = r.rho;
    if (std::abs(r.aod_deg) <= 7.0) min_center = std::min(min_center, r.rho);
  }
  std::vector<std::pair<double, double>> minima;  // (rho, aod)
  for (std::size_t i = 1; i + 1 < rows.size(); ++i)
    if (rows[i].rho < rows[i - 1].rho && rows[i].rho <= rows[i + 1].rho) minima.emplace_back(rows[i].rho, rows[i].aod_deg);
  std::sort(minima.begin(), minima.end());
  bool minima_ok = minima.size() >= 2;
  std::vector<double> where;
  if (minima_ok) {
    where = {minima[0].second, minima[1].second};
    std::sort(where.begin(), where.end());
    minima_ok = std::abs(where[0] + 40.0) <= 3.0 && std::abs(where[1] - 40.0) <= 3.0;
  }
  const bool pass = rho0 >= 1.0 - 1e-9 && min_center > 0.95 && minima_ok;
  std::string d = "rho(0)=" + fmt("%.12g", rho0) + ", min rho on [-7,7]=" + fmt("%.4f", min_center);
  if (where.size() == 2) d += ", lowest minima at " + fmt("%.1f", where[0]) + " and " + fmt("%.1f", where[1]) + " deg";
  return {pass, d};
}

Outcome fig2_reproduction() {
  Fig2Options opt;
  opt.snr_db = {5.0};
  opt.trials = 1000;
  const RunManifest m = sweep_fig2(fig2_config(opt));
  const auto& rows = m.sweep_rows;
  double worst_gap = -1e9;
  std::vector<double> rho, rate;
  for (const auto& r : rows) {
    worst_gap = std::max(worst_gap, r.rate_bound_bps_hz - r.rate_sim_bps_hz);
    rho.push_back(r.rho);
    rate.push_back(r.rate_sim_bps_hz);
  }
  const auto endpoint = std::max_element(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.rho < b.rho; });
  const auto near92 = std::min_element(rows.begin(), rows.end(), [](auto& a, auto& b) {
    return std::abs(a.rho - 0.92) < std::abs(b.rho - 0.92);
  });
  const double drop = endpoint->rate_sim_bps_hz - near92->rate_sim_bps_hz;
  const double sp = spearman(rho, rate);
  const bool a = worst_gap <= 0.1, b = std::abs(drop - 1.0) <= 0.5, c = sp >= 0.9;
  return {a && b && c, "(a) max bound-sim " + fmt("%.3f", worst_gap) + (a ? " ok" : " FAIL") + "; (b) rho " +
                           fmt("%.3f", near92->rho) + " vs " + fmt("%.3f", endpoint->rho) + " drop " + fmt("%.3f", drop) +
                           (b ? " ok" : " FAIL") + "; (c) spearman " + fmt("%.3f", sp) + (c ? " ok" : " FAIL")};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> ang(-kPi / 2, kPi / 2);
  std::uniform_int_distribution<int> small(1, 3);
  std::uniform_int_distribution<int> tdist(2, 16);
  std::uniform_real_distribution<double> db(-20.0, 0.0);
  std::uniform_real_distribution<double> snr(-5.0, 20.0);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  double worst = 0.0;
  int done = 0, skipped = 0;
  while (done < 1000) {
    const int n = small(rng), m = small(rng), t_bs = tdist(rng), t_mu = small(rng) + 1;
    DownlinkScenario s;
    oracle::Scenario o;
    o.t_bs = t_bs;
    o.t_mu = t_mu;
    s.total_power = o.total_power = std::pow(10.0, snr(rng) / 10.0);
    s.intra_fractions = o.fractions = default_intra_fractions(static_cast<std::size_t>(m));
    for (int c = 0; c < n; ++c) {
      s.clusters.emplace_back();
      o.clusters.emplace_back();
      for (int k = 0; k < m; ++k) {
        const double aod = ang(rng), aoa = ang(rng);
        s.clusters.back().push_back(UserId{s.channels.size()});
        s.channels.push_back(channel(aod, aoa, {g(rng), g(rng)}, db(rng), t_bs, t_mu));
        o.clusters.back().push_back({aod, aoa, s.channels.back().beta()});
      }
    }
    DownlinkResult r;
    try {
      r = evaluate_downlink(s);
    } catch (const SingularClusteringError&) {
      ++skipped;
      continue;
    }
    const oracle::Outcome ref = oracle::evaluate(o);
    for (int c = 0; c < n; ++c)
      for (int k = 0; k < m; ++k) {
        const double want = ref.rate[c][k];
        const double got = r.user(UserId{static_cast<std::size_t>(c * m + k)}).rate.rate_bps_hz;
        worst = std::max(worst, std::abs(got - want) / std::max(std::abs(want), 1e-300));
      }
    ++done;
  }
  return {worst <= 1e-10, "max relative error " + fmt("%.3g", worst) + " over 1000 scenarios (" +
                              std::to_string(skipped) + " singular draws replaced)"};
}

Outcome decomposition_identity() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> ang(-kPi / 2, kPi / 2);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::uniform_int_distribution<int> ndist(2, 4);
  double worst_residual = 0.0, worst_leak = 0.0;
  std::size_t pairs = 0, leak_checks = 0;
  while (pairs < 10000) {
    const int n = ndist(rng);
    DownlinkScenario s;
    s.total_power = 3.0;
    for (int c = 0; c < n; ++c) {
      s.clusters.emplace_back();
      for (int k = 0; k < 2; ++k) {
        s.clusters.back().push_back(UserId{s.channels.size()});
        s.channels.push_back(channel(ang(rng), ang(rng), {g(rng), g(rng)}, -10.0 * k, 16, 4));
      }
    }
    DownlinkResult r;
    try {
      r = evaluate_downlink(s);
    } catch (const SingularClusteringError&) {
      continue;
    }
    for (std::size_t c = 0; c < static_cast<std::size_t>(n); ++c) {
      const UserId anchor = r.plan.anchors[c];
      for (UserId u : r.plan.assignments[c]) {
        if (u == anchor || !(r.effective.norm(u) > 0.0)) continue;
        const CVector& hm = r.effective[u];
        const CVector& h1 = r.effective[anchor];
        const CorrelationReport rep = hermitian_correlation(hm, h1);
        worst_residual = std::max(worst_residual, decompose_effective_channel(rep, hm, h1));
        ++pairs;
        if (!(rep.rho < 1.0 - 1e-6)) continue;
        for (std::size_t l = 0; l < static_cast<std::size_t>(n); ++l) {
          if (l == c) continue;
          const double direct = std::norm(hm.dot(r.baseband.column(l)));
          const double via = (1.0 - rep.rho * rep.rho) * hm.squaredNorm() * std::norm(rep.residual.dot(r.baseband.column(l)));
          const double scale = std::max(direct, via);
          if (scale > 0.0) worst_leak = std::max(worst_leak, std::abs(direct - via) / scale);
          ++leak_checks;
        }
      }
    }
  }
  return {worst_residual <= 1e-10 && worst_leak <= 1e-8,
          "max residual " + fmt("%.3g", worst_residual) + " over " + std::to_string(pairs) +
              " pairs (limit 1e-10); max leakage identity error " + fmt("%.3g", worst_leak) + " over " +
              std::to_string(leak_checks) + " checks (limit 1e-8)"};
}

Outcome bound_validity() {
  ScenarioConfig cfg;
  cfg.bs_antennas = 16;
  cfg.mu_antennas = 4;
  cfg.snr_db = {5.0};
  cfg.intra_fractions = {0.25, 0.75};
  cfg.seed = 707;
  cfg.trials = 2000;
  UserConfig first, second;
  second.large_scale_db = -10.0;
  cfg.clusters = {ClusterConfig{{first, second}}, ClusterConfig{{first, second}}};
  const RunManifest m = run_scenario(cfg);
  const BoundCheck& b = m.bound_check;
  const bool pass = b.violation_rate() <= 0.05 && b.max_excess <= 0.1;
  return {pass, "violation rate " + fmt("%.4f", b.violation_rate()) + " (" + std::to_string(b.violations) + "/" +
                    std::to_string(b.evaluated) + ", limit 0.05), max excess " + fmt("%.4f", b.max_excess) +
                    " bit/s/Hz (limit 0.1)"};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism(const std::string& cli, const std::string& dir) {
  const std::string a = dir + "/fig3_a.csv", b = dir + "/fig3_b.csv";
  for (const auto& out : {a, b}) {
    const int status = std::system((cli + " fig3 --seed 17 --out " + out).c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "hbnoma fig3 failed"};
  }
  const std::string x = read_file(a), y = read_file(b);
  return {!x.empty() && x == y, std::to_string(x.size()) + " bytes, " + (x == y ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: acceptance <hbnoma-cli> <scratch-dir>\n");
    return 2;
  }
  const std::string cli = argv[1], dir = argv[2];
  const std::vector<Criterion> criteria{
      {1, "ZF orthogonality", 10.0, zf_orthogonality},
      {2, "closed-form norm identity", 5.0, norm_identity},
      {3, "correlation-vs-AoD curve", 5.0, fig3_reproduction},
      {4, "rate-vs-correlation sweep", 120.0, fig2_reproduction},
      {5, "oracle equivalence", 30.0, oracle_equivalence},
      {6, "effective-channel decomposition", 0.0, decomposition_identity},
      {7, "bound validity statistics", 0.0, bound_validity},
      {8, "fig3 determinism", 0.0, [&] { return cli_determinism(cli, dir); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit_s <= 0.0 || secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("[%s] criterion %d %s: %s; %.2f s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(),
                secs, in_time ? "" : fmt(" exceeds %.0f s limit", c.time_limit_s).c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
