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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "hbnoma/noma_power.hpp"

namespace hbnoma {
namespace {

std::vector<UserId> ids(std::initializer_list<std::size_t> v) {
  std::vector<UserId> out;
  for (std::size_t x : v) out.push_back(UserId{x});
  return out;
}

TEST(OrderByGain, DescendingWithIdTieBreak) {
  const std::vector<UserGain> a{{UserId{4}, 0.5}, {UserId{2}, 0.9}};
  EXPECT_EQ(order_by_gain(a), ids({2, 4}));
  const std::vector<UserGain> one{{UserId{7}, 0.1}};
  EXPECT_EQ(order_by_gain(one), ids({7}));
  const std::vector<UserGain> tie{{UserId{3}, 0.7}, {UserId{1}, 0.7}};
  EXPECT_EQ(order_by_gain(tie), ids({1, 3}));
}

TEST(OrderByGain, PermutationInvariant) {
  std::vector<UserGain> g{{UserId{0}, 0.3}, {UserId{1}, 0.8}, {UserId{2}, 0.3}, {UserId{3}, 1.2}, {UserId{4}, 0.05}};
  const auto ref = order_by_gain(g);
  std::mt19937 rng(1);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(g.begin(), g.end(), rng);
    EXPECT_EQ(order_by_gain(g), ref);
  }
}

TEST(PlanByGain, SetsAnchors) {
  const std::vector<double> mags{0.2, 0.9, 0.5, 0.4};
  const ClusterPlan p = plan_by_gain({ids({0, 1}), ids({2, 3})}, mags);
  EXPECT_EQ(p.assignments[0], ids({1, 0}));
  EXPECT_EQ(p.assignments[1], ids({2, 3}));
  EXPECT_EQ(p.anchors, ids({1, 2}));
  EXPECT_THROW(plan_by_gain({ids({0, 1}), ids({1, 2, 3})}, mags), ConfigError);
  EXPECT_THROW(plan_by_gain({ids({0, 1}), ids({2})}, mags), ConfigError);
}

// Two clusters with beams 0.1 apart in normalized angle; the weaker user
// sits between the beams and collects more effective gain than its anchor.
struct SwapFixture {
  std::vector<SinglePathChannel> ch;
  ClusterPlan plan;
  EffectiveChannelSet eff;
  SwapFixture() {
    auto user = [](double aod, double mag) {
      return SinglePathChannel{AngleSpec::from_normalized(0.0), AngleSpec::from_normalized(aod), PathGain(mag, 0.0),
                               ArrayGeometry(16), ArrayGeometry(4)};
    };
    ch = {user(0.0, 1.0), user(0.05, 0.98), user(0.1, 1.0), user(0.1, 0.5)};
    std::vector<double> mags;
    for (const auto& c : ch) mags.push_back(c.gain.magnitude());
    plan = plan_by_gain({ids({0, 1}), ids({2, 3})}, mags);
    const AnalogStage s = design_analog_stage(ch, plan);
    eff = effective_channels(ch, s.precoder, s.combiners);
  }
};

TEST(ReorderByNorm, WeakerGainUserCanOvertake) {
  SwapFixture f;
  EXPECT_NEAR(std::pow(f.eff.norm(UserId{0}), 2), 67.529494394963919, 1e-10);
  EXPECT_NEAR(std::pow(f.eff.norm(UserId{1}), 2), 70.558316481349053, 1e-10);
  const ClusterPlan r = reorder_by_effective_norm(f.eff, f.plan);
  EXPECT_EQ(r.assignments[0], ids({1, 0}));
  EXPECT_EQ(r.assignments[1], ids({2, 3}));
  EXPECT_EQ(r.anchors, f.plan.anchors);
  EXPECT_TRUE(r.anchor_demoted(0));
  EXPECT_FALSE(r.anchor_demoted(1));
  EXPECT_EQ(r.ordering_basis, OrderingBasis::effective_norm);
}

TEST(ReorderByNorm, Idempotent) {
  SwapFixture f;
  const ClusterPlan once = reorder_by_effective_norm(f.eff, f.plan);
  const ClusterPlan twice = reorder_by_effective_norm(f.eff, once);
  EXPECT_EQ(once.assignments, twice.assignments);
  EXPECT_EQ(once.anchors, twice.anchors);
}

TEST(ReorderByNorm, CoLocatedUsersKeepGainOrder) {
  EffectiveChannelSet eff;
  for (double m : {0.9, 0.3, 0.6}) {
    eff.vectors.push_back(CVector::Constant(2, m));
    eff.norms.push_back(eff.vectors.back().norm());
  }
  const ClusterPlan p = plan_by_gain({ids({0, 1, 2})}, std::vector<double>{0.9, 0.3, 0.6});
  EXPECT_EQ(reorder_by_effective_norm(eff, p).assignments, p.assignments);
}

TEST(Fractions, DefaultGeometric) {
  const auto f2 = default_intra_fractions(2);
  EXPECT_NEAR(f2[0], 0.25, 1e-15);
  EXPECT_NEAR(f2[1], 0.75, 1e-15);
  EXPECT_NEAR(default_intra_fractions(1)[0], 1.0, 1e-15);
  const auto f3 = default_intra_fractions(3);
  EXPECT_NEAR(f3[0] + f3[1] + f3[2], 1.0, 1e-15);
  EXPECT_NEAR(f3[1] / f3[0], 3.0, 1e-12);
}

TEST(Fractions, Validation) {
  EXPECT_THROW(validate_intra_fractions(std::vector<double>{0.75, 0.25}), ConfigError);
  EXPECT_THROW(validate_intra_fractions(std::vector<double>{0.3, 0.3}), ConfigError);
  EXPECT_THROW(validate_intra_fractions(std::vector<double>{0.0, 1.0}), ConfigError);
  EXPECT_THROW(validate_intra_fractions(std::vector<double>{}), ConfigError);
  EXPECT_NO_THROW(validate_intra_fractions(std::vector<double>{0.5, 0.5}));
}

TEST(AllocatePower, TwoClustersAtFiveDb) {
  const ClusterPlan p = plan_by_gain({ids({0, 1}), ids({2, 3})}, std::vector<double>{1, 0.3, 1, 0.3});
  const PowerPlan pw = allocate_power(p, 3.1623, std::vector<double>{0.25, 0.75});
  EXPECT_NEAR(pw.cluster_power, 1.58115, 1e-12);
  EXPECT_NEAR(pw.at({0, 0}), 0.3953, 1e-4);
  EXPECT_NEAR(pw.at({1, 1}), 1.1858, 1e-4);
  EXPECT_NEAR(pw.stronger_sum({1, 1}), pw.at({1, 0}), 0.0);
  EXPECT_EQ(pw.stronger_sum({1, 0}), 0.0);
}

TEST(AllocatePower, TrivialSplits) {
  const ClusterPlan single = plan_by_gain({ids({0}), ids({1})}, std::vector<double>{1, 1});
  const PowerPlan a = allocate_power(single, 4.0, std::vector<double>{1.0});
  EXPECT_EQ(a.at({0, 0}), 2.0);
  EXPECT_EQ(a.at({1, 0}), 2.0);
  const ClusterPlan one = plan_by_gain({ids({0, 1})}, std::vector<double>{1, 0.5});
  const PowerPlan b = allocate_power(one, 1.0, std::vector<double>{0.25, 0.75});
  EXPECT_EQ(b.at({0, 0}), 0.25);
  EXPECT_EQ(b.at({0, 1}), 0.75);
}

TEST(AllocatePower, BudgetExactAndMonotone) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pt(0.01, 1000.0);
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t m = 1; m <= 4; ++m) {
      std::vector<std::vector<UserId>> members(n);
      std::vector<double> mags;
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t k = 0; k < m; ++k) {
          members[c].push_back(UserId{mags.size()});
          mags.push_back(1.0 / (1.0 + k));
        }
      const ClusterPlan p = plan_by_gain(members, mags);
      const double total = pt(rng);
      const PowerPlan pw = allocate_power(p, total, default_intra_fractions(m));
      EXPECT_NEAR(pw.sum(), total, 1e-12 * total);
      for (const auto& c : pw.user_powers) {
        EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
        for (double x : c) EXPECT_GT(x, 0.0);
      }
    }
}

TEST(AllocatePower, Rejections) {
  const ClusterPlan p = plan_by_gain({ids({0, 1})}, std::vector<double>{1, 0.5});
  EXPECT_THROW(allocate_power(p, 0.0, std::vector<double>{0.25, 0.75}), ConfigError);
  EXPECT_THROW(allocate_power(p, 1.0, std::vector<double>{1.0}), ConfigError);
  EXPECT_THROW(allocate_power(p, 1.0, std::vector<double>{0.6, 0.4}), ConfigError);
}

}  // namespace
}  // namespace hbnoma
