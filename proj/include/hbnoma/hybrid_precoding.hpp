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

// Analog beam steering, effective channels and the zero-forcing baseband
// precoder of the hybrid transmitter.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hbnoma/array_channel.hpp"
#include "hbnoma/cluster_plan.hpp"
#include "hbnoma/errors.hpp"

namespace hbnoma {

/// F_RF: one unit-modulus column (modulus 1/sqrt(T_BS)) per RF chain.
struct AnalogPrecoder {
  CMatrix matrix;  // T_BS x N

  int num_antennas() const noexcept { return static_cast<int>(matrix.rows()); }
  std::size_t num_rf_chains() const noexcept { return static_cast<std::size_t>(matrix.cols()); }
  CMatrix gram() const { return matrix.adjoint() * matrix; }
};

struct AnalogCombiner {
  CVector vector;  // T_MU
};

struct AnalogStage {
  AnalogPrecoder precoder;
  std::vector<AnalogCombiner> combiners;  // indexed by UserId
};

/// h_bar per user, stored as the column vector whose adjoint is w^H H F_RF.
struct EffectiveChannelSet {
  std::vector<CVector> vectors;
  std::vector<double> norms;

  const CVector& operator[](UserId u) const { return vectors.at(u.value); }
  double norm(UserId u) const { return norms.at(u.value); }
  std::size_t size() const noexcept { return vectors.size(); }
};

/// F_BB with columns f^n scaled so that ||F_RF f^n|| = 1. `lambda_diag`
/// holds the diagonal of the ZF power-loading matrix for the analytic bound.
struct BasebandPrecoder {
  CMatrix matrix;  // N x N
  Eigen::VectorXd lambda_diag;

  std::size_t num_streams() const noexcept { return static_cast<std::size_t>(matrix.cols()); }
  Eigen::Ref<const CVector> column(std::size_t n) const { return matrix.col(static_cast<Eigen::Index>(n)); }
};

/// Matched analog combiners for every user and one BS beam per cluster,
/// steered at that cluster's anchor (the strongest user).
inline AnalogStage design_analog_stage(std::span<const SinglePathChannel> channels, const ClusterPlan& plan) {
  if (channels.empty()) throw ConfigError("no users to serve");
  plan.validate(channels.size());
  const int t_bs = channels.front().bs_array.num_elements();

  AnalogStage stage;
  stage.precoder.matrix.resize(t_bs, static_cast<Eigen::Index>(plan.num_clusters()));
  for (std::size_t n = 0; n < plan.num_clusters(); ++n) {
    const UserId anchor = plan.anchors.empty() ? plan.first_user(n) : plan.anchors[n];
    const auto& ch = channels[anchor.value];
    stage.precoder.matrix.col(static_cast<Eigen::Index>(n)) = steering_vector(ch.aod, ch.bs_array);
  }

  stage.combiners.reserve(channels.size());
  for (const auto& ch : channels) {
    if (ch.bs_array.num_elements() != t_bs) throw StructuralError("users disagree on the BS array size");
    stage.combiners.push_back({steering_vector(ch.aoa, ch.mu_array)});
  }
  return stage;
}

/// h_bar^H = w^H H F_RF for every user.
inline EffectiveChannelSet effective_channels(std::span<const SinglePathChannel> channels,
                                              const AnalogPrecoder& precoder,
                                              std::span<const AnalogCombiner> combiners) {
  if (combiners.size() != channels.size())
    throw StructuralError("combiner count " + std::to_string(combiners.size()) + " != user count " +
                          std::to_string(channels.size()));
  EffectiveChannelSet out;
  out.vectors.reserve(channels.size());
  out.norms.reserve(channels.size());
  for (std::size_t u = 0; u < channels.size(); ++u) {
    const CMatrix h = channel_matrix(channels[u]);
    if (h.cols() != precoder.matrix.rows())
      throw StructuralError("channel of user " + std::to_string(u) + " has " + std::to_string(h.cols()) +
                            " BS antennas, precoder has " + std::to_string(precoder.matrix.rows()));
    if (h.rows() != combiners[u].vector.size())
      throw StructuralError("combiner of user " + std::to_string(u) + " does not match its array size");
    CVector hbar = (combiners[u].vector.adjoint() * h * precoder.matrix).adjoint();
    out.norms.push_back(hbar.norm());
    out.vectors.push_back(std::move(hbar));
  }
  return out;
}

inline constexpr double kMaxGramCondition = 1e12;

/// Zero-forcing baseband precoder nulling inter-cluster leakage onto the
/// first users. Equivalent to H^H (H H^H)^-1 for the square row-stacked
/// effective channel H, evaluated through a pivoted QR of the row-normalized
/// matrix; each column is then scaled to unit radiated power.
inline BasebandPrecoder zero_forcing_precoder(std::span<const CVector> first_user_channels,
                                              const AnalogPrecoder& precoder,
                                              std::span<const double> first_user_gains,
                                              int mu_antennas) {
  const auto n = static_cast<Eigen::Index>(first_user_channels.size());
  if (n == 0) throw StructuralError("zero-forcing needs at least one cluster");
  if (static_cast<std::size_t>(n) != precoder.num_rf_chains() || first_user_gains.size() != first_user_channels.size())
    throw StructuralError("zero-forcing inputs disagree on the number of clusters");

  CMatrix rows(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const CVector& h = first_user_channels[static_cast<std::size_t>(i)];
    if (h.size() != n) throw StructuralError("effective channel length differs from the number of RF chains");
    const double norm = h.norm();
    if (!(norm > 0.0)) throw SingularClusteringError(static_cast<std::size_t>(i), static_cast<std::size_t>(i), INFINITY);
    rows.row(i) = h.adjoint() / norm;
  }

  const CMatrix gram = rows * rows.adjoint();
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  const double condition = lmin > 0.0 ? lmax / lmin : INFINITY;
  if (!(condition <= kMaxGramCondition)) {
    std::size_t a = 0, b = n > 1 ? 1 : 0;
    double worst = -1.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        if (std::abs(gram(i, j)) > worst) {
          worst = std::abs(gram(i, j));
          a = static_cast<std::size_t>(i);
          b = static_cast<std::size_t>(j);
        }
    throw SingularClusteringError(a, b, condition);
  }

  BasebandPrecoder out;
  out.matrix = rows.colPivHouseholderQr().solve(CMatrix::Identity(n, n));
  for (Eigen::Index c = 0; c < n; ++c) {
    const double radiated = (precoder.matrix * out.matrix.col(c)).norm();
    out.matrix.col(c) /= radiated;
  }

  const CMatrix gram_inv = precoder.gram().ldlt().solve(CMatrix::Identity(n, n));
  const double t_product = static_cast<double>(precoder.num_antennas()) * mu_antennas;
  out.lambda_diag.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out.lambda_diag[i] = std::sqrt(t_product / gram_inv(i, i).real()) * first_user_gains[static_cast<std::size_t>(i)];
  return out;
}

struct PowerDiagnostics {
  double frobenius_sq = 0.0;          // ||F_RF F_BB||_F^2
  double max_modulus_deviation = 0.0; // max | |F_RF(i,j)| - 1/sqrt(T_BS) |
  std::vector<double> column_norms;   // ||F_RF f^n||
  std::size_t num_streams = 0;

  bool modulus_ok(double tol = 1e-9) const { return max_modulus_deviation <= tol; }
  bool power_ok(double tol = 1e-9) const {
    return std::abs(frobenius_sq - static_cast<double>(num_streams)) <= tol * std::max<double>(1.0, num_streams);
  }
  bool ok(double tol = 1e-9) const { return modulus_ok(tol) && power_ok(tol); }
};

inline PowerDiagnostics power_constraint_check(const AnalogPrecoder& precoder, const BasebandPrecoder& baseband) {
  PowerDiagnostics d;
  d.num_streams = baseband.num_streams();
  const CMatrix combined = precoder.matrix * baseband.matrix;
  d.frobenius_sq = combined.squaredNorm();
  const double target = 1.0 / std::sqrt(static_cast<double>(precoder.num_antennas()));
  d.max_modulus_deviation = (precoder.matrix.array().abs() - target).abs().maxCoeff();
  for (Eigen::Index c = 0; c < combined.cols(); ++c) d.column_norms.push_back(combined.col(c).norm());
  return d;
}

}  // namespace hbnoma
