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

// Hermitian-angle correlation between effective channels, the orthogonal
// decomposition of a user's effective channel against its cluster anchor,
// and the imperfect-correlation rate lower bound.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>

#include "hbnoma/array_channel.hpp"
#include "hbnoma/errors.hpp"
#include "hbnoma/hybrid_precoding.hpp"

namespace hbnoma {

/// rho = |h~_m^H h~_1| with h~ = h / ||h||, plus the unit residual of h~_m
/// orthogonal to h~_1.
struct CorrelationReport {
  double rho = 0.0;
  double pseudo_angle = 0.0;  // arg(h~_m^H h~_1); not used by the bound
  CVector residual;           // varpi; zero when rho == 1
  bool residual_defined = false;
};

inline constexpr double kUnitCorrelationTol = 1e-12;

inline CorrelationReport hermitian_correlation(const CVector& hm, const CVector& h1) {
  if (hm.size() != h1.size()) throw StructuralError("effective channels differ in length");
  const double nm = hm.norm();
  const double n1 = h1.norm();
  if (!(nm > 0.0) || !(n1 > 0.0)) throw DomainError("correlation of a zero effective channel is undefined");
  const CVector um = hm / nm;
  const CVector u1 = h1 / n1;

  CorrelationReport out;
  const cplx inner = um.dot(u1);  // h~_m^H h~_1
  out.rho = std::min(std::abs(inner), 1.0);
  out.pseudo_angle = std::arg(inner);

  out.residual = CVector::Zero(hm.size());
  if (out.rho >= 1.0 - kUnitCorrelationTol) {
    out.rho = 1.0;
    return out;
  }
  const CVector orth = um - u1.dot(um) * u1;
  const double orth_norm = orth.norm();
  if (orth_norm > 0.0) {
    out.residual = orth / orth_norm;
    out.residual_defined = true;
  } else {
    out.rho = 1.0;
  }
  return out;
}

/// || h~_m - c1 h~_1 - c2 varpi ||, where c1 = rho e^{j w} and
/// c2 = sqrt(1 - rho^2) e^{j chi} carry the phases of the projections.
inline double decompose_effective_channel(const CorrelationReport& report, const CVector& hm, const CVector& h1) {
  const CVector um = hm / hm.norm();
  const CVector u1 = h1 / h1.norm();
  const cplx along = u1.dot(um);
  const cplx phase1 = std::abs(along) > 0.0 ? along / std::abs(along) : cplx{1.0, 0.0};
  CVector recon = report.rho * phase1 * u1;
  if (report.residual_defined) {
    const cplx across = report.residual.dot(um);
    const cplx phase2 = std::abs(across) > 0.0 ? across / std::abs(across) : cplx{1.0, 0.0};
    recon += std::sqrt(std::max(0.0, 1.0 - report.rho * report.rho)) * phase2 * report.residual;
  }
  return (um - recon).norm();
}

/// Kantorovich factor (kappa + 1/kappa + 2) / 4 of the analog Gram matrix,
/// kappa = lambda_max / lambda_min.
inline double eta_factor(const AnalogPrecoder& precoder) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(precoder.gram(), Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmin > 1e-12 * lmax)) throw DomainError("analog precoder is rank deficient");
  const double kappa = lmax / lmin;
  return 0.25 * (kappa + 1.0 / kappa + 2.0);
}

/// sum_l K_T(anchor_l - user_aod); includes K_T(0) = 1 for an anchor itself.
inline double kernel_sum(std::span<const double> anchor_aods, double user_aod, int num_elements) {
  double s = 0.0;
  for (double a : anchor_aods) s += fejer_correlation(a - user_aod, num_elements);
  return s;
}

/// lambda_max(F_BB^{-n} F_BB^{-n H}) with column n removed; 0 for a single stream.
inline double lambda_max_without_column(const BasebandPrecoder& baseband, std::size_t n) {
  const auto cols = baseband.matrix.cols();
  if (cols <= 1) return 0.0;
  CMatrix reduced(baseband.matrix.rows(), cols - 1);
  for (Eigen::Index c = 0, k = 0; c < cols; ++c)
    if (c != static_cast<Eigen::Index>(n)) reduced.col(k++) = baseband.matrix.col(c);
  const Eigen::JacobiSVD<CMatrix> svd(reduced);
  const double s = svd.singularValues()(0);
  return s * s;
}

struct BoundInputs {
  double rho = 1.0;
  double user_power = 0.0;        // P_{n,m}
  double stronger_power = 0.0;    // sum_{k<m} P_{n,k}
  double cluster_power = 0.0;     // P_c
  double beta_magnitude = 0.0;    // |beta_{n,m}|
  int bs_antennas = 1;
  int mu_antennas = 1;
  double lambda_max_s = 0.0;
  double eta = 1.0;
  double kernel_sum_anchor = 1.0; // K_{T,Sigma_1}
  double kernel_sum_user = 1.0;   // K_{T,Sigma_m}
};

struct BoundComponents {
  double signal = 0.0;
  double zeta_intra = 0.0;
  double zeta_inter = 0.0;
  double zeta_noise = 0.0;
  double eta = 1.0;
  double kernel_sum_anchor = 1.0;
  double kernel_sum_user = 1.0;
  double lambda_max_s = 0.0;

  double rate_bps_hz() const { return std::log1p(signal / (zeta_intra + zeta_inter + zeta_noise)) / std::numbers::ln2; }
};

inline BoundComponents bound_components(const BoundInputs& in) {
  if (!(in.rho >= 0.0 && in.rho <= 1.0)) throw DomainError("correlation factor outside [0, 1]");
  if (!(in.kernel_sum_user > 0.0)) throw DomainError("user kernel sum must be positive");
  const double rho2 = in.rho * in.rho;
  const double array_power = static_cast<double>(in.bs_antennas) * in.mu_antennas * in.beta_magnitude * in.beta_magnitude;
  BoundComponents c;
  c.eta = in.eta;
  c.kernel_sum_anchor = in.kernel_sum_anchor;
  c.kernel_sum_user = in.kernel_sum_user;
  c.lambda_max_s = in.lambda_max_s;
  c.signal = in.user_power * rho2 * array_power;
  c.zeta_intra = in.stronger_power * rho2 * array_power;
  c.zeta_inter = in.cluster_power * (1.0 - rho2) * array_power * in.lambda_max_s * in.eta * in.kernel_sum_anchor;
  c.zeta_noise = in.eta * in.kernel_sum_anchor / in.kernel_sum_user;
  return c;
}

inline double lower_bound_rate(const BoundInputs& in) { return bound_components(in).rate_bps_hz(); }

}  // namespace hbnoma
