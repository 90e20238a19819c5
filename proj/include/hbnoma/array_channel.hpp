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

// Uniform linear array steering vectors, single-path mmWave channels and the
// Fejer-kernel beam correlation.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "hbnoma/errors.hpp"

namespace hbnoma {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// ULA description: element count and spacing over wavelength (d / lambda).
class ArrayGeometry {
 public:
  explicit ArrayGeometry(int num_elements, double spacing_ratio = 0.5)
      : num_elements_(num_elements), spacing_ratio_(spacing_ratio) {
    if (num_elements < 1) throw DomainError("array needs at least one element");
    if (!(spacing_ratio > 0.0)) throw DomainError("antenna spacing ratio must be positive");
  }

  int num_elements() const noexcept { return num_elements_; }
  double spacing_ratio() const noexcept { return spacing_ratio_; }

 private:
  int num_elements_;
  double spacing_ratio_;
};

/// Maps a physical angle in [-pi/2, pi/2] to the normalized spatial frequency
/// 2 (d / lambda) sin(angle).
inline double normalized_angle(double physical_rad, double spacing_ratio = 0.5) {
  constexpr double kSlack = 1e-12;
  if (!(std::abs(physical_rad) <= kPi / 2 + kSlack))
    throw DomainError("physical angle " + std::to_string(physical_rad) + " rad outside [-pi/2, pi/2]");
  return 2.0 * spacing_ratio * std::sin(physical_rad);
}

/// A propagation direction, kept both as the physical angle and as the
/// normalized angle used by the array response.
class AngleSpec {
 public:
  static AngleSpec from_physical(double physical_rad, double spacing_ratio = 0.5) {
    return AngleSpec(physical_rad, normalized_angle(physical_rad, spacing_ratio));
  }
  static AngleSpec from_degrees(double deg, double spacing_ratio = 0.5) {
    return from_physical(deg_to_rad(deg), spacing_ratio);
  }
  // Physical angle is recovered assuming half-wavelength spacing.
  static AngleSpec from_normalized(double normalized) {
    if (!(std::abs(normalized) <= 1.0 + 1e-12)) throw DomainError("normalized angle outside [-1, 1]");
    const double clamped = std::clamp(normalized, -1.0, 1.0);
    return AngleSpec(std::asin(clamped), clamped);
  }

  double physical_rad() const noexcept { return physical_; }
  double degrees() const noexcept { return rad_to_deg(physical_); }
  double normalized() const noexcept { return normalized_; }

 private:
  AngleSpec(double physical, double normalized) : physical_(physical), normalized_(normalized) {}
  double physical_;
  double normalized_;
};

/// beta = g * 10^(large_scale_db / 20): small-scale complex gain times the
/// amplitude of the large-scale attenuation D^(-nu).
class PathGain {
 public:
  PathGain(cplx small_scale, double large_scale_db) : small_scale_(small_scale), large_scale_db_(large_scale_db) {}

  static PathGain from_distance(cplx small_scale, double distance_m, double pathloss_exponent) {
    if (!(distance_m > 0.0)) throw DomainError("distance must be positive");
    return PathGain(small_scale, -10.0 * pathloss_exponent * std::log10(distance_m));
  }

  cplx small_scale() const noexcept { return small_scale_; }
  double large_scale_db() const noexcept { return large_scale_db_; }
  cplx beta() const { return small_scale_ * std::pow(10.0, large_scale_db_ / 20.0); }
  double magnitude() const { return std::abs(beta()); }

 private:
  cplx small_scale_;
  double large_scale_db_;
};

/// pi * (a * b mod 2), with the product and the reduction carried out exactly.
inline long double reduced_pi_product(double a, double b) {
  const double p = a * b;
  const double residual = std::fma(a, b, -p);
  return std::numbers::pi_v<long double> * (static_cast<long double>(std::fmod(p, 2.0)) + residual);
}

/// exp(-j pi k u); the phase error does not grow with k.
inline cplx ula_phase(int k, double u) {
  const long double phase = reduced_pi_product(static_cast<double>(k), u);
  return {static_cast<double>(std::cos(phase)), static_cast<double>(-std::sin(phase))};
}

/// Unit-norm ULA response: entry k is exp(-j pi k u) / sqrt(T).
inline CVector steering_vector(double normalized, int num_elements) {
  if (num_elements < 1) throw DomainError("array needs at least one element");
  const double scale = 1.0 / std::sqrt(static_cast<double>(num_elements));
  CVector v(num_elements);
  for (int k = 0; k < num_elements; ++k) v[k] = scale * ula_phase(k, normalized);
  return v;
}

inline CVector steering_vector(const AngleSpec& angle, const ArrayGeometry& geometry) {
  return steering_vector(angle.normalized(), geometry.num_elements());
}

/// Single-path channel H = sqrt(T_BS T_MU) beta a_MU(aoa) a_BS(aod)^H.
struct SinglePathChannel {
  AngleSpec aoa;
  AngleSpec aod;
  PathGain gain;
  ArrayGeometry bs_array;
  ArrayGeometry mu_array;

  cplx beta() const { return gain.beta(); }
  double array_gain() const {
    return std::sqrt(static_cast<double>(bs_array.num_elements()) * mu_array.num_elements());
  }
};

inline CMatrix channel_matrix(const SinglePathChannel& ch) {
  const CVector a_mu = steering_vector(ch.aoa, ch.mu_array);
  const CVector a_bs = steering_vector(ch.aod, ch.bs_array);
  return (ch.array_gain() * ch.beta()) * a_mu * a_bs.adjoint();
}

/// Fejer kernel K_T(delta) = |a(phi)^H a(phi + delta)|^2
///   = sin^2(pi T delta / 2) / (T^2 sin^2(pi delta / 2)).
/// Evaluates to its limit 1 where the denominator vanishes (delta = 0 mod 2).
inline double fejer_correlation(double delta, int num_elements) {
  if (num_elements < 1) throw DomainError("Fejer kernel order must be >= 1");
  const double t = static_cast<double>(num_elements);
  const double den = static_cast<double>(std::sin(reduced_pi_product(0.5, delta)));
  if (std::abs(den) < 1e-9) return 1.0;
  const double ratio = static_cast<double>(std::sin(reduced_pi_product(0.5 * t, delta))) / (t * den);
  return std::min(ratio * ratio, 1.0);
}

}  // namespace hbnoma
