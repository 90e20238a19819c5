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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hbnoma {

// Invalid scenario / configuration input (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Dimension mismatch between vectors / matrices.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Numerical failure that aborts a run (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The first-user effective channels of two clusters are (nearly) collinear,
// so the zero-forcing Gram matrix cannot be inverted reliably.
class SingularClusteringError : public NumericalError {
 public:
  SingularClusteringError(std::size_t cluster_a, std::size_t cluster_b, double condition)
      : NumericalError("singular clustering: first users of clusters " + std::to_string(cluster_a + 1) +
                       " and " + std::to_string(cluster_b + 1) +
                       " are not separable (Gram condition number " + std::to_string(condition) + ")"),
        cluster_a_(cluster_a),
        cluster_b_(cluster_b),
        condition_(condition) {}

  std::size_t cluster_a() const noexcept { return cluster_a_; }
  std::size_t cluster_b() const noexcept { return cluster_b_; }
  double condition() const noexcept { return condition_; }

 private:
  std::size_t cluster_a_;
  std::size_t cluster_b_;
  double condition_;
};

// File system failure; message carries the offending path (CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hbnoma
