// Copyright 2026 The qswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qswap/qcore.hpp"

#include <random>

namespace qswap::testing {

inline Matrix random_matrix(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = cplx(n(rng), n(rng));
  }
  return m;
}

/// Haar-ish unitary from the QR factor of a Gaussian matrix.
inline Matrix random_unitary(std::mt19937_64& rng, int dim) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, dim));
  return qr.householderQ() * Matrix::Identity(dim, dim);
}

/// Full-rank mixed state G G^dagger / Tr.
inline DensityOperator random_state(std::mt19937_64& rng, int dim) {
  const Matrix g = random_matrix(rng, dim);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(0.5 * (rho + rho.adjoint()));
}

}  // namespace qswap::testing
