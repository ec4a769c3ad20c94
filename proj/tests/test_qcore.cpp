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

#include "qswap/engine_model.hpp"
#include "qswap/qcore.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace qswap {
namespace {

using testing::random_state;
using testing::random_unitary;

Matrix gibbs(double a) {
  Matrix m = Matrix::Zero(2, 2);
  const double p = 1.0 / (1.0 + std::exp(a));
  m(0, 0) = 1.0 - p;
  m(1, 1) = p;
  return m;
}

// Independent oracle: Tr rho (log rho - log sigma) via Eigen's matrix log.
double relative_entropy_logm(const Matrix& rho, const Matrix& sigma) {
  const Matrix lr = rho.log();
  const Matrix ls = sigma.log();
  return (rho * (lr - ls)).trace().real();
}

TEST(TensorProduct, IdentityTimesIdentity) {
  EXPECT_TRUE(tensor_product(identity(2), identity(2)).isApprox(identity(4)));
}

TEST(TensorProduct, PauliZSignOnExcitedLeftQubit) {
  CVector e10 = CVector::Zero(4);
  e10(2) = 1.0;
  const CVector out = tensor_product(pauli_z(), identity(2)) * e10;
  EXPECT_TRUE(out.isApprox(-e10));
}

TEST(TensorProduct, GibbsProductDiagonal) {
  const Matrix g = tensor_product(gibbs(1.0), gibbs(1.0));
  const double p = 1.0 / (1.0 + std::exp(1.0));
  const double want[4] = {(1 - p) * (1 - p), (1 - p) * p, p * (1 - p), p * p};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(g(i, i).real(), want[i], 1e-15);
  EXPECT_NEAR(g(0, 0).real(), 0.534447, 1e-6);
  EXPECT_NEAR(g(1, 1).real(), 0.196612, 1e-6);
  EXPECT_NEAR(g(3, 3).real(), 0.0723295, 1e-7);
}

TEST(TensorProduct, RejectsOversizedResult) {
  EXPECT_THROW(tensor_product(identity(8), identity(8)), DimensionError);
}

TEST(PartialTrace, ProductStateKeepsFactor) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const DensityOperator a = random_state(rng, 2);
    const DensityOperator b = random_state(rng, 2);
    const DensityOperator ab = tensor_product(a, b);
    EXPECT_LE((partial_trace(ab, Subsystem::A).matrix() - a.matrix())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
    EXPECT_LE((partial_trace(ab, Subsystem::B).matrix() - b.matrix())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
  CVector psi = CVector::Zero(4);
  psi(1) = psi(2) = 1.0 / std::sqrt(2.0);
  const DensityOperator bell(pure_state(psi));
  EXPECT_TRUE(partial_trace(bell, Subsystem::A).matrix().isApprox(
      0.5 * identity(2)));
}

TEST(PartialTrace, CorrelatedInitialStateHasGibbsMarginals) {
  for (double r : {0.1, 0.5, 1.3}) {
    EngineParams p{1.0, 2.0, r, 0.6, 0.0};
    p = with_alpha(p, AlphaPolicy::Max);
    const DensityOperator rho = initial_state(p);
    EXPECT_LE((partial_trace(rho, Subsystem::A).matrix() - gibbs(p.a_a()))
                  .norm(),
              1e-15);
    EXPECT_LE((partial_trace(rho, Subsystem::B).matrix() - gibbs(p.a_b()))
                  .norm(),
              1e-15);
  }
}

TEST(PartialTrace, InvalidSubsystemId) {
  const DensityOperator rho(0.25 * identity(4));
  EXPECT_THROW(partial_trace(rho, static_cast<Subsystem>(2)), DimensionError);
  const int bad[1] = {5};
  EXPECT_THROW(reduced_state(rho, bad), DimensionError);
}

TEST(PartialTrace, GeneralKeepOrderFollowsArgument) {
  std::mt19937_64 rng(2);
  const DensityOperator a = random_state(rng, 2);
  const DensityOperator b = random_state(rng, 2);
  const DensityOperator c = random_state(rng, 2);
  const DensityOperator abc = tensor_product(tensor_product(a, b), c);
  const int keep[2] = {2, 0};
  EXPECT_LE((reduced_state(abc, keep).matrix() -
             tensor_product(c.matrix(), a.matrix()))
                .norm(),
            1e-12);
}

TEST(HermitianEig, DiagonalAndPauli) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.3;
  d(1, 1) = 0.7;
  const Spectrum s = hermitian_eig(d);
  EXPECT_NEAR(s.eigenvalues(0), 0.7, 1e-15);
  EXPECT_NEAR(s.eigenvalues(1), 0.3, 1e-15);
  const Spectrum x = hermitian_eig(pauli_x());
  EXPECT_NEAR(x.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(x.eigenvalues(1), -1.0, 1e-15);
}

TEST(HermitianEig, ReconstructionAndOrthonormality) {
  std::mt19937_64 rng(3);
  for (int dim : {2, 4, 16}) {
    const Matrix g = testing::random_matrix(rng, dim);
    const Matrix h = g + g.adjoint();
    const Spectrum s = hermitian_eig(h);
    EXPECT_LE((s.reconstruct() - h).norm(), 1e-9);
    EXPECT_LE((s.eigenvectors.adjoint() * s.eigenvectors - identity(dim))
                  .norm(),
              1e-9);
    EXPECT_NEAR(s.eigenvalues.sum(), h.trace().real(), 1e-9);
    for (int k = 1; k < dim; ++k) {
      EXPECT_GE(s.eigenvalues(k - 1), s.eigenvalues(k));
    }
  }
}

TEST(HermitianEig, RejectsNonHermitian) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(hermitian_eig(m), NotHermitianError);
}

TEST(DensityOperator, RejectsUnphysical) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.2;
  m(1, 1) = -0.2;
  EXPECT_THROW(DensityOperator{m}, NotPhysicalError);
  EXPECT_THROW(DensityOperator{Matrix::Identity(2, 2)}, NotPhysicalError);
  EXPECT_THROW(DensityOperator{Matrix::Identity(3, 3) / 3.0}, DimensionError);
}

TEST(Entropy, PureAndMaximallyMixed) {
  CVector psi(2);
  psi << 0.6, 0.8;
  EXPECT_NEAR(von_neumann_entropy(DensityOperator(pure_state(psi))), 0.0,
              1e-12);
  EXPECT_NEAR(von_neumann_entropy(DensityOperator(0.5 * identity(2))),
              std::log(2.0), 1e-15);
}

TEST(Entropy, GibbsAtUnitInverseTemperature) {
  const double p = 1.0 / (1.0 + std::exp(1.0));
  const double oracle = -p * std::log(p) - (1 - p) * std::log(1 - p);
  const double s = von_neumann_entropy(DensityOperator(gibbs(1.0)));
  EXPECT_NEAR(s, oracle, 1e-14);
  EXPECT_NEAR(s, 0.582203, 1e-6);
}

TEST(Entropy, UnitaryInvariance) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const DensityOperator rho = random_state(rng, 4);
    const Matrix u = random_unitary(rng, 4);
    const DensityOperator rot(u * rho.matrix() * u.adjoint());
    EXPECT_NEAR(von_neumann_entropy(rot), von_neumann_entropy(rho), 1e-9);
  }
}

TEST(RelativeEntropy, SelfIsZero) {
  std::mt19937_64 rng(5);
  const DensityOperator rho = random_state(rng, 4);
  EXPECT_NEAR(relative_entropy(rho, rho), 0.0, 1e-12);
}

TEST(RelativeEntropy, SupportViolationIsAnError) {
  CVector psi(2);
  psi << 0.0, 1.0;
  Matrix sigma = Matrix::Zero(2, 2);
  sigma(0, 0) = 1.0;
  EXPECT_THROW(relative_entropy(DensityOperator(pure_state(psi)),
                                DensityOperator(sigma)),
               SupportError);
}

TEST(RelativeEntropy, EngineMarginalsMatchMatrixLogOracle) {
  EngineParams p{1.0, 2.0, 0.5, 0.6, 0.0};
  p = with_alpha(p, AlphaPolicy::Max);
  const CycleResult c = run_cycle(p);
  for (Subsystem s : {Subsystem::A, Subsystem::B}) {
    const DensityOperator f = partial_trace(c.rhof, s);
    const DensityOperator i = partial_trace(c.rho0, s);
    const double d = relative_entropy(f, i);
    EXPECT_GE(d, 0.0);
    EXPECT_NEAR(d, relative_entropy_logm(f.matrix(), i.matrix()), 1e-9);
  }
  EXPECT_NEAR(relative_entropy(partial_trace(c.rhof, Subsystem::A),
                               partial_trace(c.rho0, Subsystem::A)),
              0.119920571, 1e-8);
  EXPECT_NEAR(relative_entropy(partial_trace(c.rhof, Subsystem::B),
                               partial_trace(c.rho0, Subsystem::B)),
              0.084650447, 1e-8);
}

TEST(RelativeEntropy, KleinInequalityOnRandomPairs) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const DensityOperator a = random_state(rng, 4);
    const DensityOperator b = random_state(rng, 4);
    const double d = relative_entropy(a, b);
    EXPECT_GE(d, -1e-12);
    EXPECT_NEAR(d, relative_entropy_logm(a.matrix(), b.matrix()), 1e-9);
    EXPECT_GT(d, 1e-6);
  }
}

TEST(MutualInformation, CorrelatedInitialStateMatchesEntropyOracle) {
  EngineParams p{1.0, 2.0, 0.5, 0.6, 0.0};
  p = with_alpha(p, AlphaPolicy::Max);
  const DensityOperator rho = initial_state(p);
  const double i = mutual_information(rho);
  EXPECT_GT(i, 0.0);
  EXPECT_NEAR(i, 0.2140107096, 1e-9);
}

TEST(NearestPhysical, IdempotentOnPhysicalInput) {
  std::mt19937_64 rng(7);
  const DensityOperator rho = random_state(rng, 4);
  EXPECT_LE((nearest_physical(rho.matrix()).matrix() - rho.matrix()).norm(),
            1e-12);
}

TEST(NearestPhysical, ClipsNegativeEigenvalue) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.04;
  m(1, 1) = -0.04;
  const DensityOperator out = nearest_physical(m);
  EXPECT_NEAR(out.matrix()(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(out.matrix()(1, 1).real(), 0.0, 1e-15);
}

TEST(NearestPhysical, RandomPerturbationsBecomePhysical) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const DensityOperator rho = random_state(rng, 4);
    Matrix noise = testing::random_matrix(rng, 4);
    noise = (0.05 * (noise + noise.adjoint())).eval();
    Matrix m = rho.matrix() + noise;
    m /= m.trace().real();
    EXPECT_TRUE(is_physical(nearest_physical(m).matrix()));
  }
}

TEST(NearestPhysical, VanishingTraceIsAnError) {
  EXPECT_THROW(nearest_physical(-identity(2)), NotPhysicalError);
}

}  // namespace
}  // namespace qswap
