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

#include "qswap/experiment.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace qswap {
namespace {

EngineParams corr(double r, double lambda = 0.6) {
  return with_alpha(EngineParams{1.0, 2.0, r, lambda, 0.0}, AlphaPolicy::Max);
}

TEST(Aggregate, PopulationStandardDeviation) {
  const EstimateWithError e = aggregate_runs({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.std, std::sqrt(1.25), 1e-15);
  EXPECT_EQ(e.n, 4);
  EXPECT_TRUE(aggregate_runs({1.0}).low_confidence());
  EXPECT_THROW(aggregate_runs({}), ExperimentError);
  EXPECT_FALSE(aggregate_present({std::nullopt, std::nullopt}).has_value());
  EXPECT_EQ(aggregate_present({1.0, std::nullopt, 3.0})->n, 2);
}

TEST(FlowEstimator, ExactCountsReproduceFlows) {
  // Counts built from a known four-qubit distribution give exact flows.
  const EngineParams p = corr(0.5);
  const std::vector<double> probs = engine_distribution(p);
  CountsTable t(4);
  const long long total = 1'000'000'000LL;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    t.add(outcome_string(i, 4), std::llround(probs[i] * total));
  }
  const EnergyFlows f = estimate_flows_from_counts(t, p);
  const ClosedFormEnergies e = closed_form_energies(p);
  EXPECT_NEAR(f.W, e.W, 1e-8);
  EXPECT_NEAR(f.Q_A, e.Q_A, 1e-8);
}

TEST(FlowEstimator, TwoBitTablesAndValidation) {
  const EngineParams p = corr(0.5);
  CountsTable before(2);
  before.add("00", 3);
  before.add("10", 1);
  CountsTable after(2);
  after.add("00", 2);
  after.add("01", 2);
  const EnergyFlows f = estimate_flows_from_counts(before, after, p);
  EXPECT_DOUBLE_EQ(f.Q_A, 0.25);
  EXPECT_DOUBLE_EQ(f.Q_B, -0.25);
  EXPECT_DOUBLE_EQ(f.W + f.Q_A + f.Q_B, 0.0);
  CountsTable other(2);
  other.add("00", 5);
  EXPECT_THROW(estimate_flows_from_counts(before, other, p), ExperimentError);
  CountsTable three(3);
  three.add("000", 4);
  EXPECT_THROW(estimate_flows_from_counts(three, three, p), ExperimentError);
}

TEST(ShotExperiment, MeansWithinStatisticalErrorOfClosedForm) {
  for (double r : {0.2, 0.5, 0.8}) {
    const EngineParams p = corr(r);
    const ThermoEstimate est = run_shot_experiment(p, RunConfig{});
    const ClosedFormEnergies e = closed_form_energies(p);
    EXPECT_EQ(est.W.n, 10);
    EXPECT_GT(est.W.std, 0.0);
    const double sem = est.W.std / std::sqrt(10.0);
    EXPECT_LT(std::abs(est.W.mean - e.W), 4.0 * sem + 1e-12);
    EXPECT_LT(std::abs(est.Q_A.mean - e.Q_A),
              4.0 * est.Q_A.std / std::sqrt(10.0) + 1e-12);
  }
}

TEST(ShotExperiment, SpreadShrinksWithShots) {
  const EngineParams p = corr(0.5);
  RunConfig small{5000, 20, 3};
  RunConfig large{20000, 20, 3};
  const double s1 = run_shot_experiment(p, small).W.std;
  const double s2 = run_shot_experiment(p, large).W.std;
  EXPECT_GT(s1 / s2, 1.4);
  EXPECT_LT(s1 / s2, 2.8);
}

TEST(ShotExperiment, SeedDeterminism) {
  const EngineParams p = corr(0.4);
  const RunConfig cfg{2000, 3, 11};
  const ThermoEstimate a = run_shot_experiment(p, cfg);
  const ThermoEstimate b = run_shot_experiment(p, cfg);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.W.mean, b.W.mean);
  const ThermoEstimate c = run_shot_experiment(p, RunConfig{2000, 3, 12});
  EXPECT_NE(a.counts, c.counts);
  EXPECT_THROW(run_shot_experiment(p, RunConfig{0, 3, 1}), ExperimentError);
}

TEST(ShotExperiment, NoisyPathMovesTowardRelaxation) {
  const EngineParams p = corr(0.5);
  NoiseModel m = NoiseModel::ibmq_manila();
  const std::vector<double> noisy = engine_distribution(p, m);
  const std::vector<double> ideal = engine_distribution(p);
  double tv = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < ideal.size(); ++i) {
    tv += 0.5 * std::abs(noisy[i] - ideal[i]);
    total += noisy[i];
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_GT(tv, 1e-4);
  EXPECT_LT(tv, 0.2);
}

TEST(Tomography, BasisChangeMapsPauliToZ) {
  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
    const Matrix v = basis_change_matrix(p);
    EXPECT_TRUE(equivalent_up_to_phase(v.adjoint() * pauli_z() * v,
                                       pauli_matrix(p))
                    .residual < 1e-12);
    Circuit c(1);
    append_basis_change(c, 0, p);
    EXPECT_TRUE(
        equivalent_up_to_phase(circuit_unitary(c), v).equivalent);
  }
  EXPECT_EQ(setting_label(kTomographySettings[0]), "XX");
  EXPECT_EQ(setting_label(kTomographySettings[8]), "ZZ");
}

TEST(Tomography, CircuitsCoverNineSettings) {
  const Circuit base = build_engine_circuit(corr(0.5));
  const auto circuits = tomography_circuits(base, kQubitA, kQubitB);
  ASSERT_EQ(circuits.size(), 9u);
  for (std::size_t k = 0; k < 9; ++k) {
    const DensityOperator rho = simulate(circuits[k]);
    const int keep[2] = {kQubitA, kQubitB};
    const DensityOperator pair = reduced_state(rho, keep);
    const std::vector<double> want = setting_probabilities(
        working_pair_state(simulate(base)), kTomographySettings[k]);
    for (int i = 0; i < 4; ++i) {
      EXPECT_NEAR(pair.diagonal()(i), want[i], 1e-12);
    }
  }
}

TEST(Tomography, ExactReconstructionIsIdentity) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 10; ++t) {
    const DensityOperator rho = testing::random_state(rng, 4);
    const Reconstruction r = qst_exact(rho);
    EXPECT_LE((r.raw - rho.matrix()).norm(), 1e-12);
    EXPECT_LE(trace_distance(r.state, rho), 1e-12);
  }
}

TEST(Tomography, SampledReconstructionConverges) {
  const EngineStates s = engine_pair_states(corr(0.5));
  const Reconstruction r =
      qst_reconstruct(sample_tomography(s.initial, 200000, 5));
  EXPECT_LT(trace_distance(r.state, s.initial), 0.01);
  EXPECT_LT(r.off_x_max, 0.01);
  EXPECT_LT(r.imag_max, 0.01);
  EXPECT_TRUE(is_physical(r.state.matrix()));
}

TEST(Tomography, JsonRoundTripAndMissingSetting) {
  const EngineStates s = engine_pair_states(corr(0.5));
  const TomographyResult t = sample_tomography(s.final, 1000, 2);
  const TomographyResult back = tomography_from_json(to_json(t));
  for (std::size_t k = 0; k < 9; ++k) EXPECT_EQ(back.counts[k], t.counts[k]);
  TomographyResult broken = t;
  broken.counts[4] = CountsTable(2);
  EXPECT_THROW(qst_reconstruct(broken), ExperimentError);
}

TEST(Tomography, IdealLedgerSaturatesCarnotSum) {
  // eta + booster equals the Carnot value for a unitary stroke on Gibbs
  // marginals.
  for (double r : {0.2, 0.4, 0.7}) {
    const EngineParams p = corr(r);
    const EngineStates s = engine_pair_states(p);
    const TomographyLedger l = ledger_from_tomography(s.initial, s.final, p);
    ASSERT_TRUE(l.eta_plus_booster.has_value());
    EXPECT_NEAR(*l.eta_plus_booster, carnot_efficiency(p), 1e-10);
    EXPECT_NEAR(l.flows.W, l.ideal_flows.W, 1e-12);
  }
}

TEST(Tomography, ExperimentStatistics) {
  const EngineParams p = corr(0.4);
  const TomographyRun run = run_tomography_experiment(p, RunConfig{20000, 5, 7});
  ASSERT_EQ(run.trace_distance_initial.size(), 5u);
  for (double d : run.trace_distance_initial) EXPECT_LT(d, 0.03);
  for (double d : run.trace_distance_final) EXPECT_LT(d, 0.03);
  ASSERT_TRUE(run.eta_plus_booster.has_value());
  ASSERT_TRUE(run.combined_std().has_value());
  EXPECT_LT(std::abs(run.eta_plus_booster->mean - carnot_efficiency(p)),
            3.0 * *run.combined_std());
  EXPECT_NEAR(run.delta_S_AB.mean, 0.0, 0.05);
}

}  // namespace
}  // namespace qswap
