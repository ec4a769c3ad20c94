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

// Measurement pipeline: shot-based energy estimation with repetition
// statistics, nine-setting two-qubit tomography, and the entropy ledger
// evaluated on reconstructed states.

#include "qswap/engine_circuit.hpp"
#include "qswap/engine_model.hpp"
#include "qswap/sampling.hpp"
#include "qswap/simulator.hpp"
#include "qswap/transpiler.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace qswap {

class ExperimentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  long long shots = 20000;
  int repetitions = 10;
  std::uint64_t seed = 7;

  void validate() const {
    if (shots < 1) throw ExperimentError("shots must be at least 1");
    if (repetitions < 1) {
      throw ExperimentError("repetitions must be at least 1");
    }
  }
};

// --- Repetition statistics --------------------------------------------------

struct EstimateWithError {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over repetitions
  int n = 0;

  bool low_confidence() const { return n < 2; }
};

inline EstimateWithError aggregate_runs(const std::vector<double>& xs) {
  if (xs.empty()) throw ExperimentError("aggregate_runs: no estimates");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return {mean, std::sqrt(var), static_cast<int>(xs.size())};
}

inline std::optional<EstimateWithError> aggregate_present(
    const std::vector<std::optional<double>>& xs) {
  std::vector<double> v;
  for (const auto& x : xs) {
    if (x) v.push_back(*x);
  }
  if (v.empty()) return std::nullopt;
  return aggregate_runs(v);
}

// --- Energy estimates from counts ----------------------------------------------

namespace detail {

inline void require_same_totals(const CountsTable& a, const CountsTable& b) {
  if (a.shots() == 0 || b.shots() == 0) {
    throw ExperimentError("empty counts table");
  }
  if (a.shots() != b.shots()) {
    throw ExperimentError("initial and final tables differ in shot totals");
  }
  if (a.width() != b.width()) {
    throw ExperimentError("initial and final tables differ in width");
  }
}

}  // namespace detail

/// Q_i = -eps_i (P1_final(i) - P1_initial(i)) and W = -(Q_A + Q_B). With
/// four-bit tables the initial populations come from the ancillas (q0, q3)
/// and the final ones from (q1, q2); two-bit tables are read as (A, B).
inline EnergyFlows estimate_flows_from_counts(const CountsTable& initial,
                                              const CountsTable& final,
                                              const EngineParams& p) {
  detail::require_same_totals(initial, final);
  double pa0 = 0.0;
  double pb0 = 0.0;
  double paf = 0.0;
  double pbf = 0.0;
  if (initial.width() == kEngineWidth) {
    pa0 = initial.excited_frequency(kAncillaA);
    pb0 = initial.excited_frequency(kAncillaB);
    paf = final.excited_frequency(kQubitA);
    pbf = final.excited_frequency(kQubitB);
  } else if (initial.width() == 2) {
    pa0 = initial.excited_frequency(0);
    pb0 = initial.excited_frequency(1);
    paf = final.excited_frequency(0);
    pbf = final.excited_frequency(1);
  } else {
    throw ExperimentError("counts tables must have width 2 or 4");
  }
  EnergyFlows f;
  f.Q_A = -p.eps_a() * (paf - pa0);
  f.Q_B = -p.eps_b() * (pbf - pb0);
  f.W = -(f.Q_A + f.Q_B);
  return f;
}

/// Single engine-circuit table carrying both snapshots.
inline EnergyFlows estimate_flows_from_counts(const CountsTable& engine,
                                              const EngineParams& p) {
  return estimate_flows_from_counts(engine, engine, p);
}

/// Z-basis distribution of the four logical qubits after the engine
/// circuit. With a noise model the circuit is transpiled onto the five-qubit
/// chain and read back through the final layout.
inline std::vector<double> engine_distribution(
    const EngineParams& p, const std::optional<NoiseModel>& noise = {}) {
  const Circuit c = build_engine_circuit(p);
  if (!noise) return z_probabilities(simulate(c));
  const BasisCircuit bc = transpile(c);
  const DensityOperator phys = simulate(bc.to_circuit(), noise);
  std::vector<int> keep;
  for (int l = 0; l < kEngineWidth; ++l) keep.push_back(bc.final_layout[l]);
  return z_probabilities(reduced_state(phys, keep));
}

struct ThermoEstimate {
  EstimateWithError W;
  EstimateWithError Q_A;
  EstimateWithError Q_B;
  std::optional<EstimateWithError> eta;
  std::vector<EnergyFlows> runs;
  std::vector<CountsTable> counts;
};

/// `repetitions` independent batches of `shots`; repetition k uses stream
/// stream_base + k.
inline ThermoEstimate run_shot_experiment(
    const EngineParams& p, const RunConfig& cfg,
    std::uint64_t stream_base = 0,
    const std::optional<NoiseModel>& noise = {}) {
  cfg.validate();
  const std::vector<double> probs = engine_distribution(p, noise);
  ThermoEstimate est;
  std::vector<double> w, qa, qb;
  std::vector<std::optional<double>> eta;
  for (int k = 0; k < cfg.repetitions; ++k) {
    CountsTable t = sample_counts(probs, kEngineWidth, cfg.shots, cfg.seed,
                                  stream_base + static_cast<std::uint64_t>(k));
    const EnergyFlows f = estimate_flows_from_counts(t, p);
    est.runs.push_back(f);
    est.counts.push_back(std::move(t));
    w.push_back(f.W);
    qa.push_back(f.Q_A);
    qb.push_back(f.Q_B);
    eta.push_back(efficiency(f, p).eta);
  }
  est.W = aggregate_runs(w);
  est.Q_A = aggregate_runs(qa);
  est.Q_B = aggregate_runs(qb);
  est.eta = aggregate_present(eta);
  return est;
}

// --- Tomography -----------------------------------------------------------------

enum class Pauli { X, Y, Z };

struct TomographySetting {
  Pauli a;
  Pauli b;
};

inline constexpr std::array<TomographySetting, 9> kTomographySettings{{
    {Pauli::X, Pauli::X},
    {Pauli::X, Pauli::Y},
    {Pauli::X, Pauli::Z},
    {Pauli::Y, Pauli::X},
    {Pauli::Y, Pauli::Y},
    {Pauli::Y, Pauli::Z},
    {Pauli::Z, Pauli::X},
    {Pauli::Z, Pauli::Y},
    {Pauli::Z, Pauli::Z},
}};

inline char pauli_char(Pauli p) {
  return p == Pauli::X ? 'X' : (p == Pauli::Y ? 'Y' : 'Z');
}

inline std::string setting_label(const TomographySetting& s) {
  return {pauli_char(s.a), pauli_char(s.b)};
}

inline Matrix pauli_matrix(Pauli p) {
  return p == Pauli::X ? pauli_x() : (p == Pauli::Y ? pauli_y() : pauli_z());
}

/// Basis-change gates V with V^dagger Z V = P: X uses RZ(pi/2) SX RZ(pi/2),
/// Y uses SX.
inline void append_basis_change(Circuit& c, int qubit, Pauli p) {
  const double h = 0.5 * std::numbers::pi;
  if (p == Pauli::X) {
    c.rz(qubit, h).sx(qubit).rz(qubit, h);
  } else if (p == Pauli::Y) {
    c.sx(qubit);
  }
}

inline Matrix basis_change_matrix(Pauli p) {
  Circuit c(1);
  append_basis_change(c, 0, p);
  return circuit_unitary(c);
}

/// Outcome probabilities of a two-qubit state under one setting.
inline std::vector<double> setting_probabilities(
    const DensityOperator& rho2, const TomographySetting& s) {
  if (rho2.dim() != 4) {
    throw DimensionError("tomography acts on two-qubit states");
  }
  const Matrix v =
      tensor_product(basis_change_matrix(s.a), basis_change_matrix(s.b));
  return z_probabilities(DensityOperator(v * rho2.matrix() * v.adjoint()));
}

/// Full circuits for each setting: `base` followed by basis changes on
/// (qa, qb), measuring only those two qubits.
inline std::vector<Circuit> tomography_circuits(const Circuit& base, int qa,
                                                int qb) {
  std::vector<Circuit> out;
  for (const TomographySetting& s : kTomographySettings) {
    Circuit c = base;
    append_basis_change(c, qa, s.a);
    append_basis_change(c, qb, s.b);
    c.set_measured({qa, qb});
    out.push_back(std::move(c));
  }
  return out;
}

struct TomographyResult {
  std::array<CountsTable, 9> counts{CountsTable(2), CountsTable(2),
                                    CountsTable(2), CountsTable(2),
                                    CountsTable(2), CountsTable(2),
                                    CountsTable(2), CountsTable(2),
                                    CountsTable(2)};
};

/// Setting k uses stream stream_base + k.
inline TomographyResult sample_tomography(const DensityOperator& rho2,
                                          long long shots,
                                          std::uint64_t seed,
                                          std::uint64_t stream_base = 0) {
  TomographyResult r;
  for (std::size_t k = 0; k < kTomographySettings.size(); ++k) {
    r.counts[k] =
        sample_counts(setting_probabilities(rho2, kTomographySettings[k]), 2,
                      shots, seed, stream_base + k);
  }
  return r;
}

struct Reconstruction {
  Matrix raw;              // linear inversion, before projection
  DensityOperator state;   // nearest physical state
  double off_x_max = 0.0;  // largest |entry| outside the X pattern
  double imag_max = 0.0;   // largest |Im| of any entry
};

/// Linear inversion rho = 1/4 sum T_ij sigma_i (x) sigma_j from per-setting
/// outcome distributions, then eigenvalue clipping. Single-qubit terms are
/// averaged over the three settings that contain them.
inline Reconstruction qst_reconstruct(
    const std::array<std::vector<double>, 9>& dists) {
  for (const auto& d : dists) {
    if (d.size() != 4) {
      throw ExperimentError("qst_reconstruct: need nine 2-qubit settings");
    }
  }
  auto index = [](Pauli p) { return static_cast<int>(p) + 1; };
  double t[4][4] = {};
  int n_a[4] = {};
  int n_b[4] = {};
  t[0][0] = 1.0;
  for (std::size_t k = 0; k < 9; ++k) {
    const auto& d = dists[k];
    const int i = index(kTomographySettings[k].a);
    const int j = index(kTomographySettings[k].b);
    // outcome index = 2 b_A + b_B
    t[i][j] += d[0] - d[1] - d[2] + d[3];
    t[i][0] += d[0] + d[1] - d[2] - d[3];
    t[0][j] += d[0] - d[1] + d[2] - d[3];
    ++n_a[i];
    ++n_b[j];
  }
  for (int i = 1; i < 4; ++i) t[i][0] /= n_a[i];
  for (int j = 1; j < 4; ++j) t[0][j] /= n_b[j];
  const Matrix paulis[4] = {identity(2), pauli_x(), pauli_y(), pauli_z()};
  Matrix raw = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      raw += 0.25 * t[i][j] * tensor_product(paulis[i], paulis[j]);
    }
  }
  Reconstruction r{raw, nearest_physical(raw), 0.0, 0.0};
  const Matrix& s = r.state.matrix();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool x_entry =
          i == j || (i == 1 && j == 2) || (i == 2 && j == 1);
      if (!x_entry) r.off_x_max = std::max(r.off_x_max, std::abs(s(i, j)));
      r.imag_max = std::max(r.imag_max, std::abs(s(i, j).imag()));
    }
  }
  return r;
}

inline Reconstruction qst_reconstruct(const TomographyResult& result) {
  const long long shots = result.counts[0].shots();
  std::array<std::vector<double>, 9> dists;
  for (std::size_t k = 0; k < 9; ++k) {
    const CountsTable& c = result.counts[k];
    if (c.width() != 2 || c.shots() == 0) {
      throw ExperimentError("qst_reconstruct: setting " +
                            setting_label(kTomographySettings[k]) +
                            " is missing");
    }
    if (c.shots() != shots) {
      throw ExperimentError("qst_reconstruct: inconsistent shot totals");
    }
    dists[k] = c.distribution();
  }
  return qst_reconstruct(dists);
}

/// Infinite-shot tomography of a known state.
inline Reconstruction qst_exact(const DensityOperator& rho2) {
  std::array<std::vector<double>, 9> dists;
  for (std::size_t k = 0; k < 9; ++k) {
    dists[k] = setting_probabilities(rho2, kTomographySettings[k]);
  }
  return qst_reconstruct(dists);
}

inline nlohmann::json to_json(const TomographyResult& r) {
  nlohmann::json settings = nlohmann::json::object();
  for (std::size_t k = 0; k < 9; ++k) {
    settings[setting_label(kTomographySettings[k])] = to_json(r.counts[k]);
  }
  return {{"schema", "qswap.tomography"}, {"version", 1},
          {"settings", settings}};
}

inline TomographyResult tomography_from_json(const nlohmann::json& j) {
  TomographyResult r;
  const auto& s = j.at("settings");
  for (std::size_t k = 0; k < 9; ++k) {
    r.counts[k] = counts_from_json(s.at(setting_label(kTomographySettings[k])));
  }
  return r;
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r, c;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return {{"real", re}, {"imag", im}};
}

// --- Ledger from reconstructed states -------------------------------------------

struct TomographyLedger {
  EnergyFlows flows;  // from reconstructed populations
  EntropyLedger ledger;
  std::optional<double> eta;
  double eta_carnot = 0.0;
  std::optional<double> eta_plus_booster;

  EnergyFlows ideal_flows;
  EntropyLedger ideal;           // exact initial state, ideal unitary
  EntropyLedger actual_initial;  // reconstructed initial state, ideal unitary
};

inline TomographyLedger ledger_from_tomography(const DensityOperator& rho0_hat,
                                               const DensityOperator& rhof_hat,
                                               const EngineParams& p) {
  TomographyLedger t;
  t.flows = energy_flows(rho0_hat, rhof_hat, p);
  t.ledger = entropy_ledger(rho0_hat, rhof_hat, p, DiscordMode::XApproximation);
  const Efficiency e = efficiency(t.flows, p);
  t.eta = e.eta;
  t.eta_carnot = e.eta_carnot;
  if (t.eta && t.ledger.booster) t.eta_plus_booster = *t.eta + *t.ledger.booster;

  const CycleResult ideal = run_cycle(p);
  t.ideal_flows = energy_flows(ideal.rho0, ideal.rhof, p);
  t.ideal = entropy_ledger(ideal.rho0, ideal.rhof, p);
  const Matrix u = pswap_unitary(p.lambda);
  const DensityOperator evolved(u * rho0_hat.matrix() * u.adjoint());
  t.actual_initial =
      entropy_ledger(rho0_hat, evolved, p, DiscordMode::XApproximation);
  return t;
}

/// Exact reduced states of the working pair before and after the stroke.
struct EngineStates {
  DensityOperator initial;
  DensityOperator final;
};

inline EngineStates engine_pair_states(const EngineParams& p) {
  return {working_pair_state(simulate(build_preparation_circuit(p))),
          working_pair_state(simulate(build_engine_circuit(p)))};
}

struct TomographyRun {
  std::vector<double> trace_distance_initial;
  std::vector<double> trace_distance_final;
  std::vector<double> off_x_initial;
  std::vector<TomographyLedger> ledgers;
  std::optional<EstimateWithError> eta;
  std::optional<EstimateWithError> booster;
  std::optional<EstimateWithError> eta_plus_booster;
  EstimateWithError sigma_eng;
  EstimateWithError delta_I;
  EstimateWithError delta_discord;
  EstimateWithError delta_S_AB;
  Reconstruction last_initial;
  Reconstruction last_final;

  /// sqrt(std_eta^2 + std_B^2), the spread used for the second-law check.
  std::optional<double> combined_std() const {
    if (!eta || !booster) return std::nullopt;
    return std::sqrt(eta->std * eta->std + booster->std * booster->std);
  }
};

/// Repetition k samples the initial state on streams stream_base + 20k + s
/// and the final state on stream_base + 20k + 10 + s, s = setting index.
inline TomographyRun run_tomography_experiment(const EngineParams& p,
                                               const RunConfig& cfg,
                                               std::uint64_t stream_base = 0) {
  cfg.validate();
  const EngineStates truth = engine_pair_states(p);
  TomographyRun run{.last_initial = qst_exact(truth.initial),
                    .last_final = qst_exact(truth.final)};
  std::vector<std::optional<double>> eta, booster, sum;
  std::vector<double> sigma, di, dd, dsab;
  for (int k = 0; k < cfg.repetitions; ++k) {
    const std::uint64_t base = stream_base + 20ULL * k;
    const Reconstruction r0 = qst_reconstruct(
        sample_tomography(truth.initial, cfg.shots, cfg.seed, base));
    const Reconstruction rf = qst_reconstruct(
        sample_tomography(truth.final, cfg.shots, cfg.seed, base + 10));
    run.trace_distance_initial.push_back(trace_distance(r0.state,
                                                        truth.initial));
    run.trace_distance_final.push_back(trace_distance(rf.state, truth.final));
    run.off_x_initial.push_back(r0.off_x_max);
    TomographyLedger l = ledger_from_tomography(r0.state, rf.state, p);
    eta.push_back(l.eta);
    booster.push_back(l.ledger.booster);
    sum.push_back(l.eta_plus_booster);
    sigma.push_back(l.ledger.sigma_eng);
    di.push_back(l.ledger.delta_I);
    dd.push_back(l.ledger.delta_discord);
    dsab.push_back(l.ledger.delta_S_AB);
    run.ledgers.push_back(std::move(l));
    run.last_initial = r0;
    run.last_final = rf;
  }
  run.eta = aggregate_present(eta);
  run.booster = aggregate_present(booster);
  run.eta_plus_booster = aggregate_present(sum);
  run.sigma_eng = aggregate_runs(sigma);
  run.delta_I = aggregate_runs(di);
  run.delta_discord = aggregate_runs(dd);
  run.delta_S_AB = aggregate_runs(dsab);
  return run;
}

}  // namespace qswap
