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

// End-to-end checks of the engine. Each check returns a pass flag and a
// one-line summary of the worst observed deviation.

#include "qswap/engine_circuit.hpp"
#include "qswap/engine_model.hpp"
#include "qswap/experiment.hpp"
#include "qswap/transpiler.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace qswap {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace acceptance {

inline EngineParams correlated(double r, double lambda = 0.6) {
  return with_alpha(EngineParams{1.0, 2.0, r, lambda, 0.0}, AlphaPolicy::Max);
}

inline EngineParams uncorrelated(double r, double lambda = 0.6) {
  return EngineParams{1.0, 2.0, r, lambda, 0.0};
}

/// r = 0.05, 0.10, ..., 1.50.
inline std::vector<double> sweep_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 30; ++k) g.push_back(0.05 * k);
  return g;
}

inline const std::vector<double> kDeviceGrid{0.05, 0.20, 0.40, 0.60, 0.70,
                                             0.80, 1.00, 1.20, 1.40, 1.50};

inline std::string fmt(const char* label, double v) {
  std::ostringstream s;
  s.precision(3);
  s << label << '=' << std::scientific << v;
  return s.str();
}

/// eta = 1 - r from the simulated circuit on 30 engine points in (0, 1).
inline CriterionResult efficiency_law() {
  CriterionResult res{1, "efficiency law eta = 1 - r (circuit)", true, ""};
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int k = 1; k <= 30; ++k) {
    const double r = k / 31.0;
    const EngineParams p = correlated(r);
    const EnergyFlows f =
        circuit_energy_flows(simulate(build_engine_circuit(p)), p);
    const Efficiency e = efficiency(f, p);
    if (!e.eta) {
      res.passed = false;
      continue;
    }
    worst = std::max(worst, std::abs(*e.eta - (1.0 - r)));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  res.passed = res.passed && worst <= 1e-9 && secs < 1.0;
  res.detail = fmt("max|eta-(1-r)|", worst) + " " + fmt("seconds", secs);
  return res;
}

/// eta + B_E = eta_Carnot wherever Q_A > 1e-9, eta = -W/Q_A.
inline CriterionResult generalized_second_law() {
  CriterionResult res{2, "generalized second law eta + B_E = 1/2", true, ""};
  double worst = 0.0;
  int points = 0;
  for (double lambda : {0.2, 0.6, 0.8}) {
    for (double r : sweep_grid()) {
      const CycleResult c = run_cycle(correlated(r, lambda));
      if (c.report.Q_A <= 1e-9) continue;
      ++points;
      const double eta = -c.report.W / c.report.Q_A;
      if (!c.report.booster) {
        res.passed = false;
        continue;
      }
      worst = std::max(worst, std::abs(eta + *c.report.booster - 0.5));
    }
  }
  res.passed = res.passed && points > 0 && worst <= 1e-9;
  res.detail = fmt("max|eta+B_E-0.5|", worst) + " points=" +
               std::to_string(points);
  return res;
}

/// Correlated engine points: B_E < 0 and eta > 1/2 exactly when r < 1/2.
/// Uncorrelated points with Q_A > 0: B_E >= 0.
inline CriterionResult above_carnot_region() {
  CriterionResult res{3, "above-Carnot region iff r < 1/2; B_E >= 0 at alpha=0",
                      true, ""};
  int mismatches = 0;
  double min_b0 = 1e300;
  for (int k = 1; k < 100; ++k) {
    const double r = k / 100.0;
    const CycleResult c = run_cycle(correlated(r));
    if (c.report.regime != Regime::Engine || !c.report.booster) {
      ++mismatches;
      continue;
    }
    const bool above = *c.report.booster < 0.0 && *c.report.eta > 0.5;
    const bool expect = r < 0.5 - 1e-12;
    if (above != expect) ++mismatches;
  }
  for (double lambda : {0.2, 0.6, 0.8}) {
    for (int k = 1; k <= 150; ++k) {
      const CycleResult c = run_cycle(uncorrelated(k / 100.0, lambda));
      if (c.report.Q_A > kFlowTolerance && c.report.booster) {
        min_b0 = std::min(min_b0, *c.report.booster);
      }
    }
  }
  res.passed = mismatches == 0 && min_b0 >= -1e-12;
  res.detail = "mismatches=" + std::to_string(mismatches) + " " +
               fmt("min B_E(alpha=0)", min_b0);
  return res;
}

/// Uncorrelated: refrigerator below r = 1/2, engine on (1/2, 1), accelerator
/// above 1, with f and W vanishing exactly at the boundaries. Correlated:
/// W < 0 on all of (0, 1) for several temperature ratios.
inline CriterionResult regime_boundaries() {
  CriterionResult res{4, "regime boundaries r = 1/2, 1 and W < 0 when correlated",
                      true, ""};
  int bad = 0;
  for (int k = 1; k <= 150; ++k) {
    const double r = k / 100.0;
    const ClosedFormEnergies e = closed_form_energies(uncorrelated(r));
    const Regime g = classify_regime(e.W, e.Q_A, e.Q_B);
    Regime want = Regime::Idle;
    if (k < 50) want = Regime::Refrigerator;
    if (k > 50 && k < 100) want = Regime::Engine;
    if (k > 100) want = Regime::Accelerator;
    if (g != want) ++bad;
  }
  const double f_half = closed_form_energies(uncorrelated(0.5)).f;
  const double w_one = closed_form_energies(uncorrelated(1.0)).W;
  if (f_half != 0.0 || w_one != 0.0) ++bad;
  double max_w = -1e300;
  for (double br : {1.5, 2.0, 3.0, 4.0, 5.0}) {
    for (int k = 1; k < 100; ++k) {
      EngineParams p{1.0, br, k / 100.0, 0.6, 0.0};
      p = with_alpha(p, AlphaPolicy::Max);
      max_w = std::max(max_w, closed_form_energies(p).W);
    }
  }
  res.passed = bad == 0 && max_w < 0.0;
  res.detail = "misclassified=" + std::to_string(bad) + " " +
               fmt("max W(alpha_max, r<1)", max_w);
  return res;
}

/// Peak extracted work with and without correlations.
inline CriterionResult work_boost() {
  CriterionResult res{5, "work boost max|W| ratio >= 5", true, ""};
  double m0 = 0.0;
  double m1 = 0.0;
  for (int k = 1; k <= 1500; ++k) {
    const double r = k / 1000.0;
    const double w0 = closed_form_energies(uncorrelated(r)).W;
    const double w1 = closed_form_energies(correlated(r)).W;
    if (w0 < 0.0) m0 = std::max(m0, -w0);
    if (w1 < 0.0) m1 = std::max(m1, -w1);
  }
  const double ratio = m0 > 0.0 ? m1 / m0 : 0.0;
  res.passed = ratio >= 5.0;
  std::ostringstream s;
  s << "ratio=" << ratio << " max|W|: " << m1 << " vs " << m0;
  res.detail = s.str();
  return res;
}

/// Energy conservation, entropy production and the mutual-information
/// change on the correlated sweep.
inline CriterionResult conservation_and_entropy() {
  CriterionResult res{6, "conservation, Sigma >= 0, Delta I <= 0 (correlated)",
                      true, ""};
  double worst_sum = 0.0;
  double min_sigma = 1e300;
  double max_di = -1e300;
  double max_di_r = 0.0;
  double max_di_lambda = 0.0;
  for (double lambda : {0.2, 0.6, 0.8}) {
    for (double r : sweep_grid()) {
      for (AlphaPolicy pol : {AlphaPolicy::Zero, AlphaPolicy::Max}) {
        const CycleResult c =
            run_cycle(with_alpha(uncorrelated(r, lambda), pol));
        worst_sum = std::max(
            worst_sum, std::abs(c.report.W + c.report.Q_A + c.report.Q_B));
        min_sigma = std::min(min_sigma, c.report.sigma_eng);
        if (pol == AlphaPolicy::Max && c.report.delta_I > max_di) {
          max_di = c.report.delta_I;
          max_di_r = r;
          max_di_lambda = lambda;
        }
      }
    }
  }
  res.passed = worst_sum <= 1e-12 && min_sigma >= -1e-10 && max_di <= 1e-10;
  std::ostringstream s;
  s << fmt("max|W+Q_A+Q_B|", worst_sum) << ' ' << fmt("min Sigma", min_sigma)
    << ' ' << fmt("max Delta I", max_di) << " at r=" << max_di_r
    << " lambda=" << max_di_lambda;
  res.detail = s.str();
  return res;
}

/// Spectrum equality, eta~ = eta and |W~| >= |W| on the engine grid.
inline CriterionResult tilde_identities() {
  CriterionResult res{7, "tilde-state spectrum, eta~ = eta, |W~| >= |W|", true,
                      ""};
  double worst_gap = 0.0;
  double worst_eta = 0.0;
  int weaker = 0;
  for (double lambda : {0.2, 0.6, 0.8}) {
    for (int k = 1; k < 100; ++k) {
      const EngineParams p = correlated(k / 100.0, lambda);
      const RVector s0 = hermitian_eig(initial_state(p).matrix()).eigenvalues;
      const RVector s1 = hermitian_eig(tilde_state(p).matrix()).eigenvalues;
      worst_gap = std::max(worst_gap, (s0 - s1).cwiseAbs().maxCoeff());
      const CycleResult c = run_cycle(p);
      if (c.report.regime != Regime::Engine) continue;
      const TildeCycle t = tilde_cycle(p);
      if (!t.eta) {
        ++weaker;
        continue;
      }
      worst_eta = std::max(worst_eta, std::abs(*t.eta - *c.report.eta));
      if (std::abs(t.W) < std::abs(c.report.W) ||
          std::abs(t.Q_A) < std::abs(c.report.Q_A)) {
        ++weaker;
      }
    }
  }
  res.passed = worst_gap <= 1e-12 && worst_eta <= 1e-9 && weaker == 0;
  res.detail = fmt("max spectrum gap", worst_gap) + " " +
               fmt("max|eta~-eta|", worst_eta) +
               " violations=" + std::to_string(weaker);
  return res;
}

/// At lambda = 1 the flows do not depend on alpha.
inline CriterionResult full_swap_erasure() {
  CriterionResult res{8, "full SWAP erases the correlation advantage", true,
                      ""};
  double worst = 0.0;
  for (double r : sweep_grid()) {
    const ThermoReport a = run_cycle(correlated(r, 1.0)).report;
    const ThermoReport b = run_cycle(uncorrelated(r, 1.0)).report;
    worst = std::max({worst, std::abs(a.W - b.W), std::abs(a.Q_A - b.Q_A),
                      std::abs(a.Q_B - b.Q_B)});
  }
  res.passed = worst <= 1e-12;
  res.detail = fmt("max flow difference", worst);
  return res;
}

/// 20000 shots x 10 repetitions on the device grid; std scaling with shots.
inline CriterionResult shot_pipeline() {
  CriterionResult res{9, "shot pipeline within 3 std; std ~ 1/sqrt(shots)",
                      true, ""};
  const RunConfig cfg{20000, 10, 11};
  double worst_z = 0.0;
  std::uint64_t stream = 0;
  for (double r : kDeviceGrid) {
    const EngineParams p = correlated(r);
    const ThermoEstimate e = run_shot_experiment(p, cfg, stream);
    stream += 100;
    const ClosedFormEnergies cf = closed_form_energies(p);
    auto z = [](const EstimateWithError& est, double truth) {
      if (est.std == 0.0) return est.mean == truth ? 0.0 : 1e300;
      return std::abs(est.mean - truth) / est.std;
    };
    worst_z = std::max({worst_z, z(e.W, cf.W), z(e.Q_A, cf.Q_A),
                        z(e.Q_B, cf.Q_B)});
  }
  const EngineParams p = correlated(0.5);
  const ThermoEstimate lo = run_shot_experiment(p, cfg, 5000);
  const ThermoEstimate hi =
      run_shot_experiment(p, RunConfig{80000, 10, 11}, 6000);
  const double ratio = lo.W.std / hi.W.std;
  res.passed = worst_z <= 3.0 && ratio >= 1.0 && ratio <= 3.0;
  std::ostringstream s;
  s << "max|mean-exact|/std=" << worst_z << " std ratio(20k/80k)=" << ratio;
  res.detail = s.str();
  return res;
}

/// Trace distance of reconstructed states and the tomography-based
/// eta + B_E on correlated engine points.
inline CriterionResult tomography() {
  CriterionResult res{10, "tomography: D_tr <= 0.02, eta + B_E within 2 std",
                      true, ""};
  const RunConfig cfg{20000, 10, 13};
  double worst_td = 0.0;
  double worst_sigmas = 0.0;
  std::uint64_t stream = 0;
  int engine_points = 0;
  for (double r : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    const TomographyRun run = run_tomography_experiment(correlated(r), cfg,
                                                        stream);
    stream += 1000;
    for (double d : run.trace_distance_initial) worst_td = std::max(worst_td, d);
    for (double d : run.trace_distance_final) worst_td = std::max(worst_td, d);
    if (!run.eta_plus_booster || !run.combined_std()) {
      res.passed = false;
      continue;
    }
    ++engine_points;
    const double dev = std::abs(run.eta_plus_booster->mean - 0.5);
    const double sd = *run.combined_std();
    worst_sigmas = std::max(worst_sigmas, sd > 0.0 ? dev / sd : 1e300);
  }
  res.passed = res.passed && worst_td <= 0.02 && worst_sigmas <= 2.0;
  std::ostringstream s;
  s << "max trace distance=" << worst_td
    << " max|eta+B_E-0.5|/combined std=" << worst_sigmas
    << " engine points=" << engine_points;
  res.detail = s.str();
  return res;
}

/// Lowering of every device-grid configuration.
inline CriterionResult transpiler() {
  CriterionResult res{11, "transpiler: exact, basis-only, chain-local, <= 11 us",
                      true, ""};
  const CouplingMap chain = CouplingMap::linear(5);
  const NoiseModel timing = NoiseModel::ibmq_manila();
  double worst_res = 0.0;
  double worst_ns = 0.0;
  int bad_gates = 0;
  for (double lambda : {0.2, 0.6, 0.8}) {
    for (double r : kDeviceGrid) {
      const Circuit c = build_engine_circuit(correlated(r, lambda));
      const BasisCircuit bc = transpile(c, chain);
      worst_res = std::max(worst_res, verify_transpilation(c, bc).residual);
      worst_ns = std::max(worst_ns, scheduled_duration_ns(bc, timing));
      for (const GateOp& g : bc.gates) {
        const bool basis = g.kind == GateKind::RZ || g.kind == GateKind::SX ||
                           g.kind == GateKind::CNOT;
        const bool local = g.kind != GateKind::CNOT ||
                           chain.adjacent(g.qubits[0], g.qubits[1]);
        if (!basis || !local) ++bad_gates;
      }
    }
  }
  res.passed = worst_res <= 1e-9 && bad_gates == 0 && worst_ns <= 11000.0;
  res.detail = fmt("max residual", worst_res) +
               " bad gates=" + std::to_string(bad_gates) +
               " max duration(us)=" + std::to_string(worst_ns / 1000.0);
  return res;
}

/// Random X states: formula value over brute-force minimum is one constant.
inline CriterionResult discord_cross_check() {
  CriterionResult res{12, "discord formula vs brute force: constant factor",
                      true, ""};
  const CounterRng rng(2024, 12);
  std::uint64_t k = 0;
  std::vector<double> ratios;
  while (ratios.size() < 100) {
    double d[4];
    double total = 0.0;
    for (double& v : d) {
      v = rng.uniform(k++) + 1e-3;
      total += v;
    }
    for (double& v : d) v /= total;
    const double z = std::sqrt(d[1] * d[2]) * rng.uniform(k++);
    Matrix m = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) m(i, i) = d[i];
    m(1, 2) = z;
    m(2, 1) = z;
    const DensityOperator rho(m);
    const double f = geometric_discord(rho, DiscordMode::XFormula);
    const double b = geometric_discord(rho, DiscordMode::BruteForce);
    if (b < 1e-8) continue;
    ratios.push_back(f / b);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  const double spread = *hi - *lo;
  res.passed = spread <= 1e-6;
  std::ostringstream s;
  s << "factor formula/brute=" << ratios.front() << " spread=" << spread;
  res.detail = s.str();
  return res;
}

}  // namespace acceptance

inline std::vector<std::function<CriterionResult()>> acceptance_criteria() {
  using namespace acceptance;
  return {efficiency_law,      generalized_second_law, above_carnot_region,
          regime_boundaries,   work_boost,             conservation_and_entropy,
          tilde_identities,    full_swap_erasure,      shot_pipeline,
          tomography,          transpiler,             discord_cross_check};
}

inline std::vector<CriterionResult> run_acceptance() {
  std::vector<CriterionResult> out;
  for (const auto& c : acceptance_criteria()) out.push_back(c());
  return out;
}

inline std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": "
    << r.name << " | " << r.detail;
  return s.str();
}

}  // namespace qswap
