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

// Four-qubit engine circuit. Register layout:
//   q0  ancilla purifying A      q1  working qubit A (hot)
//   q2  working qubit B (cold)   q3  ancilla purifying B
// Box 1 writes rho~_A (x) rho~_B on (q1,q2) by entangling each working
// qubit with its ancilla. Boxes 2 and 3 apply the same correlating rotation
// to (q0,q3) and (q1,q2), so the ancillas carry a Z-basis copy of the
// initial correlated state. Box 4 is the partial SWAP on (q1,q2).

#include "qswap/circuit.hpp"
#include "qswap/engine_model.hpp"
#include "qswap/simulator.hpp"

#include <array>
#include <cmath>

namespace qswap {

inline constexpr int kEngineWidth = 4;
inline constexpr int kAncillaA = 0;
inline constexpr int kQubitA = 1;
inline constexpr int kQubitB = 2;
inline constexpr int kAncillaB = 3;

struct PreparationAngles {
  double theta_a = 0.0;  // RX angle on q0, excited population p_plus
  double theta_b = 0.0;  // RX angle on q3, excited population p_minus
  double x = 0.0;        // argument of the correlating controlled rotation
  bool use_u_plus = false;  // negative alpha flips the rotation sense
};

/// RX(theta)|0> has excited population sin^2(theta/2).
inline double rx_angle_for_population(double p) {
  return 2.0 * std::asin(std::sqrt(std::clamp(p, 0.0, 1.0)));
}

/// x = 1/2 - (p_A - p_B) / (2 (p_+ - p_-)); zero when the block is
/// degenerate and nothing needs to be rotated. For p_A > p_B the difference
/// cancels, so it is evaluated as 2 alpha^2 / (g (g + p_A - p_B)) with
/// g = p_+ - p_-; sqrt(x) would otherwise turn 1e-17 into 1e-9.
inline PreparationAngles preparation_angles(const EngineParams& p) {
  validate(p);
  const DressedPopulations d = dressed_populations(p);
  const double pa = thermal_state(p.a_a()).p;
  const double pb = thermal_state(p.a_b()).p;
  PreparationAngles a;
  a.theta_a = rx_angle_for_population(d.plus);
  a.theta_b = rx_angle_for_population(d.minus);
  const double gap = d.plus - d.minus;
  const double diff = pa - pb;
  if (gap < 1e-15) {
    a.x = 0.0;
  } else if (diff > 0.0) {
    a.x = std::clamp(2.0 * p.alpha * p.alpha / (gap * (gap + diff)), 0.0, 1.0);
  } else {
    a.x = std::clamp(0.5 - diff / (2.0 * gap), 0.0, 1.0);
  }
  a.use_u_plus = p.alpha < 0.0;
  return a;
}

namespace detail {

/// CNOT(b -> a), controlled U(x) from a onto b, CNOT(b -> a).
inline void correlating_box(Circuit& c, int qa, int qb,
                            const PreparationAngles& ang) {
  c.cx(qb, qa);
  if (ang.use_u_plus) {
    c.cu_plus(qa, qb, ang.x);
  } else {
    c.cu_minus(qa, qb, ang.x);
  }
  c.cx(qb, qa);
}

}  // namespace detail

/// CNOT(a -> b), controlled U_+(lambda) from b onto a, CNOT(a -> b).
inline void append_partial_swap(Circuit& c, int qa, int qb, double lambda) {
  c.cx(qa, qb);
  c.cu_plus(qb, qa, lambda);
  c.cx(qa, qb);
}

/// Boxes 1 to 3.
inline Circuit build_preparation_circuit(const EngineParams& p) {
  const PreparationAngles ang = preparation_angles(p);
  Circuit c(kEngineWidth);
  c.rx(kAncillaA, ang.theta_a);
  c.rx(kAncillaB, ang.theta_b);
  c.cx(kAncillaA, kQubitA);
  c.cx(kAncillaB, kQubitB);
  detail::correlating_box(c, kAncillaA, kAncillaB, ang);
  detail::correlating_box(c, kQubitA, kQubitB, ang);
  return c;
}

inline Circuit build_engine_circuit(const EngineParams& p) {
  Circuit c = build_preparation_circuit(p);
  append_partial_swap(c, kQubitA, kQubitB, p.lambda);
  return c;
}

inline DensityOperator working_pair_state(const DensityOperator& rho16) {
  const int keep[2] = {kQubitA, kQubitB};
  return reduced_state(rho16, keep);
}

inline DensityOperator ancilla_pair_state(const DensityOperator& rho16) {
  const int keep[2] = {kAncillaA, kAncillaB};
  return reduced_state(rho16, keep);
}

/// Flows from one engine-circuit run: initial populations read from the
/// ancilla pair, final populations from the working pair.
inline EnergyFlows circuit_energy_flows(const DensityOperator& rho16,
                                        const EngineParams& p) {
  const DensityOperator before = ancilla_pair_state(rho16);
  const DensityOperator after = working_pair_state(rho16);
  const RVector d0 = before.diagonal();
  const RVector df = after.diagonal();
  const double pa0 = d0(2) + d0(3);
  const double pb0 = d0(1) + d0(3);
  const double paf = df(2) + df(3);
  const double pbf = df(1) + df(3);
  EnergyFlows f;
  f.Q_A = -p.eps_a() * (paf - pa0);
  f.Q_B = -p.eps_b() * (pbf - pb0);
  f.W = -(f.Q_A + f.Q_B);
  return f;
}

}  // namespace qswap
