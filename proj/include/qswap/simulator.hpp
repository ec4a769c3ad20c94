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

// Dense statevector and density-matrix execution of a Circuit starting from
// |0...0>, with an optional T1/T2 relaxation model.

#include "qswap/circuit.hpp"

#include <json.hpp>

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qswap {

/// Lifts a k-qubit gate (qubits[0] most significant) to the full register.
inline Matrix embed_gate(const Matrix& g, const std::vector<int>& qubits,
                         int width) {
  const int k = static_cast<int>(qubits.size());
  if (g.rows() != (Eigen::Index{1} << k)) {
    throw DimensionError("embed_gate: matrix does not match qubit count");
  }
  const Eigen::Index dim = Eigen::Index{1} << width;
  Eigen::Index mask = 0;
  for (int q : qubits) mask |= Eigen::Index{1} << (width - 1 - q);
  auto local = [&](Eigen::Index idx) {
    Eigen::Index l = 0;
    for (int j = 0; j < k; ++j) {
      l = (l << 1) | ((idx >> (width - 1 - qubits[j])) & 1);
    }
    return l;
  };
  auto scatter = [&](Eigen::Index base, Eigen::Index l) {
    Eigen::Index idx = base & ~mask;
    for (int j = 0; j < k; ++j) {
      idx |= ((l >> (k - 1 - j)) & 1) << (width - 1 - qubits[j]);
    }
    return idx;
  };
  Matrix out = Matrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Eigen::Index lc = local(col);
    for (Eigen::Index lr = 0; lr < g.rows(); ++lr) {
      const cplx v = g(lr, lc);
      if (v != cplx(0.0)) out(scatter(col, lr), col) = v;
    }
  }
  return out;
}

inline Matrix circuit_unitary(const Circuit& c) {
  const Eigen::Index dim = Eigen::Index{1} << c.width();
  Matrix u = Matrix::Identity(dim, dim);
  for (const GateOp& g : c.gates()) {
    if (g.kind == GateKind::BARRIER) continue;
    u = embed_gate(gate_matrix(g), g.qubits, c.width()) * u;
  }
  return u;
}

inline CVector simulate_statevector(const Circuit& c) {
  const Eigen::Index dim = Eigen::Index{1} << c.width();
  CVector psi = CVector::Zero(dim);
  psi(0) = 1.0;
  for (const GateOp& g : c.gates()) {
    if (g.kind == GateKind::BARRIER) continue;
    psi = embed_gate(gate_matrix(g), g.qubits, c.width()) * psi;
  }
  return psi;
}

// --- Noise ------------------------------------------------------------------

class NoiseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Per-qubit T1/T2 in microseconds and gate durations in nanoseconds.
/// Durations are keyed "<kind>" or "<kind>:<q0>_<q1>..."; the qubit-specific
/// key wins. Two-qubit keys are also looked up with the qubits reversed.
struct NoiseModel {
  std::vector<double> t1_us;
  std::vector<double> t2_us;
  std::map<std::string, double> durations_ns;

  void validate() const {
    if (t1_us.size() != t2_us.size()) {
      throw NoiseError("noise model: T1 and T2 lists differ in length");
    }
    for (std::size_t q = 0; q < t1_us.size(); ++q) {
      if (!(t1_us[q] > 0.0) || !(t2_us[q] > 0.0)) {
        throw NoiseError("noise model: T1 and T2 must be positive");
      }
      if (t2_us[q] > 2.0 * t1_us[q] * (1.0 + 1e-12)) {
        throw NoiseError("noise model: T2 exceeds 2 T1 on qubit " +
                         std::to_string(q));
      }
    }
    for (const auto& [key, ns] : durations_ns) {
      if (!(ns >= 0.0)) throw NoiseError("negative duration for " + key);
    }
  }

  double duration_ns(const GateOp& g) const {
    const std::string kind = to_string(g.kind);
    auto key = [&](const std::vector<int>& qs) {
      std::string s = kind + ":";
      for (std::size_t i = 0; i < qs.size(); ++i) {
        if (i) s += "_";
        s += std::to_string(qs[i]);
      }
      return s;
    };
    if (g.kind != GateKind::BARRIER) {
      if (auto it = durations_ns.find(key(g.qubits));
          it != durations_ns.end()) {
        return it->second;
      }
      if (g.qubits.size() == 2) {
        const std::vector<int> rev{g.qubits[1], g.qubits[0]};
        if (auto it = durations_ns.find(key(rev)); it != durations_ns.end()) {
          return it->second;
        }
      }
    }
    if (auto it = durations_ns.find(kind); it != durations_ns.end()) {
      return it->second;
    }
    throw NoiseError("noise model: no duration for gate " +
                     (g.kind == GateKind::BARRIER ? kind : key(g.qubits)));
  }

  /// Five-qubit chain calibration snapshot. RZ and barriers are virtual
  /// (zero duration); SX and X take one 35.56 ns pulse.
  static NoiseModel ibmq_manila() {
    NoiseModel m;
    m.t1_us = {177.13, 186.02, 136.19, 184.82, 122.91};
    m.t2_us = {78.73, 75.55, 22.30, 46.64, 43.53};
    m.durations_ns = {{"cx:0_1", 277.33}, {"cx:1_2", 469.33},
                      {"cx:1_0", 312.89}, {"cx:2_3", 355.56},
                      {"cx:2_1", 504.88}, {"cx:3_4", 334.22},
                      {"cx:3_2", 391.11}, {"cx:4_3", 298.67},
                      {"sx", 35.56},      {"x", 35.56},
                      {"rz", 0.0},        {"barrier", 0.0}};
    return m;
  }
};

inline nlohmann::json to_json(const NoiseModel& m) {
  return {{"schema", "qswap.noise"},
          {"version", 1},
          {"t1_us", m.t1_us},
          {"t2_us", m.t2_us},
          {"durations_ns", m.durations_ns}};
}

inline NoiseModel noise_model_from_json(const nlohmann::json& j) {
  NoiseModel m;
  m.t1_us = j.at("t1_us").get<std::vector<double>>();
  m.t2_us = j.at("t2_us").get<std::vector<double>>();
  m.durations_ns = j.at("durations_ns").get<std::map<std::string, double>>();
  m.validate();
  return m;
}

namespace detail {

inline Matrix apply_single_qubit_kraus(const Matrix& rho,
                                       const std::vector<Matrix>& kraus,
                                       int q, int width) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const Matrix& k : kraus) {
    const Matrix full = embed_gate(k, {q}, width);
    out += full * rho * full.adjoint();
  }
  return out;
}

/// Amplitude damping followed by pure dephasing for an interval t.
inline Matrix relax(const Matrix& rho, double t_ns, const NoiseModel& m,
                    int width) {
  if (t_ns <= 0.0) return rho;
  if (static_cast<int>(m.t1_us.size()) < width) {
    throw NoiseError("noise model covers fewer qubits than the circuit");
  }
  Matrix out = rho;
  const double t_us = 1e-3 * t_ns;
  for (int q = 0; q < width; ++q) {
    const double gamma = 1.0 - std::exp(-t_us / m.t1_us[q]);
    Matrix k0 = Matrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - gamma);
    Matrix k1 = Matrix::Zero(2, 2);
    k1(0, 1) = std::sqrt(gamma);
    out = apply_single_qubit_kraus(out, {k0, k1}, q, width);

    const double rate_phi = 1.0 / m.t2_us[q] - 0.5 / m.t1_us[q];
    if (rate_phi > 0.0) {
      const double c = std::exp(-t_us * rate_phi);
      const Matrix d0 = std::sqrt(0.5 * (1.0 + c)) * identity(2);
      const Matrix d1 = std::sqrt(0.5 * (1.0 - c)) * pauli_z();
      out = apply_single_qubit_kraus(out, {d0, d1}, q, width);
    }
  }
  return out;
}

}  // namespace detail

/// Gates run one after another; after each gate every qubit relaxes for the
/// gate's duration.
inline DensityOperator simulate(const Circuit& c,
                                const std::optional<NoiseModel>& noise = {}) {
  if (!noise) return DensityOperator(pure_state(simulate_statevector(c)));
  noise->validate();
  const Eigen::Index dim = Eigen::Index{1} << c.width();
  Matrix rho = Matrix::Zero(dim, dim);
  rho(0, 0) = 1.0;
  for (const GateOp& g : c.gates()) {
    const double t = noise->duration_ns(g);
    if (g.kind != GateKind::BARRIER) {
      const Matrix u = embed_gate(gate_matrix(g), g.qubits, c.width());
      rho = u * rho * u.adjoint();
    }
    rho = detail::relax(rho, t, *noise, c.width());
  }
  return DensityOperator(0.5 * (rho + rho.adjoint()));
}

/// Idle interval on every qubit; used to check the relaxation model.
inline DensityOperator idle(const DensityOperator& rho, double t_ns,
                            const NoiseModel& noise) {
  noise.validate();
  return DensityOperator(detail::relax(rho.matrix(), t_ns, noise,
                                       rho.qubits()));
}

}  // namespace qswap
