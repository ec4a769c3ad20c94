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

// Gate-level circuit IR. Rotations follow R(theta) = exp(-i theta G / 2).
// For two-qubit gates qubits[0] is the control and qubits[1] the target.

#include "qswap/qcore.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qswap {

class CircuitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class GateKind { RX, RY, RZ, SX, X, CNOT, CU_PLUS, CU_MINUS, BARRIER };

inline const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::RX:
      return "rx";
    case GateKind::RY:
      return "ry";
    case GateKind::RZ:
      return "rz";
    case GateKind::SX:
      return "sx";
    case GateKind::X:
      return "x";
    case GateKind::CNOT:
      return "cx";
    case GateKind::CU_PLUS:
      return "cu_plus";
    case GateKind::CU_MINUS:
      return "cu_minus";
    case GateKind::BARRIER:
      return "barrier";
  }
  return "?";
}

inline GateKind gate_kind_from_string(const std::string& s) {
  for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::SX,
                     GateKind::X, GateKind::CNOT, GateKind::CU_PLUS,
                     GateKind::CU_MINUS, GateKind::BARRIER}) {
    if (s == to_string(k)) return k;
  }
  throw CircuitError("unknown gate kind '" + s + "'");
}

/// Number of qubits a gate kind acts on; 0 means any (barrier).
inline int gate_arity(GateKind k) {
  switch (k) {
    case GateKind::CNOT:
    case GateKind::CU_PLUS:
    case GateKind::CU_MINUS:
      return 2;
    case GateKind::BARRIER:
      return 0;
    default:
      return 1;
  }
}

inline int gate_param_count(GateKind k) {
  switch (k) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::CU_PLUS:
    case GateKind::CU_MINUS:
      return 1;
    default:
      return 0;
  }
}

struct GateOp {
  GateKind kind = GateKind::BARRIER;
  std::vector<int> qubits;
  std::vector<double> params;

  bool operator==(const GateOp&) const = default;
};

// --- Gate matrices ----------------------------------------------------------

/// U_+(x) = sqrt(1-x) 1 + i sigma_Y sqrt(x), U_-(x) = sqrt(1-x) 1 - i sigma_Y
/// sqrt(x). Both are real rotations and U_-(x) = U_+(x)^dagger.
inline Matrix u_pm_gate(int sign, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw CircuitError("u_pm_gate: argument must lie in [0, 1]");
  }
  if (sign != 1 && sign != -1) throw CircuitError("u_pm_gate: sign is +-1");
  const double c = std::sqrt(1.0 - x);
  const double s = sign * std::sqrt(x);
  Matrix u(2, 2);
  u << c, s, -s, c;
  return u;
}

inline Matrix rx_matrix(double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Matrix u(2, 2);
  u << c, cplx(0, -s), cplx(0, -s), c;
  return u;
}

inline Matrix ry_matrix(double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Matrix u(2, 2);
  u << c, -s, s, c;
  return u;
}

inline Matrix rz_matrix(double theta) {
  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = std::polar(1.0, -0.5 * theta);
  u(1, 1) = std::polar(1.0, 0.5 * theta);
  return u;
}

inline Matrix sx_matrix() {
  Matrix u(2, 2);
  u << cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(0.5, -0.5), cplx(0.5, 0.5);
  return u;
}

/// Block diag(1, u) in the |control target> basis.
inline Matrix controlled(const Matrix& u) {
  Matrix m = Matrix::Identity(4, 4);
  m.bottomRightCorner(2, 2) = u;
  return m;
}

inline Matrix cnot_matrix() { return controlled(pauli_x()); }

/// Matrix of a gate on its own qubits, qubits[0] most significant.
inline Matrix gate_matrix(const GateOp& g) {
  switch (g.kind) {
    case GateKind::RX:
      return rx_matrix(g.params.at(0));
    case GateKind::RY:
      return ry_matrix(g.params.at(0));
    case GateKind::RZ:
      return rz_matrix(g.params.at(0));
    case GateKind::SX:
      return sx_matrix();
    case GateKind::X:
      return pauli_x();
    case GateKind::CNOT:
      return cnot_matrix();
    case GateKind::CU_PLUS:
      return controlled(u_pm_gate(+1, g.params.at(0)));
    case GateKind::CU_MINUS:
      return controlled(u_pm_gate(-1, g.params.at(0)));
    case GateKind::BARRIER:
      break;
  }
  throw CircuitError("gate_matrix: barrier has no matrix");
}

// --- Circuit ----------------------------------------------------------------

class Circuit {
 public:
  explicit Circuit(int width) : width_(width) {
    if (width < 1 || width > kMaxQubits) {
      throw CircuitError("circuit width must lie in [1, " +
                         std::to_string(kMaxQubits) + "]");
    }
    for (int q = 0; q < width; ++q) measured_.push_back(q);
  }

  int width() const { return width_; }
  const std::vector<GateOp>& gates() const { return gates_; }
  const std::vector<int>& measured_qubits() const { return measured_; }

  Circuit& add(GateOp g) {
    validate_gate(g);
    gates_.push_back(std::move(g));
    return *this;
  }

  Circuit& rx(int q, double t) { return add({GateKind::RX, {q}, {t}}); }
  Circuit& ry(int q, double t) { return add({GateKind::RY, {q}, {t}}); }
  Circuit& rz(int q, double t) { return add({GateKind::RZ, {q}, {t}}); }
  Circuit& sx(int q) { return add({GateKind::SX, {q}, {}}); }
  Circuit& x(int q) { return add({GateKind::X, {q}, {}}); }
  Circuit& cx(int c, int t) { return add({GateKind::CNOT, {c, t}, {}}); }
  Circuit& cu_plus(int c, int t, double x) {
    return add({GateKind::CU_PLUS, {c, t}, {x}});
  }
  Circuit& cu_minus(int c, int t, double x) {
    return add({GateKind::CU_MINUS, {c, t}, {x}});
  }
  Circuit& barrier() {
    GateOp g{GateKind::BARRIER, {}, {}};
    for (int q = 0; q < width_; ++q) g.qubits.push_back(q);
    return add(std::move(g));
  }

  Circuit& append(const Circuit& other) {
    if (other.width_ > width_) throw CircuitError("append: width mismatch");
    for (const GateOp& g : other.gates_) add(g);
    return *this;
  }

  void set_measured(std::vector<int> qubits) {
    for (int q : qubits) check_index(q);
    measured_ = std::move(qubits);
  }

  bool operator==(const Circuit&) const = default;

 private:
  void check_index(int q) const {
    if (q < 0 || q >= width_) {
      throw CircuitError("qubit index " + std::to_string(q) +
                         " outside circuit width " + std::to_string(width_));
    }
  }

  void validate_gate(const GateOp& g) const {
    const int arity = gate_arity(g.kind);
    if (arity != 0 && static_cast<int>(g.qubits.size()) != arity) {
      throw CircuitError(std::string(to_string(g.kind)) + ": expected " +
                         std::to_string(arity) + " qubit(s)");
    }
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      check_index(g.qubits[i]);
      for (std::size_t j = 0; j < i; ++j) {
        if (g.qubits[i] == g.qubits[j]) {
          throw CircuitError("repeated qubit in gate");
        }
      }
    }
    if (static_cast<int>(g.params.size()) != gate_param_count(g.kind)) {
      throw CircuitError(std::string(to_string(g.kind)) +
                         ": wrong parameter count");
    }
    for (double v : g.params) {
      if (!std::isfinite(v)) throw CircuitError("non-finite gate parameter");
    }
    if (g.kind == GateKind::CU_PLUS || g.kind == GateKind::CU_MINUS) {
      if (g.params[0] < 0.0 || g.params[0] > 1.0) {
        throw CircuitError("controlled U argument must lie in [0, 1]");
      }
    }
  }

  int width_;
  std::vector<GateOp> gates_;
  std::vector<int> measured_;
};

// --- JSON -------------------------------------------------------------------

inline constexpr int kCircuitSchemaVersion = 1;

inline nlohmann::json gate_to_json(const GateOp& g) {
  return {{"kind", to_string(g.kind)},
          {"qubits", g.qubits},
          {"params", g.params}};
}

inline GateOp gate_from_json(const nlohmann::json& j) {
  return {gate_kind_from_string(j.at("kind").get<std::string>()),
          j.at("qubits").get<std::vector<int>>(),
          j.value("params", std::vector<double>{})};
}

inline nlohmann::json to_json(const Circuit& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const GateOp& g : c.gates()) gates.push_back(gate_to_json(g));
  return {{"schema", "qswap.circuit"},
          {"version", kCircuitSchemaVersion},
          {"width", c.width()},
          {"measured", c.measured_qubits()},
          {"gates", gates}};
}

inline Circuit circuit_from_json(const nlohmann::json& j) {
  if (j.value("schema", std::string{}) != "qswap.circuit") {
    throw CircuitError("circuit_from_json: unexpected schema");
  }
  if (j.at("version").get<int>() != kCircuitSchemaVersion) {
    throw CircuitError("circuit_from_json: unsupported version");
  }
  Circuit c(j.at("width").get<int>());
  for (const auto& g : j.at("gates")) c.add(gate_from_json(g));
  c.set_measured(j.at("measured").get<std::vector<int>>());
  return c;
}

}  // namespace qswap
