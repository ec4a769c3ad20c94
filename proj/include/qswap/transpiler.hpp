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

// Lowering to the {RZ, SX, CNOT} basis on a coupling graph.
//
// Single-qubit unitaries are synthesised exactly as
//   U ~ RZ(phi + pi) SX RZ(theta + pi) SX RZ(lambda)
// from the ZYZ angles of U. Runs of single-qubit gates are fused before
// synthesis. Routing is a greedy front-layer pass that inserts SWAPs (three
// CNOTs) along a shortest path; the logical-to-physical layout is tracked
// so the final permutation is known.

#include "qswap/circuit.hpp"
#include "qswap/simulator.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qswap {

class TranspileError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// --- Coupling map -------------------------------------------------------------

class CouplingMap {
 public:
  CouplingMap(int qubits, std::vector<std::pair<int, int>> edges)
      : n_(qubits), edges_(std::move(edges)), adj_(qubits) {
    if (n_ < 1) throw TranspileError("coupling map: no qubits");
    for (auto [a, b] : edges_) {
      if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b) {
        throw TranspileError("coupling map: bad edge");
      }
      adj_[a].push_back(b);
      adj_[b].push_back(a);
    }
    for (auto& v : adj_) std::sort(v.begin(), v.end());
    if (n_ > 1) {
      for (int q = 1; q < n_; ++q) {
        if (shortest_path(0, q).empty()) {
          throw TranspileError("coupling map: graph is not connected");
        }
      }
    }
  }

  static CouplingMap linear(int n = 5) {
    std::vector<std::pair<int, int>> e;
    for (int q = 0; q + 1 < n; ++q) e.emplace_back(q, q + 1);
    return CouplingMap(n, std::move(e));
  }

  int size() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  bool adjacent(int a, int b) const {
    return std::binary_search(adj_[a].begin(), adj_[a].end(), b);
  }

  /// Vertices from a to b inclusive (BFS, lowest index first on ties).
  std::vector<int> shortest_path(int a, int b) const {
    std::vector<int> prev(n_, -1);
    std::vector<bool> seen(n_, false);
    std::queue<int> q;
    q.push(a);
    seen[a] = true;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      if (u == b) break;
      for (int v : adj_[u]) {
        if (!seen[v]) {
          seen[v] = true;
          prev[v] = u;
          q.push(v);
        }
      }
    }
    if (!seen[b]) return {};
    std::vector<int> path{b};
    while (path.back() != a) path.push_back(prev[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
  }

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

// --- Angles and single-qubit synthesis ----------------------------------------

inline constexpr double kAngleEps = 1e-12;

/// Maps an angle into (-pi, pi].
inline double normalize_angle(double t) {
  const double pi = std::numbers::pi;
  double r = std::remainder(t, 2.0 * pi);
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

struct ZyzAngles {
  double phi = 0.0;
  double theta = 0.0;
  double lambda = 0.0;
};

/// U ~ RZ(phi) RY(theta) RZ(lambda), theta in [0, pi].
inline ZyzAngles zyz_angles(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2 || !is_unitary(u, 1e-9)) {
    throw TranspileError("zyz_angles: expected a 2x2 unitary");
  }
  const Matrix v = u / std::sqrt(u.determinant());
  ZyzAngles z;
  z.theta = 2.0 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
  const double sum = 2.0 * std::arg(v(1, 1));
  const double diff = 2.0 * std::arg(v(1, 0));
  if (std::abs(v(1, 0)) < 1e-14) {
    z.phi = sum;
  } else if (std::abs(v(0, 0)) < 1e-14) {
    z.phi = diff;
  } else {
    z.phi = 0.5 * (sum + diff);
    z.lambda = 0.5 * (sum - diff);
  }
  return z;
}

/// Time-ordered {RZ, SX} sequence on `qubit` equal to U up to global phase.
inline std::vector<GateOp> decompose_single_qubit(const Matrix& u,
                                                  int qubit = 0) {
  const ZyzAngles z = zyz_angles(u);
  const double pi = std::numbers::pi;
  std::vector<GateOp> out;
  auto rz = [&](double t) {
    t = normalize_angle(t);
    if (std::abs(t) > kAngleEps) out.push_back({GateKind::RZ, {qubit}, {t}});
  };
  auto sx = [&] { out.push_back({GateKind::SX, {qubit}, {}}); };
  if (z.theta < 1e-10) {
    rz(z.phi + z.lambda);
  } else if (std::abs(z.theta - 0.5 * pi) < 1e-10) {
    rz(z.lambda - 0.5 * pi);
    sx();
    rz(z.phi + 0.5 * pi);
  } else {
    rz(z.lambda);
    sx();
    rz(z.theta + pi);
    sx();
    rz(z.phi + pi);
  }
  return out;
}

/// Product of a time-ordered gate list over `width` qubits.
inline Matrix sequence_unitary(const std::vector<GateOp>& gates, int width) {
  const Eigen::Index dim = Eigen::Index{1} << width;
  Matrix u = Matrix::Identity(dim, dim);
  for (const GateOp& g : gates) {
    if (g.kind == GateKind::BARRIER) continue;
    u = embed_gate(gate_matrix(g), g.qubits, width) * u;
  }
  return u;
}

/// RY(t/2), CNOT, RY(-t/2), CNOT realises a controlled RY(t).
inline std::vector<GateOp> controlled_ry_sequence(double t, int control,
                                                  int target) {
  return {{GateKind::RY, {target}, {0.5 * t}},
          {GateKind::CNOT, {control, target}, {}},
          {GateKind::RY, {target}, {-0.5 * t}},
          {GateKind::CNOT, {control, target}, {}}};
}

/// U_+(x) = RY(-2 asin sqrt x) and U_-(x) = RY(2 asin sqrt x).
inline double u_pm_ry_angle(GateKind kind, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw TranspileError("controlled U argument must lie in [0, 1]");
  }
  const double t = 2.0 * std::asin(std::sqrt(x));
  return kind == GateKind::CU_PLUS ? -t : t;
}

/// Basis-gate sequence for CU_PLUS/CU_MINUS on (control, target).
inline std::vector<GateOp> decompose_controlled(GateKind kind, double x,
                                                int control = 0,
                                                int target = 1) {
  if (kind != GateKind::CU_PLUS && kind != GateKind::CU_MINUS) {
    throw TranspileError("decompose_controlled: expected CU_PLUS/CU_MINUS");
  }
  std::vector<GateOp> out;
  for (const GateOp& g :
       controlled_ry_sequence(u_pm_ry_angle(kind, x), control, target)) {
    if (g.kind == GateKind::RY) {
      for (GateOp& b : decompose_single_qubit(gate_matrix(g), target)) {
        out.push_back(std::move(b));
      }
    } else {
      out.push_back(g);
    }
  }
  return out;
}

// --- Equivalence --------------------------------------------------------------

struct Equivalence {
  bool equivalent = false;
  double residual = 0.0;
};

/// min over phi of ||U - e^{i phi} V||_F, attained at phi = arg Tr(V^dagger U).
inline Equivalence equivalent_up_to_phase(const Matrix& u, const Matrix& v,
                                          double tolerance = tol::kOperator) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw DimensionError("equivalent_up_to_phase: dimension mismatch");
  }
  const cplx overlap = (v.adjoint() * u).trace();
  const cplx phase =
      std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
  const double r = (u - phase * v).norm();
  return {r <= tolerance, r};
}

// --- Basis circuit --------------------------------------------------------------

struct BasisCircuit {
  int width = 0;          // physical qubits
  int logical_width = 0;  // qubits of the source circuit
  std::vector<GateOp> gates;
  std::vector<int> layers;          // ASAP layer of each gate, from 0
  std::vector<int> initial_layout;  // virtual qubit -> physical qubit
  std::vector<int> final_layout;
  int swaps_inserted = 0;

  int depth() const {
    return layers.empty() ? 0 : *std::max_element(layers.begin(),
                                                  layers.end()) + 1;
  }

  int cx_count() const {
    return static_cast<int>(std::count_if(
        gates.begin(), gates.end(),
        [](const GateOp& g) { return g.kind == GateKind::CNOT; }));
  }

  int count(GateKind k) const {
    return static_cast<int>(std::count_if(
        gates.begin(), gates.end(),
        [k](const GateOp& g) { return g.kind == k; }));
  }

  Circuit to_circuit() const {
    Circuit c(width);
    for (const GateOp& g : gates) c.add(g);
    return c;
  }

  Matrix unitary() const { return sequence_unitary(gates, width); }
};

inline std::vector<int> asap_layers(const std::vector<GateOp>& gates,
                                    int width) {
  std::vector<int> ready(width, 0);
  std::vector<int> layers;
  layers.reserve(gates.size());
  for (const GateOp& g : gates) {
    int l = 0;
    for (int q : g.qubits) l = std::max(l, ready[q]);
    layers.push_back(l);
    for (int q : g.qubits) ready[q] = l + 1;
  }
  return layers;
}

/// ASAP schedule length in nanoseconds under the given gate durations.
inline double scheduled_duration_ns(const BasisCircuit& bc,
                                    const NoiseModel& timing) {
  std::vector<double> ready(bc.width, 0.0);
  double end = 0.0;
  for (const GateOp& g : bc.gates) {
    double start = 0.0;
    for (int q : g.qubits) start = std::max(start, ready[q]);
    const double finish = start + timing.duration_ns(g);
    for (int q : g.qubits) ready[q] = finish;
    end = std::max(end, finish);
  }
  return end;
}

/// Permutation taking virtual qubit v to physical qubit layout[v].
inline Matrix layout_permutation(const std::vector<int>& layout) {
  const int n = static_cast<int>(layout.size());
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix p = Matrix::Zero(dim, dim);
  for (Eigen::Index in = 0; in < dim; ++in) {
    Eigen::Index out = 0;
    for (int v = 0; v < n; ++v) {
      const Eigen::Index bit = (in >> (n - 1 - v)) & 1;
      out |= bit << (n - 1 - layout[v]);
    }
    p(out, in) = 1.0;
  }
  return p;
}

/// Source unitary padded with idle qubits and mapped through the layouts,
/// i.e. what the basis circuit must implement.
inline Matrix expected_physical_unitary(const Circuit& source,
                                        const BasisCircuit& bc) {
  Circuit padded(bc.width);
  for (const GateOp& g : source.gates()) {
    if (g.kind != GateKind::BARRIER) padded.add(g);
  }
  const Matrix u = circuit_unitary(padded);
  return layout_permutation(bc.final_layout) * u *
         layout_permutation(bc.initial_layout).adjoint();
}

inline Equivalence verify_transpilation(const Circuit& source,
                                        const BasisCircuit& bc) {
  return equivalent_up_to_phase(bc.unitary(),
                                expected_physical_unitary(source, bc));
}

namespace detail {

struct LogicalOp {
  bool two_qubit = false;
  int a = 0;  // control, or the single qubit
  int b = 0;  // target
  Matrix u;   // single-qubit matrix
};

inline std::vector<LogicalOp> lower_to_cx(const Circuit& c) {
  std::vector<LogicalOp> ops;
  auto single = [&](int q, Matrix m) { ops.push_back({false, q, q, m}); };
  for (const GateOp& g : c.gates()) {
    switch (g.kind) {
      case GateKind::BARRIER:
        break;
      case GateKind::CNOT:
        ops.push_back({true, g.qubits[0], g.qubits[1], {}});
        break;
      case GateKind::CU_PLUS:
      case GateKind::CU_MINUS: {
        const double t = u_pm_ry_angle(g.kind, g.params[0]);
        for (const GateOp& s :
             controlled_ry_sequence(t, g.qubits[0], g.qubits[1])) {
          if (s.kind == GateKind::CNOT) {
            ops.push_back({true, s.qubits[0], s.qubits[1], {}});
          } else {
            single(s.qubits[0], gate_matrix(s));
          }
        }
        break;
      }
      default:
        single(g.qubits[0], gate_matrix(g));
    }
  }
  return ops;
}

inline bool is_basis_gate(const GateOp& g) {
  return g.kind == GateKind::RZ || g.kind == GateKind::SX ||
         g.kind == GateKind::CNOT;
}

}  // namespace detail

/// Lowers `c` onto `map`. Logical qubit i starts on physical qubit i.
inline BasisCircuit transpile(const Circuit& c,
                              const CouplingMap& map = CouplingMap::linear()) {
  if (c.width() > map.size()) {
    throw TranspileError("transpile: circuit width " +
                         std::to_string(c.width()) + " exceeds device size " +
                         std::to_string(map.size()));
  }
  BasisCircuit out;
  out.width = map.size();
  out.logical_width = c.width();
  out.initial_layout.resize(map.size());
  for (int q = 0; q < map.size(); ++q) out.initial_layout[q] = q;
  std::vector<int> layout = out.initial_layout;  // virtual -> physical

  const bool already_basis = std::all_of(
      c.gates().begin(), c.gates().end(), [&](const GateOp& g) {
        return g.kind == GateKind::BARRIER ||
               (detail::is_basis_gate(g) &&
                (g.kind != GateKind::CNOT ||
                 map.adjacent(g.qubits[0], g.qubits[1])));
      });
  if (already_basis) {
    for (const GateOp& g : c.gates()) {
      if (g.kind == GateKind::BARRIER) continue;
      GateOp n = g;
      if (n.kind == GateKind::RZ) {
        n.params[0] = normalize_angle(n.params[0]);
        if (std::abs(n.params[0]) <= kAngleEps) continue;
      }
      out.gates.push_back(std::move(n));
    }
    out.final_layout = layout;
    out.layers = asap_layers(out.gates, out.width);
    return out;
  }

  // Pending fused single-qubit matrix per physical qubit.
  std::vector<std::optional<Matrix>> pending(map.size());
  auto flush = [&](int phys) {
    if (!pending[phys]) return;
    for (GateOp& g : decompose_single_qubit(*pending[phys], phys)) {
      out.gates.push_back(std::move(g));
    }
    pending[phys].reset();
  };
  auto emit_cx = [&](int pc, int pt) {
    flush(pc);
    flush(pt);
    out.gates.push_back({GateKind::CNOT, {pc, pt}, {}});
  };

  std::vector<detail::LogicalOp> remaining = detail::lower_to_cx(c);
  while (!remaining.empty()) {
    std::vector<bool> blocked(map.size(), false);
    std::vector<detail::LogicalOp> next;
    bool progressed = false;
    for (detail::LogicalOp& op : remaining) {
      const bool free =
          !blocked[op.a] && (!op.two_qubit || !blocked[op.b]);
      const bool runnable =
          free && (!op.two_qubit || map.adjacent(layout[op.a], layout[op.b]));
      if (runnable) {
        progressed = true;
        if (op.two_qubit) {
          emit_cx(layout[op.a], layout[op.b]);
        } else {
          auto& slot = pending[layout[op.a]];
          slot = slot ? Matrix(op.u * *slot) : op.u;
        }
      } else {
        blocked[op.a] = true;
        if (op.two_qubit) blocked[op.b] = true;
        next.push_back(std::move(op));
      }
    }
    remaining = std::move(next);
    if (progressed || remaining.empty()) continue;

    // Every front gate is a non-adjacent CNOT: move the first one's control
    // one step along a shortest path.
    const detail::LogicalOp& head = remaining.front();
    const std::vector<int> path =
        map.shortest_path(layout[head.a], layout[head.b]);
    const int p0 = path[0];
    const int p1 = path[1];
    emit_cx(p0, p1);
    emit_cx(p1, p0);
    emit_cx(p0, p1);
    std::swap(pending[p0], pending[p1]);
    for (int& phys : layout) {
      if (phys == p0) {
        phys = p1;
      } else if (phys == p1) {
        phys = p0;
      }
    }
    ++out.swaps_inserted;
  }
  for (int q = 0; q < map.size(); ++q) flush(q);
  out.final_layout = layout;
  out.layers = asap_layers(out.gates, out.width);
  return out;
}

// --- Output -----------------------------------------------------------------

inline nlohmann::json to_json(const BasisCircuit& bc) {
  nlohmann::json gates = nlohmann::json::array();
  for (std::size_t i = 0; i < bc.gates.size(); ++i) {
    nlohmann::json g = gate_to_json(bc.gates[i]);
    g["layer"] = bc.layers[i];
    gates.push_back(std::move(g));
  }
  return {{"schema", "qswap.basis_circuit"},
          {"version", kCircuitSchemaVersion},
          {"width", bc.width},
          {"logical_width", bc.logical_width},
          {"initial_layout", bc.initial_layout},
          {"final_layout", bc.final_layout},
          {"depth", bc.depth()},
          {"cx_count", bc.cx_count()},
          {"swaps_inserted", bc.swaps_inserted},
          {"gates", gates}};
}

/// One line per layer, e.g. "L3: sx q1 | cx q2,q3".
inline std::string text_diagram(const BasisCircuit& bc) {
  std::vector<std::vector<std::string>> rows(bc.depth());
  for (std::size_t i = 0; i < bc.gates.size(); ++i) {
    const GateOp& g = bc.gates[i];
    std::ostringstream s;
    s << to_string(g.kind) << ' ';
    for (std::size_t k = 0; k < g.qubits.size(); ++k) {
      s << (k ? "," : "") << 'q' << g.qubits[k];
    }
    if (!g.params.empty()) s << '(' << g.params[0] << ')';
    rows[bc.layers[i]].push_back(s.str());
  }
  std::ostringstream out;
  for (std::size_t l = 0; l < rows.size(); ++l) {
    out << 'L' << l << ':';
    for (std::size_t k = 0; k < rows[l].size(); ++k) {
      out << (k ? " | " : " ") << rows[l][k];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace qswap
