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

// Thermodynamics of the two-qubit partial-SWAP engine with an initially
// correlated working substance.
//
// Conventions: eps_A = 1 energy unit, k_B = hbar = 1. Each qubit has
// H_i = -eps_i/2 sigma_Z, so |0> is the ground state and |1> the excited
// state. Two-qubit basis order is |AB> = |00>, |01>, |10>, |11>. The
// thermal excited population is p_i = exp(-a_i/2) / Z_i = 1 / (1 + e^{a_i})
// with a_i = beta_i eps_i and Z_i = 2 cosh(a_i / 2).

#include "qswap/qcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qswap {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kFlowTolerance = 1e-12;

struct EngineParams {
  double a = 1.0;           // beta_A * eps_A
  double beta_ratio = 2.0;  // beta_B / beta_A
  double gap_ratio = 0.5;   // eps_B / eps_A
  double lambda = 0.6;      // partial-SWAP strength
  double alpha = 0.0;       // real correlation amplitude

  double eps_a() const { return 1.0; }
  double eps_b() const { return gap_ratio; }
  double beta_a() const { return a; }
  double beta_b() const { return a * beta_ratio; }
  double a_a() const { return a; }
  double a_b() const { return beta_b() * eps_b(); }
};

enum class AlphaPolicy { Zero, Max };

struct ThermalQubit {
  double p = 0.5;  // excited-state population
  double Z = 2.0;
  Matrix rho;      // diag(1 - p, p)
};

inline ThermalQubit thermal_state(double a_i) {
  if (!(a_i > 0.0) || !std::isfinite(a_i)) {
    throw ParameterError("thermal_state: beta*eps must be positive, got " +
                         std::to_string(a_i));
  }
  ThermalQubit t;
  t.Z = 2.0 * std::cosh(0.5 * a_i);
  t.p = 1.0 / (1.0 + std::exp(a_i));
  t.rho = Matrix::Zero(2, 2);
  t.rho(0, 0) = 1.0 - t.p;
  t.rho(1, 1) = t.p;
  return t;
}

/// 1 / (Z_A Z_B); the correlation amplitude bound used by the engine.
inline double alpha_max(const EngineParams& p) {
  return 1.0 / (thermal_state(p.a_a()).Z * thermal_state(p.a_b()).Z);
}

inline void validate(const EngineParams& p, bool check_alpha = true) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(p.a) || !(p.a > 0.0)) {
    throw ParameterError("a = beta_A*eps_A must be positive");
  }
  if (!finite(p.beta_ratio) || !(p.beta_ratio > 0.0)) {
    throw ParameterError("beta_ratio must be positive");
  }
  if (!finite(p.gap_ratio) || !(p.gap_ratio > 0.0)) {
    throw ParameterError("gap ratio eps_B/eps_A must be positive");
  }
  if (!finite(p.lambda) || p.lambda < 0.0 || p.lambda > 1.0) {
    throw ParameterError("lambda must lie in [0, 1]");
  }
  if (!finite(p.alpha)) throw ParameterError("alpha must be finite");
  if (check_alpha) {
    const double bound = alpha_max(p);
    if (std::abs(p.alpha) > bound * (1.0 + 1e-12)) {
      throw ParameterError("|alpha| = " + std::to_string(std::abs(p.alpha)) +
                           " exceeds alpha_max = " + std::to_string(bound));
    }
  }
}

inline EngineParams with_alpha(EngineParams p, AlphaPolicy policy) {
  p.alpha = policy == AlphaPolicy::Max ? alpha_max(p) : 0.0;
  return p;
}

// --- Populations and states -------------------------------------------------

struct DressedPopulations {
  double plus = 0.0;
  double minus = 0.0;
};

/// Excited populations of the uncorrelated pair whose spectrum matches the
/// correlated state. Qubit A carries p_plus, qubit B carries p_minus.
inline DressedPopulations dressed_populations(const EngineParams& p) {
  const double pa = thermal_state(p.a_a()).p;
  const double pb = thermal_state(p.a_b()).p;
  const double root =
      std::sqrt((pb - pa) * (pb - pa) + 4.0 * p.alpha * p.alpha);
  DressedPopulations d{0.5 * (pa + pb + root), 0.5 * (pa + pb - root)};
  if (d.minus < -tol::kPsd) {
    throw ParameterError("dressed_populations: alpha too large, p_minus < 0");
  }
  d.minus = std::max(d.minus, 0.0);
  return d;
}

/// Correlated initial state without physicality checks (used by the
/// positivity scan).
inline Matrix initial_state_matrix(double pa, double pb, double alpha) {
  const double a2 = alpha * alpha;
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = (1.0 - pa) * (1.0 - pb) - a2;
  m(1, 1) = pb * (1.0 - pa) + a2;
  m(2, 2) = pa * (1.0 - pb) + a2;
  m(3, 3) = pa * pb - a2;
  m(1, 2) = alpha;
  m(2, 1) = alpha;
  return m;
}

inline DensityOperator initial_state(const EngineParams& p) {
  validate(p);
  return DensityOperator(initial_state_matrix(
      thermal_state(p.a_a()).p, thermal_state(p.a_b()).p, p.alpha));
}

/// nu_1..nu_4 in closed form, in the order nu_1 (small block eigenvalue),
/// nu_2 = |00> population, nu_3 = |11> population, nu_4 (large block
/// eigenvalue).
inline std::array<double, 4> initial_spectrum_closed_form(
    const EngineParams& p) {
  const double pa = thermal_state(p.a_a()).p;
  const double pb = thermal_state(p.a_b()).p;
  const double a2 = p.alpha * p.alpha;
  const double root = std::sqrt((pb - pa) * (pb - pa) + 4.0 * a2);
  const double block = pa + pb - 2.0 * pa * pb + 2.0 * a2;
  return {0.5 * (block - root), (1.0 - pa) * (1.0 - pb) - a2, pa * pb - a2,
          0.5 * (block + root)};
}

/// rho~_A (x) rho~_B, the thermalised product state before correlations are
/// written in.
inline DensityOperator tilde_state(const EngineParams& p) {
  validate(p);
  const DressedPopulations d = dressed_populations(p);
  Matrix ra = Matrix::Zero(2, 2);
  ra(0, 0) = 1.0 - d.plus;
  ra(1, 1) = d.plus;
  Matrix rb = Matrix::Zero(2, 2);
  rb(0, 0) = 1.0 - d.minus;
  rb(1, 1) = d.minus;
  return DensityOperator(tensor_product(ra, rb));
}

/// Largest alpha for which the initial-state matrix stays PSD, found by
/// bisection on its minimum eigenvalue.
inline double psd_alpha_boundary(const EngineParams& p) {
  validate(p, false);
  const double pa = thermal_state(p.a_a()).p;
  const double pb = thermal_state(p.a_b()).p;
  auto min_eig = [&](double al) {
    return hermitian_eig(initial_state_matrix(pa, pb, al))
        .eigenvalues.minCoeff();
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (min_eig(mid) >= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

// --- Hamiltonians and unitaries ---------------------------------------------

inline Matrix qubit_hamiltonian(double eps) { return -0.5 * eps * pauli_z(); }

inline Matrix hamiltonian_ab(const EngineParams& p) {
  return tensor_product(qubit_hamiltonian(p.eps_a()), identity(2)) +
         tensor_product(identity(2), qubit_hamiltonian(p.eps_b()));
}

/// Real rotation on span{|01>,|10>}: the CNOT-framed controlled U_+(lambda).
inline Matrix pswap_unitary(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ParameterError("pswap_unitary: lambda must lie in [0, 1]");
  }
  const double c = std::sqrt(1.0 - lambda);
  const double s = std::sqrt(lambda);
  Matrix u = Matrix::Identity(4, 4);
  u(1, 1) = c;
  u(1, 2) = s;
  u(2, 1) = -s;
  u(2, 2) = c;
  return u;
}

inline Matrix swap_matrix() {
  Matrix s = Matrix::Zero(4, 4);
  s(0, 0) = 1;
  s(1, 2) = 1;
  s(2, 1) = 1;
  s(3, 3) = 1;
  return s;
}

/// exp(-i theta/2 sum_j sigma_j (x) sigma_j) with theta = J t. Uses
/// sum_j sigma_j (x) sigma_j = 2 SWAP - 1 and SWAP^2 = 1.
inline Matrix heisenberg_unitary(double theta) {
  const cplx phase = std::exp(cplx(0.0, 0.5 * theta));
  return phase * (std::cos(theta) * identity(4) -
                  cplx(0.0, std::sin(theta)) * swap_matrix());
}

struct Evolution {
  enum class Kind { PartialSwap, Heisenberg };
  Kind kind = Kind::PartialSwap;
  double theta = 0.0;  // Heisenberg only

  static Evolution pswap() { return {}; }
  static Evolution heisenberg(double theta) {
    return {Kind::Heisenberg, theta};
  }
};

inline Matrix evolution_unitary(const EngineParams& p, const Evolution& e) {
  return e.kind == Evolution::Kind::PartialSwap ? pswap_unitary(p.lambda)
                                                : heisenberg_unitary(e.theta);
}

// --- Regimes ---------------------------------------------------------------

enum class Regime { Refrigerator, Engine, Accelerator, Idle };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Refrigerator:
      return "refrigerator";
    case Regime::Engine:
      return "engine";
    case Regime::Accelerator:
      return "accelerator";
    case Regime::Idle:
      return "idle";
  }
  return "idle";
}

inline Regime classify_regime(double w, double qa, double qb,
                              double tol = kFlowTolerance) {
  if (w < -tol && qa > tol) return Regime::Engine;
  if (w > tol && qb > tol) return Regime::Refrigerator;
  if (w > tol && qa > tol && qb < -tol) return Regime::Accelerator;
  return Regime::Idle;
}

// --- Energetics -------------------------------------------------------------

struct EnergyFlows {
  double W = 0.0;
  double Q_A = 0.0;
  double Q_B = 0.0;
};

/// Q_i = -Tr[(rho_i^f - rho_i^0) H_i], W = Tr[(rho^f - rho^0) H_AB].
inline EnergyFlows energy_flows(const DensityOperator& rho0,
                                const DensityOperator& rhof,
                                const EngineParams& p) {
  const Matrix d = rhof.matrix() - rho0.matrix();
  const int qa[1] = {0};
  const int qb[1] = {1};
  const Matrix da = reduced_matrix(d, qa);
  const Matrix db = reduced_matrix(d, qb);
  EnergyFlows f;
  f.Q_A = -(da * qubit_hamiltonian(p.eps_a())).trace().real();
  f.Q_B = -(db * qubit_hamiltonian(p.eps_b())).trace().real();
  f.W = (d * hamiltonian_ab(p)).trace().real();
  return f;
}

struct ClosedFormEnergies {
  double W = 0.0;
  double Q_A = 0.0;
  double Q_B = 0.0;
  double f = 0.0;
};

/// W = 2(eps_B - eps_A) f, Q_A = 2 eps_A f, Q_B = -2 eps_B f with
/// f = lambda sinh(dnu)/(Z_A Z_B) + alpha sqrt(lambda (1 - lambda)),
/// dnu = (eps_B beta_B - eps_A beta_A) / 2.
inline ClosedFormEnergies closed_form_energies(const EngineParams& p) {
  validate(p);
  const ThermalQubit ta = thermal_state(p.a_a());
  const ThermalQubit tb = thermal_state(p.a_b());
  const double dnu = 0.5 * (p.a_b() - p.a_a());
  ClosedFormEnergies e;
  e.f = p.lambda * std::sinh(dnu) / (ta.Z * tb.Z) +
        p.alpha * std::sqrt(p.lambda * (1.0 - p.lambda));
  e.W = 2.0 * (p.eps_b() - p.eps_a()) * e.f;
  e.Q_A = 2.0 * p.eps_a() * e.f;
  e.Q_B = -2.0 * p.eps_b() * e.f;
  return e;
}

inline double carnot_efficiency(const EngineParams& p) {
  return 1.0 - p.beta_a() / p.beta_b();
}

struct Efficiency {
  std::optional<double> eta;  // absent outside engine mode
  double eta_carnot = 0.0;
};

inline Efficiency efficiency(const EnergyFlows& flows, const EngineParams& p) {
  Efficiency e;
  e.eta_carnot = carnot_efficiency(p);
  if (classify_regime(flows.W, flows.Q_A, flows.Q_B) == Regime::Engine) {
    e.eta = -flows.W / flows.Q_A;
  }
  return e;
}

// --- Geometric discord ------------------------------------------------------

enum class DiscordMode { XFormula, XApproximation, BruteForce };

inline constexpr double kXStructureTolerance = 1e-6;

inline bool is_x_state(const Matrix& rho, double tolerance =
                                              kXStructureTolerance) {
  if (rho.rows() != 4 || rho.cols() != 4) return false;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool allowed = i == j || (i == 1 && j == 2) || (i == 2 && j == 1);
      if (!allowed && std::abs(rho(i, j)) > tolerance) return false;
    }
  }
  return true;
}

/// Keeps the diagonal and the |01><10| coherence magnitude; the X-matrix
/// approximation applied to measured states.
inline Matrix x_state_approximation(const Matrix& rho) {
  Matrix x = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) x(i, i) = rho(i, i).real();
  const double z = std::abs(0.5 * (rho(1, 2) + std::conj(rho(2, 1))));
  x(1, 2) = z;
  x(2, 1) = z;
  return x;
}

/// k1 - 2k2 + 4z^2 - max(k1 - 2k2, 2z^2) with k1 = a^2+b^2+c^2+d^2,
/// k2 = ac + bd.
inline double discord_x_formula(const Matrix& rho) {
  const double a = rho(0, 0).real();
  const double b = rho(1, 1).real();
  const double c = rho(2, 2).real();
  const double d = rho(3, 3).real();
  const double z = std::abs(rho(1, 2));
  const double k1 = a * a + b * b + c * c + d * d;
  const double k2 = a * c + b * d;
  const double base = k1 - 2.0 * k2;
  return std::max(base + 4.0 * z * z - std::max(base, 2.0 * z * z), 0.0);
}

namespace detail {

/// ||rho - Pi(rho)||_F^2 for a projective measurement of qubit A along the
/// Bloch direction (theta, phi).
inline double measurement_distance(const Matrix& rho, double theta,
                                   double phi) {
  CVector psi(2);
  psi << std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi);
  const Matrix p0 = psi * psi.adjoint();
  const Matrix p1 = identity(2) - p0;
  const Matrix P0 = tensor_product(p0, identity(2));
  const Matrix P1 = tensor_product(p1, identity(2));
  const Matrix measured = P0 * rho * P0 + P1 * rho * P1;
  return (rho - measured).squaredNorm();
}

}  // namespace detail

/// Minimum squared Hilbert-Schmidt distance between rho and its post-
/// measurement states over projective measurements on qubit A. A 64 x 128
/// Bloch grid seeds a compass search.
inline double discord_brute_force(const Matrix& rho) {
  constexpr int kTheta = 64;
  constexpr int kPhi = 128;
  const double pi = std::numbers::pi;
  double best = std::numeric_limits<double>::infinity();
  double bt = 0.0;
  double bp = 0.0;
  for (int i = 0; i < kTheta; ++i) {
    const double th = pi * i / kTheta;
    for (int j = 0; j < kPhi; ++j) {
      const double ph = 2.0 * pi * j / kPhi;
      const double v = detail::measurement_distance(rho, th, ph);
      if (v < best) {
        best = v;
        bt = th;
        bp = ph;
      }
    }
  }
  double step_t = pi / kTheta;
  double step_p = 2.0 * pi / kPhi;
  while (step_t > 1e-10) {
    bool improved = false;
    const double cand[4][2] = {{bt + step_t, bp},
                               {bt - step_t, bp},
                               {bt, bp + step_p},
                               {bt, bp - step_p}};
    for (const auto& c : cand) {
      const double v = detail::measurement_distance(rho, c[0], c[1]);
      if (v < best) {
        best = v;
        bt = c[0];
        bp = c[1];
        improved = true;
      }
    }
    if (!improved) {
      step_t *= 0.5;
      step_p *= 0.5;
    }
  }
  return std::max(best, 0.0);
}

inline double geometric_discord(const DensityOperator& rho,
                                DiscordMode mode = DiscordMode::XFormula) {
  if (rho.dim() != 4) {
    throw DimensionError("geometric_discord: expected a two-qubit state");
  }
  switch (mode) {
    case DiscordMode::XFormula:
      if (!is_x_state(rho.matrix())) {
        throw QuantumError("geometric_discord: state is not of X form");
      }
      return discord_x_formula(rho.matrix());
    case DiscordMode::XApproximation:
      return discord_x_formula(x_state_approximation(rho.matrix()));
    case DiscordMode::BruteForce:
      return discord_brute_force(rho.matrix());
  }
  return 0.0;
}

// --- Entropy ledger ---------------------------------------------------------

struct EntropyLedger {
  double sigma_eng = 0.0;    // D[rho_A^f||rho_A^0] + D[rho_B^f||rho_B^0]
  double delta_I = 0.0;      // dS_A + dS_B
  double delta_S_AB = 0.0;   // zero for unitary strokes
  double delta_discord = 0.0;
  double delta_classical = 0.0;  // delta_I - delta_discord
  double Q_A = 0.0;
  std::optional<double> booster;  // (sigma + dI) / (beta_B Q_A)
};

inline EntropyLedger entropy_ledger(const DensityOperator& rho0,
                                    const DensityOperator& rhof,
                                    const EngineParams& p,
                                    DiscordMode mode = DiscordMode::XFormula) {
  const DensityOperator a0 = partial_trace(rho0, Subsystem::A);
  const DensityOperator b0 = partial_trace(rho0, Subsystem::B);
  const DensityOperator af = partial_trace(rhof, Subsystem::A);
  const DensityOperator bf = partial_trace(rhof, Subsystem::B);
  EntropyLedger l;
  l.sigma_eng = relative_entropy(af, a0) + relative_entropy(bf, b0);
  l.delta_I = (von_neumann_entropy(af) - von_neumann_entropy(a0)) +
              (von_neumann_entropy(bf) - von_neumann_entropy(b0));
  l.delta_S_AB = von_neumann_entropy(rhof) - von_neumann_entropy(rho0);
  l.delta_discord =
      geometric_discord(rhof, mode) - geometric_discord(rho0, mode);
  l.delta_classical = l.delta_I - l.delta_discord;
  l.Q_A = energy_flows(rho0, rhof, p).Q_A;
  if (std::abs(l.Q_A) >= kFlowTolerance) {
    l.booster = (l.sigma_eng + l.delta_I) / (p.beta_b() * l.Q_A);
  }
  return l;
}

// --- Full cycle ---------------------------------------------------------------

struct ThermoReport {
  double W = 0.0;
  double Q_A = 0.0;
  double Q_B = 0.0;
  std::optional<double> eta;
  double eta_carnot = 0.0;
  std::optional<double> booster;
  double sigma_eng = 0.0;
  double delta_I = 0.0;
  double delta_S_AB = 0.0;
  double delta_discord = 0.0;
  double delta_classical = 0.0;
  Regime regime = Regime::Idle;
};

inline ThermoReport make_report(const EnergyFlows& flows,
                                const EntropyLedger& ledger,
                                const EngineParams& p) {
  ThermoReport r;
  r.W = flows.W;
  r.Q_A = flows.Q_A;
  r.Q_B = flows.Q_B;
  const Efficiency e = efficiency(flows, p);
  r.eta = e.eta;
  r.eta_carnot = e.eta_carnot;
  r.booster = ledger.booster;
  r.sigma_eng = ledger.sigma_eng;
  r.delta_I = ledger.delta_I;
  r.delta_S_AB = ledger.delta_S_AB;
  r.delta_discord = ledger.delta_discord;
  r.delta_classical = ledger.delta_classical;
  r.regime = classify_regime(flows.W, flows.Q_A, flows.Q_B);
  return r;
}

inline Regime classify_regime(const ThermoReport& r) {
  return classify_regime(r.W, r.Q_A, r.Q_B);
}

struct CycleResult {
  DensityOperator rho0;
  DensityOperator rhof;
  ThermoReport report;
};

inline CycleResult run_cycle(const EngineParams& p,
                             const Evolution& evolution = Evolution::pswap()) {
  DensityOperator rho0 = initial_state(p);
  const Matrix u = evolution_unitary(p, evolution);
  DensityOperator rhof(u * rho0.matrix() * u.adjoint());
  const EnergyFlows flows = energy_flows(rho0, rhof, p);
  const EntropyLedger ledger = entropy_ledger(rho0, rhof, p);
  ThermoReport report = make_report(flows, ledger, p);
  return {std::move(rho0), std::move(rhof), report};
}

// --- Cycle including the correlation-writing step ---------------------------

struct TildeCycle {
  double W = 0.0;
  double Q_A = 0.0;
  double Q_B = 0.0;
  std::optional<double> eta;
};

/// Flows measured against rho~_A (x) rho~_B instead of the correlated state:
/// W~ = Tr[(rho^f - rho~) H_AB], Q~_i = -Tr[(rho_i^f - rho~_i) H_i].
inline TildeCycle tilde_cycle(const EngineParams& p) {
  const CycleResult c = run_cycle(p);
  const DensityOperator tilde = tilde_state(p);
  const EnergyFlows f = energy_flows(tilde, c.rhof, p);
  TildeCycle t{f.W, f.Q_A, f.Q_B, std::nullopt};
  if (classify_regime(f.W, f.Q_A, f.Q_B) == Regime::Engine) {
    t.eta = -f.W / f.Q_A;
  }
  return t;
}

// --- Phase diagram ------------------------------------------------------------

struct PhaseGrid {
  std::vector<double> beta_ratios;
  std::vector<double> gap_ratios;
};

struct PhaseRow {
  double beta_ratio = 0.0;
  double gap_ratio = 0.0;
  double W = 0.0;
  double Q_A = 0.0;
  double Q_B = 0.0;
  Regime regime = Regime::Idle;
};

inline std::vector<PhaseRow> phase_diagram(const PhaseGrid& grid,
                                           AlphaPolicy policy, double a = 1.0,
                                           double lambda = 0.6) {
  if (grid.beta_ratios.empty() || grid.gap_ratios.empty()) {
    throw ParameterError("phase_diagram: empty grid");
  }
  for (double br : grid.beta_ratios) {
    if (!(br > 1.0)) {
      throw ParameterError("phase_diagram: beta_ratio must exceed 1");
    }
  }
  std::vector<PhaseRow> rows;
  rows.reserve(grid.beta_ratios.size() * grid.gap_ratios.size());
  for (double br : grid.beta_ratios) {
    for (double r : grid.gap_ratios) {
      EngineParams p{a, br, r, lambda, 0.0};
      validate(p, false);
      p = with_alpha(p, policy);
      const ClosedFormEnergies e = closed_form_energies(p);
      rows.push_back(
          {br, r, e.W, e.Q_A, e.Q_B, classify_regime(e.W, e.Q_A, e.Q_B)});
    }
  }
  return rows;
}

}  // namespace qswap
