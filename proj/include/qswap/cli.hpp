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

// Command-line front end. Exit codes: 0 success, 1 internal failure or a
// failed verify, 2 usage error, 3 invalid parameters.

#include "qswap/acceptance.hpp"
#include "qswap/engine_circuit.hpp"
#include "qswap/engine_model.hpp"
#include "qswap/experiment.hpp"
#include "qswap/simulator.hpp"
#include "qswap/transpiler.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace qswap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;

inline constexpr const char* kOutputDirEnv = "QSWAP_OUTPUT_DIR";

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// --- Parsing helpers ----------------------------------------------------------

/// "start:stop:step" (stop included when hit within 1e-12), a comma list, or
/// a single value. Values are rounded to 12 decimals.
inline std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("bad number '" + s + "' in grid '" + text + "'");
    }
    if (used != s.size() || !std::isfinite(v)) {
      throw UsageError("bad number '" + s + "' in grid '" + text + "'");
    }
    return v;
  };
  auto round12 = [](double v) {
    const double r = std::round(v * 1e12) / 1e12;
    return r == 0.0 ? 0.0 : r;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) {
      throw UsageError("grid '" + text + "' must be start:stop:step");
    }
    const double start = number(parts[0]);
    const double stop = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0) || stop < start) {
      throw UsageError("grid '" + text + "' needs step > 0 and stop >= start");
    }
    const double n = std::floor((stop - start) / step + 1e-9);
    if (n > 1e6) throw UsageError("grid '" + text + "' is too large");
    for (long k = 0; k <= static_cast<long>(n); ++k) {
      const double v = start + k * step;
      if (v > stop + 1e-12) break;
      out.push_back(round12(v));
    }
    return out;
  }
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(round12(number(p)));
  if (out.empty()) throw UsageError("empty grid");
  return out;
}

/// "0", "max", or a number.
struct AlphaChoice {
  std::optional<AlphaPolicy> policy = AlphaPolicy::Max;
  double value = 0.0;

  static AlphaChoice parse(const std::string& s) {
    if (s == "max") return {AlphaPolicy::Max, 0.0};
    if (s == "0" || s == "zero") return {AlphaPolicy::Zero, 0.0};
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size() && std::isfinite(v)) return {std::nullopt, v};
    } catch (const std::exception&) {
    }
    throw UsageError("--alpha expects 0, max or a number, got '" + s + "'");
  }

  EngineParams apply(EngineParams p) const {
    if (policy) return with_alpha(p, *policy);
    p.alpha = value;
    return p;
  }

  std::string str() const {
    if (policy) return *policy == AlphaPolicy::Max ? "max" : "0";
    std::ostringstream s;
    s << value;
    return s.str();
  }
};

// --- Configuration --------------------------------------------------------------

struct Config {
  std::string command;
  double a = 1.0;
  std::string beta_ratio = "2";
  std::string r = "0.05:1.5:0.05";
  double lambda = 0.6;
  std::string alpha = "max";
  std::string evolution = "pswap";
  double theta = 0.0;
  long long shots = 20000;
  int reps = 10;
  std::uint64_t seed = 7;
  bool noise = false;
  std::string device;
  std::string out_dir;
  std::string format = "csv";
  int threads = 0;

  std::vector<double> r_grid() const { return parse_grid(r); }
  std::vector<double> beta_ratio_grid() const { return parse_grid(beta_ratio); }
  AlphaChoice alpha_choice() const { return AlphaChoice::parse(alpha); }

  /// The single beta_ratio for commands that take one value.
  double beta_ratio_value() const {
    const auto g = beta_ratio_grid();
    if (g.size() != 1) {
      throw UsageError("--beta-ratio must be a single value for " + command);
    }
    return g.front();
  }

  RunConfig run_config() const { return {shots, reps, seed}; }

  std::optional<NoiseModel> noise_model() const {
    if (!noise && device.empty()) return std::nullopt;
    if (device.empty()) return NoiseModel::ibmq_manila();
    std::ifstream in(device);
    if (!in) throw ValidationError("cannot read device file " + device);
    try {
      return noise_model_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("device file: ") + e.what());
    } catch (const NoiseError& e) {
      throw ValidationError(e.what());
    }
  }

  void validate() const {
    if (shots < 1) throw ValidationError("--shots must be >= 1");
    if (reps < 1) throw ValidationError("--reps must be >= 1");
    if (format != "csv" && format != "json") {
      throw UsageError("--format must be csv or json");
    }
    if (evolution != "pswap" && evolution != "heisenberg") {
      throw UsageError("--evolution must be pswap or heisenberg");
    }
    alpha_choice();
    r_grid();
    beta_ratio_grid();
  }

  /// Metadata comment carried by every table.
  std::string metadata() const {
    std::ostringstream s;
    s << "qswap " << command << " a=" << a << " beta_ratio=" << beta_ratio
      << " r=" << r << " lambda=" << lambda << " alpha=" << alpha
      << " evolution=" << evolution << " theta=" << theta
      << " shots=" << shots << " reps=" << reps << " seed=" << seed
      << " noise=" << (noise || !device.empty() ? "on" : "off");
    if (!device.empty()) s << " device=" << device;
    return s.str();
  }
};

// --- Tables ---------------------------------------------------------------------

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline Cell opt(const std::optional<double>& v) {
  return v ? Cell(*v) : Cell(std::monostate{});
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string cell_text(const Cell& c) {
  if (std::holds_alternative<double>(c)) {
    return format_double(std::get<double>(c));
  }
  if (std::holds_alternative<long long>(c)) {
    return std::to_string(std::get<long long>(c));
  }
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return "";
}

inline void write_csv(std::ostream& out, const Table& t,
                      const std::string& meta) {
  out << "# " << meta << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    out << (i ? "," : "") << t.columns[i];
  }
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << cell_text(row[i]);
    }
    out << '\n';
  }
}

inline nlohmann::json table_json(const Table& t, const std::string& meta) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (std::holds_alternative<double>(c)) {
        o[t.columns[i]] = std::get<double>(c);
      } else if (std::holds_alternative<long long>(c)) {
        o[t.columns[i]] = std::get<long long>(c);
      } else if (std::holds_alternative<std::string>(c)) {
        o[t.columns[i]] = std::get<std::string>(c);
      } else {
        o[t.columns[i]] = nullptr;
      }
    }
    rows.push_back(std::move(o));
  }
  return {{"metadata", meta}, {"columns", t.columns}, {"rows", rows}};
}

/// Serialised writer: every artifact passes through here, in call order.
class ArtifactWriter {
 public:
  ArtifactWriter(std::filesystem::path dir, std::ostream& log)
      : dir_(std::move(dir)), log_(log) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
      throw ValidationError("output directory " + dir_.string() +
                            " is not writable");
    }
  }

  void table(const std::string& stem, const Table& t, const Config& cfg) {
    if (cfg.format == "json") {
      json(stem + ".json", table_json(t, cfg.metadata()));
    } else {
      text(stem + ".csv", [&](std::ostream& o) {
        write_csv(o, t, cfg.metadata());
      });
    }
  }

  void json(const std::string& name, const nlohmann::json& j) {
    text(name, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  }

  void text(const std::string& name,
            const std::function<void(std::ostream&)>& body) {
    const std::filesystem::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    body(out);
    if (!out) throw std::runtime_error("write failed for " + path.string());
    log_ << "wrote " << path.string() << '\n';
  }

 private:
  std::filesystem::path dir_;
  std::ostream& log_;
};

/// Runs fn(0..n-1) on a small worker pool; results keep index order.
template <typename T>
std::vector<T> parallel_map(std::size_t n, int threads,
                            const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// --- Commands ---------------------------------------------------------------------

inline EngineParams point(const Config& cfg, double beta_ratio, double r) {
  EngineParams p{cfg.a, beta_ratio, r, cfg.lambda, 0.0};
  try {
    validate(p, false);
    p = cfg.alpha_choice().apply(p);
    validate(p);
  } catch (const ParameterError& e) {
    throw ValidationError(e.what());
  }
  return p;
}

inline Table sweep_table(const Config& cfg) {
  const double br = cfg.beta_ratio_value();
  const std::vector<double> grid = cfg.r_grid();
  std::vector<EngineParams> params;
  for (double r : grid) params.push_back(point(cfg, br, r));
  const Evolution evo = cfg.evolution == "heisenberg"
                            ? Evolution::heisenberg(cfg.theta)
                            : Evolution::pswap();
  Table t;
  t.columns = {"r",         "beta_ratio",  "lambda",        "alpha",
               "W",         "Q_A",         "Q_B",           "eta",
               "eta_carnot", "booster",    "eta_plus_booster", "sigma_eng",
               "delta_I",   "delta_discord", "delta_classical", "regime",
               "W_tilde",   "Q_A_tilde",   "eta_tilde"};
  t.rows = parallel_map<std::vector<Cell>>(
      params.size(), cfg.threads, [&](std::size_t i) {
        const EngineParams& p = params[i];
        const ThermoReport rep = run_cycle(p, evo).report;
        const TildeCycle tc = tilde_cycle(p);
        std::optional<double> sum;
        if (rep.eta && rep.booster) sum = *rep.eta + *rep.booster;
        return std::vector<Cell>{p.gap_ratio,     p.beta_ratio,
                                 p.lambda,        p.alpha,
                                 rep.W,           rep.Q_A,
                                 rep.Q_B,         opt(rep.eta),
                                 rep.eta_carnot,  opt(rep.booster),
                                 opt(sum),        rep.sigma_eng,
                                 rep.delta_I,     rep.delta_discord,
                                 rep.delta_classical,
                                 std::string(to_string(rep.regime)),
                                 tc.W,            tc.Q_A,
                                 opt(tc.eta)};
      });
  return t;
}

inline Table phase_table(const Config& cfg) {
  PhaseGrid grid{cfg.beta_ratio_grid(), cfg.r_grid()};
  const AlphaChoice as = cfg.alpha_choice();
  if (!as.policy) {
    throw ValidationError("phase-diagram takes --alpha 0 or max");
  }
  std::vector<PhaseRow> rows;
  try {
    rows = phase_diagram(grid, *as.policy, cfg.a, cfg.lambda);
  } catch (const ParameterError& e) {
    throw ValidationError(e.what());
  }
  Table t;
  t.columns = {"beta_ratio", "r", "W", "Q_A", "Q_B", "regime"};
  for (const PhaseRow& r : rows) {
    t.rows.push_back({r.beta_ratio, r.gap_ratio, r.W, r.Q_A, r.Q_B,
                      std::string(to_string(r.regime))});
  }
  return t;
}

inline int cmd_sweep(const Config& cfg, ArtifactWriter& w) {
  w.table("sweep", sweep_table(cfg), cfg);
  return kExitOk;
}

inline int cmd_phase(const Config& cfg, ArtifactWriter& w) {
  w.table("phase_diagram", phase_table(cfg), cfg);
  return kExitOk;
}

inline int cmd_run_circuit(const Config& cfg, ArtifactWriter& w) {
  const double br = cfg.beta_ratio_value();
  const std::vector<double> grid = cfg.r_grid();
  const RunConfig rc = cfg.run_config();
  const auto noise = cfg.noise_model();
  std::vector<EngineParams> params;
  for (double r : grid) params.push_back(point(cfg, br, r));
  const auto estimates = parallel_map<ThermoEstimate>(
      params.size(), cfg.threads, [&](std::size_t i) {
        return run_shot_experiment(params[i], rc, 1000ULL * i, noise);
      });
  nlohmann::json counts = nlohmann::json::array();
  Table runs;
  runs.columns = {"r", "rep", "W", "Q_A", "Q_B", "eta"};
  Table summary;
  summary.columns = {"r",       "lambda",  "alpha",   "W_mean",  "W_std",
                     "Q_A_mean", "Q_A_std", "Q_B_mean", "Q_B_std",
                     "eta_mean", "eta_std", "W_exact", "Q_A_exact",
                     "Q_B_exact"};
  for (std::size_t i = 0; i < params.size(); ++i) {
    const EngineParams& p = params[i];
    const ThermoEstimate& e = estimates[i];
    nlohmann::json reps = nlohmann::json::array();
    for (std::size_t k = 0; k < e.runs.size(); ++k) {
      reps.push_back(to_json(e.counts[k]));
      runs.rows.push_back({p.gap_ratio, static_cast<long long>(k),
                           e.runs[k].W, e.runs[k].Q_A, e.runs[k].Q_B,
                           opt(efficiency(e.runs[k], p).eta)});
    }
    counts.push_back({{"r", p.gap_ratio}, {"repetitions", reps}});
    const ClosedFormEnergies cf = closed_form_energies(p);
    summary.rows.push_back(
        {p.gap_ratio, p.lambda, p.alpha, e.W.mean, e.W.std, e.Q_A.mean,
         e.Q_A.std, e.Q_B.mean, e.Q_B.std,
         opt(e.eta ? std::optional<double>(e.eta->mean) : std::nullopt),
         opt(e.eta ? std::optional<double>(e.eta->std) : std::nullopt), cf.W,
         cf.Q_A, cf.Q_B});
  }
  w.json("counts.json", {{"schema", "qswap.counts"},
                         {"metadata", cfg.metadata()},
                         {"bit_order", "q0 leftmost"},
                         {"points", counts}});
  w.table("energies", runs, cfg);
  w.table("energies_summary", summary, cfg);
  return kExitOk;
}

inline int cmd_tomography(const Config& cfg, ArtifactWriter& w) {
  const double br = cfg.beta_ratio_value();
  const std::vector<double> grid = cfg.r_grid();
  const RunConfig rc = cfg.run_config();
  std::vector<EngineParams> params;
  for (double r : grid) params.push_back(point(cfg, br, r));
  const auto runs = parallel_map<TomographyRun>(
      params.size(), cfg.threads, [&](std::size_t i) {
        return run_tomography_experiment(params[i], rc, 100000ULL * i);
      });
  Table t;
  t.columns = {"r",           "lambda",          "alpha",
               "sigma_eng",   "delta_I",         "delta_discord",
               "booster",     "eta",             "eta_carnot",
               "eta_plus_booster", "std_sigma_eng", "std_delta_I",
               "std_delta_discord", "std_booster", "std_eta",
               "std_eta_plus_booster", "combined_std", "delta_S_AB",
               "ideal_sigma_eng", "ideal_delta_I", "ideal_booster",
               "actual_initial_sigma_eng", "actual_initial_delta_I",
               "actual_initial_booster"};
  nlohmann::json states = nlohmann::json::array();
  auto mean = [](const std::optional<EstimateWithError>& e) {
    return e ? Cell(e->mean) : Cell(std::monostate{});
  };
  auto sd = [](const std::optional<EstimateWithError>& e) {
    return e ? Cell(e->std) : Cell(std::monostate{});
  };
  for (std::size_t i = 0; i < params.size(); ++i) {
    const EngineParams& p = params[i];
    const TomographyRun& run = runs[i];
    const TomographyLedger& first = run.ledgers.front();
    std::vector<double> ai_sigma, ai_di;
    std::vector<std::optional<double>> ai_b;
    for (const auto& l : run.ledgers) {
      ai_sigma.push_back(l.actual_initial.sigma_eng);
      ai_di.push_back(l.actual_initial.delta_I);
      ai_b.push_back(l.actual_initial.booster);
    }
    t.rows.push_back({p.gap_ratio,
                      p.lambda,
                      p.alpha,
                      run.sigma_eng.mean,
                      run.delta_I.mean,
                      run.delta_discord.mean,
                      mean(run.booster),
                      mean(run.eta),
                      carnot_efficiency(p),
                      mean(run.eta_plus_booster),
                      run.sigma_eng.std,
                      run.delta_I.std,
                      run.delta_discord.std,
                      sd(run.booster),
                      sd(run.eta),
                      sd(run.eta_plus_booster),
                      opt(run.combined_std()),
                      run.delta_S_AB.mean,
                      first.ideal.sigma_eng,
                      first.ideal.delta_I,
                      opt(first.ideal.booster),
                      aggregate_runs(ai_sigma).mean,
                      aggregate_runs(ai_di).mean,
                      mean(aggregate_present(ai_b))});
    states.push_back(
        {{"r", p.gap_ratio},
         {"initial", matrix_to_json(run.last_initial.state.matrix())},
         {"final", matrix_to_json(run.last_final.state.matrix())},
         {"initial_off_x_max", run.last_initial.off_x_max},
         {"initial_imag_max", run.last_initial.imag_max},
         {"final_off_x_max", run.last_final.off_x_max},
         {"final_imag_max", run.last_final.imag_max}});
  }
  w.json("states.json", {{"schema", "qswap.tomography_states"},
                         {"metadata", cfg.metadata()},
                         {"settings", "XX,XY,XZ,YX,YY,YZ,ZX,ZY,ZZ"},
                         {"points", states}});
  w.table("ledger", t, cfg);
  return kExitOk;
}

inline int cmd_transpile(const Config& cfg, ArtifactWriter& w,
                         std::ostream& out) {
  const double br = cfg.beta_ratio_value();
  const std::vector<double> grid = cfg.r_grid();
  if (grid.size() != 1) throw UsageError("transpile takes a single --r value");
  const EngineParams p = point(cfg, br, grid.front());
  const Circuit c = build_engine_circuit(p);
  const BasisCircuit bc = transpile(c);
  const Equivalence eq = verify_transpilation(c, bc);
  const double ns = scheduled_duration_ns(bc, NoiseModel::ibmq_manila());
  nlohmann::json j = to_json(bc);
  j["source"] = to_json(c);
  j["metadata"] = cfg.metadata();
  j["equivalence_residual"] = eq.residual;
  j["duration_ns"] = ns;
  w.json("basis_circuit.json", j);
  std::ostringstream report;
  report << "# " << cfg.metadata() << '\n'
         << "depth " << bc.depth() << '\n'
         << "cx_count " << bc.cx_count() << '\n'
         << "sx_count " << bc.count(GateKind::SX) << '\n'
         << "rz_count " << bc.count(GateKind::RZ) << '\n'
         << "swaps_inserted " << bc.swaps_inserted << '\n'
         << "duration_ns " << format_double(ns) << '\n'
         << "equivalent " << (eq.equivalent ? "yes" : "no") << " residual "
         << format_double(eq.residual) << '\n'
         << text_diagram(bc);
  w.text("transpile_report.txt", [&](std::ostream& o) { o << report.str(); });
  out << "depth " << bc.depth() << ", cx " << bc.cx_count() << ", duration "
      << format_double(ns / 1000.0) << " us, residual "
      << format_double(eq.residual) << '\n';
  return eq.equivalent ? kExitOk : kExitInternal;
}

inline int cmd_verify(std::ostream& out) {
  bool ok = true;
  for (const auto& c : acceptance_criteria()) {
    const CriterionResult r = c();
    ok = ok && r.passed;
    out << format_result(r) << std::endl;
  }
  return ok ? kExitOk : kExitInternal;
}

// --- Entry point ------------------------------------------------------------------

namespace detail {

/// Applies keys from a JSON config file to options not given on the
/// command line; returns the keys taken from the file.
inline std::set<std::string> merge_config_file(
    const std::string& path, CLI::App& app,
    const std::map<std::string, std::function<void(const nlohmann::json&)>>&
        setters) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold an object");
  std::set<std::string> applied;
  for (const auto& [key, value] : j.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw UsageError("config file: unknown key '" + key + "'");
    }
    CLI::Option* o = app.get_option_no_throw("--" + key);
    if (o != nullptr && o->count() > 0) continue;
    try {
      it->second(value);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config file key '" + key + "': " + e.what());
    }
    applied.insert(key);
  }
  return applied;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Correlated two-qubit partial-SWAP engine toolkit"};
  app.require_subcommand(1);
  Config cfg;
  std::string config_file;

  const char* env_dir = std::getenv(kOutputDirEnv);
  cfg.out_dir = env_dir != nullptr && *env_dir != '\0' ? env_dir : "qswap_out";

  std::map<std::string, std::function<void(const nlohmann::json&)>> setters;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--a", cfg.a, "beta_A * eps_A");
    sub->add_option("--beta-ratio", cfg.beta_ratio,
                    "beta_B / beta_A (value or grid)");
    sub->add_option("--r", cfg.r, "gap ratio eps_B/eps_A grid start:stop:step");
    sub->add_option("--lambda", cfg.lambda, "partial-SWAP strength");
    sub->add_option("--alpha", cfg.alpha, "0, max or a number");
    sub->add_option("--out-dir", cfg.out_dir, "output directory");
    sub->add_option("--format", cfg.format, "csv or json");
    sub->add_option("--config", config_file, "JSON config file");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--shots", cfg.shots, "shots per repetition");
    sub->add_option("--reps", cfg.reps, "repetitions");
    sub->add_option("--seed", cfg.seed, "RNG seed");
  };
  setters["a"] = [&](const nlohmann::json& v) { cfg.a = v.get<double>(); };
  auto str_or_num = [](const nlohmann::json& v) {
    return v.is_string() ? v.get<std::string>() : format_double(v.get<double>());
  };
  setters["beta-ratio"] = [&](const nlohmann::json& v) {
    cfg.beta_ratio = str_or_num(v);
  };
  setters["r"] = [&](const nlohmann::json& v) { cfg.r = str_or_num(v); };
  setters["lambda"] = [&](const nlohmann::json& v) {
    cfg.lambda = v.get<double>();
  };
  setters["alpha"] = [&](const nlohmann::json& v) {
    cfg.alpha = str_or_num(v);
  };
  setters["out-dir"] = [&](const nlohmann::json& v) {
    cfg.out_dir = v.get<std::string>();
  };
  setters["format"] = [&](const nlohmann::json& v) {
    cfg.format = v.get<std::string>();
  };
  setters["threads"] = [&](const nlohmann::json& v) {
    cfg.threads = v.get<int>();
  };
  setters["shots"] = [&](const nlohmann::json& v) {
    cfg.shots = v.get<long long>();
  };
  setters["reps"] = [&](const nlohmann::json& v) { cfg.reps = v.get<int>(); };
  setters["seed"] = [&](const nlohmann::json& v) {
    cfg.seed = v.get<std::uint64_t>();
  };
  setters["noise"] = [&](const nlohmann::json& v) {
    cfg.noise = v.get<bool>();
  };
  setters["device"] = [&](const nlohmann::json& v) {
    cfg.device = v.get<std::string>();
  };
  setters["evolution"] = [&](const nlohmann::json& v) {
    cfg.evolution = v.get<std::string>();
  };
  setters["theta"] = [&](const nlohmann::json& v) {
    cfg.theta = v.get<double>();
  };

  CLI::App* sweep = app.add_subcommand("sweep", "analytic cycle over an r grid");
  add_common(sweep);
  sweep->add_option("--evolution", cfg.evolution, "pswap or heisenberg");
  sweep->add_option("--theta", cfg.theta, "Heisenberg angle J t");

  CLI::App* phase =
      app.add_subcommand("phase-diagram", "regimes over beta_ratio x r");
  add_common(phase);

  CLI::App* circuit =
      app.add_subcommand("run-circuit", "shot-sampled engine circuit");
  add_common(circuit);
  add_run(circuit);
  circuit->add_flag("--noise", cfg.noise, "enable the T1/T2 model");
  circuit->add_option("--device", cfg.device, "noise model JSON file");

  CLI::App* tomo = app.add_subcommand("tomography", "tomography ledger");
  add_common(tomo);
  add_run(tomo);

  CLI::App* trans = app.add_subcommand("transpile", "lower to RZ/SX/CNOT");
  add_common(trans);

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (sub == verify) return cmd_verify(out);
    std::set<std::string> from_file;
    if (!config_file.empty()) {
      from_file = detail::merge_config_file(config_file, *sub, setters);
    }
    auto given = [&](const std::string& key) {
      return sub->get_option("--" + key)->count() > 0 ||
             from_file.count(key) > 0;
    };
    if (sub == phase && !given("beta-ratio")) cfg.beta_ratio = "1.25:5:0.25";
    if (sub == trans && !given("r")) cfg.r = "0.5";
    cfg.validate();
    ArtifactWriter writer(cfg.out_dir, out);
    if (sub == sweep) return cmd_sweep(cfg, writer);
    if (sub == phase) return cmd_phase(cfg, writer);
    if (sub == circuit) return cmd_run_circuit(cfg, writer);
    if (sub == tomo) return cmd_tomography(cfg, writer);
    if (sub == trans) return cmd_transpile(cfg, writer, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParameterError& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ExperimentError& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace qswap::cli
