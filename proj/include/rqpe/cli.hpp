// Copyright 2026 The rqpe Authors
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

/**
 * Command implementations behind the `rqpe` executable. Each command
 * returns a run record
 *
 *   {schema: "rqpe.run/1", command, inputs_digest, inputs, result, timing}
 *
 * where everything except `timing` is a deterministic function of the
 * inputs. Side outputs (CSV, circuits, states) are written where asked.
 */
#pragma once

#include "rqpe/asp.hpp"
#include "rqpe/ci_dims.hpp"
#include "rqpe/hamil.hpp"
#include "rqpe/io.hpp"
#include "rqpe/ipea.hpp"
#include "rqpe/qsd.hpp"
#include "rqpe/sbh.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace rqpe::cli {

using json = nlohmann::json;

/// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_input = 2;
inline constexpr int exit_dimension = 3;
inline constexpr int exit_decomposition = 4;

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

/// Level from RQPE_LOG (error|warn|info|debug); default warn.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* v = std::getenv("RQPE_LOG");
    if (!v) return LogLevel::warn;
    const std::string s(v);
    if (s == "error") return LogLevel::error;
    if (s == "info") return LogLevel::info;
    if (s == "debug") return LogLevel::debug;
    return LogLevel::warn;
  }();
  return level;
}

inline void log(LogLevel level, const std::string& msg) {
  static constexpr const char* names[] = {"error", "warn", "info", "debug"};
  if (level <= log_level()) std::cerr << "rqpe[" << names[static_cast<int>(level)] << "] " << msg << '\n';
}

/// Maps the library's exception types onto exit codes.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const DimensionError*>(&e)) return exit_dimension;
  if (dynamic_cast<const DecompositionError*>(&e)) return exit_decomposition;
  if (dynamic_cast<const InputError*>(&e)) return exit_input;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return exit_input;
  return exit_failure;
}

namespace detail {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using clock = std::chrono::steady_clock;

inline json make_record(const std::string& command, const json& inputs, const std::string& digest_payload,
                        json result, clock::time_point start) {
  json rec;
  rec["schema"] = "rqpe.run/1";
  rec["command"] = command;
  rec["inputs"] = inputs;
  rec["inputs_digest"] = "fnv1a64:" + io::hex64(io::fnv1a64(command + '\n' + inputs.dump() + '\n' + digest_payload));
  rec["result"] = std::move(result);
  const double wall = std::chrono::duration<double>(clock::now() - start).count();
  rec["timing"] = {{"wall_time_s", wall}};
  return rec;
}

inline json bits_json(const std::vector<int>& bits) {
  json a = json::array();
  for (int b : bits) a.push_back(b);
  return a;
}

inline std::string bit_string(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline bool is_index(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

}  // namespace detail

/// Record without its timing field; what determinism is checked against.
inline json deterministic_part(json record) {
  record.erase("timing");
  return record;
}

inline void emit(const json& record, const std::string& out_path) {
  const std::string text = record.dump(2) + "\n";
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    io::write_text(out_path, text);
}

// ------------------------------------------------------------------ run-ipea

struct RunIpeaOptions {
  std::string hamiltonian_file;
  int bits = 17;
  std::string version = "A";
  /// Basis index or statevector/1 file.
  std::string initial = "0";
  bool count_last_bit = false;
  std::string csv_out;
};

inline IpeaVersion parse_version(const std::string& v) {
  if (v == "A" || v == "a") return IpeaVersion::A;
  if (v == "B" || v == "b") return IpeaVersion::B;
  throw InputError("version must be A or B");
}

inline json cmd_run_ipea(const RunIpeaOptions& o) {
  const auto start = detail::clock::now();
  const std::string h_text = io::read_text(o.hamiltonian_file);
  const HamiltonianModel h = io::hamiltonian_from_json(io::parse(h_text, o.hamiltonian_file));
  IpeaConfig cfg;
  cfg.n_bits = o.bits;
  cfg.version = parse_version(o.version);
  cfg.count_last_bit = o.count_last_bit;
  cfg.validate();

  std::string payload = h_text;
  StateVector initial;
  if (detail::is_index(o.initial)) {
    const auto idx = std::stoull(o.initial);
    if (idx >= static_cast<unsigned long long>(h.dim())) throw DimensionError("initial basis index out of range");
    initial = new_basis_state(qubits_for_dim(static_cast<std::size_t>(h.dim())), idx);
  } else {
    const std::string s_text = io::read_text(o.initial);
    payload += '\n' + s_text;
    initial = rqpe::detail::embed_initial(h, io::statevector_from_json(io::parse(s_text, o.initial)));
  }
  log(LogLevel::info, "run-ipea: dim " + std::to_string(h.dim()) + ", " + std::to_string(cfg.n_bits) + " bits");

  const IpeaResult r = run_ipea(h, initial, cfg);
  const SpectralInput spec = spectral_input(h, rqpe::detail::embed_initial(h, initial), h.window);

  json result;
  result["bits"] = detail::bits_json(r.bits);
  result["bit_string"] = detail::bit_string(r.bits);
  result["phase"] = r.phase;
  result["energy"] = r.energy;
  result["per_bit_probability"] = r.per_bit_probability;
  result["success_probability"] = r.total_success_probability;
  result["target_energy"] = spec.target_energy + h.shift;
  result["target_overlap"] = spec.target_overlap;

  if (!o.csv_out.empty()) {
    std::string csv = "k,bit,probability\n";
    for (std::size_t i = 0; i < r.bits.size(); ++i)
      csv += std::to_string(i + 1) + ',' + std::to_string(r.bits[i]) + ',' +
             detail::format_double(r.per_bit_probability[i]) + '\n';
    io::write_text(o.csv_out, csv);
  }
  const json inputs = {{"hamiltonian", o.hamiltonian_file}, {"bits", o.bits},
                       {"version", o.version}, {"initial", o.initial},
                       {"count_last_bit", o.count_last_bit}};
  return detail::make_record("run-ipea", inputs, payload, std::move(result), start);
}

// ------------------------------------------------------------------- run-asp

struct RunAspOptions {
  std::string hamiltonian_file;
  Eigen::Index hf_index = 0;
  std::vector<double> times{1000.0};
  int steps = 1000;
  Eigen::Index track = 0;
  int jobs = 1;
  std::string csv_out;
  /// Final state of the last listed time.
  std::string state_out;
};

inline json cmd_run_asp(const RunAspOptions& o) {
  const auto start = detail::clock::now();
  const std::string h_text = io::read_text(o.hamiltonian_file);
  const HamiltonianModel h = io::hamiltonian_from_json(io::parse(h_text, o.hamiltonian_file));
  if (o.times.empty()) throw InputError("at least one total time is required");
  if (o.jobs < 1) throw InputError("jobs must be >= 1");
  if (o.hf_index < 0 || o.hf_index >= h.dim()) throw DimensionError("hf_index out of range");
  const HamiltonianModel h_init = build_h_init(h, o.hf_index);
  CVector psi0 = CVector::Zero(h.dim());
  psi0[o.hf_index] = 1.0;

  std::vector<AspResult> runs(o.times.size());
  for (std::size_t first = 0; first < o.times.size(); first += static_cast<std::size_t>(o.jobs)) {
    std::vector<std::future<AspResult>> batch;
    const std::size_t last = std::min(o.times.size(), first + static_cast<std::size_t>(o.jobs));
    for (std::size_t i = first; i < last; ++i) {
      const AspSchedule sched{o.times[i], o.steps, AspInterpolation::linear};
      sched.validate();
      batch.push_back(std::async(o.jobs > 1 ? std::launch::async : std::launch::deferred,
                                 [&, sched] { return evolve_asp(h_init, h, sched, psi0, o.track); }));
    }
    for (std::size_t i = first; i < last; ++i) runs[i] = batch[i - first].get();
  }

  const CVector target = spectrum(h.matrix).vectors.col(o.track);
  const double initial_overlap = std::norm(target.dot(psi0));
  json list = json::array();
  std::string csv = "total_time,s,overlap\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    list.push_back({{"total_time", o.times[i]}, {"n_steps", o.steps}, {"final_overlap", runs[i].final_overlap}});
    csv += detail::format_double(o.times[i]) + ",0," + detail::format_double(initial_overlap) + '\n';
    for (std::size_t j = 0; j < runs[i].s_values.size(); ++j)
      csv += detail::format_double(o.times[i]) + ',' + detail::format_double(runs[i].s_values[j]) + ',' +
             detail::format_double(runs[i].overlap[j]) + '\n';
  }
  if (!o.csv_out.empty()) io::write_text(o.csv_out, csv);
  if (!o.state_out.empty()) io::write_text(o.state_out, io::statevector_to_json(runs.back().final_state).dump(2) + "\n");

  json result = {{"initial_overlap", initial_overlap}, {"track_index", o.track}, {"runs", list}};
  const json inputs = {{"hamiltonian", o.hamiltonian_file}, {"hf_index", o.hf_index}, {"times", o.times},
                       {"steps", o.steps}, {"track", o.track}};
  return detail::make_record("run-asp", inputs, h_text, std::move(result), start);
}

// ----------------------------------------------------------------- decompose

struct DecomposeOptions {
  std::string unitary_file;
  /// "ground" or "excited"; used when unitary_file is empty.
  std::string sbh;
  std::uint64_t power = 1;
  int variant = 10;
  std::string circuit_out;
};

inline SbhState parse_sbh_state(const std::string& s) {
  if (s == "ground") return SbhState::ground_0plus;
  if (s == "excited") return SbhState::excited_1;
  throw InputError("--sbh must be ground or excited");
}

inline json zy_json(const ZyAngles& z) {
  return {{"alpha", z.alpha}, {"beta", z.beta}, {"gamma", z.gamma}, {"delta", z.delta}};
}

inline json params_json(const QsdParams& p) {
  return {{"phi", p.phi}, {"mux", p.mux}, {"d", p.d}, {"a", zy_json(p.a_zy)}, {"b", zy_json(p.b_zy)},
          {"v_swap", p.v_swap}};
}

inline json cmd_decompose(const DecomposeOptions& o) {
  const auto start = detail::clock::now();
  if (o.power < 1) throw InputError("power must be >= 1");
  if (o.variant != 9 && o.variant != 10) throw InputError("variant must be 9 or 10");
  if (o.unitary_file.empty() == o.sbh.empty()) throw InputError("give exactly one of a unitary file or --sbh");

  std::string payload;
  Circuit circuit;
  CMatrix target;
  json result;
  if (!o.sbh.empty()) {
    const SbhReference ref = sbh_reference(parse_sbh_state(o.sbh));
    const QsdVariant var = o.variant == 9 ? QsdVariant::nine_cnot : QsdVariant::ten_cnot_universal;
    circuit = build_circuit(ref.params, o.power, var);
    target = controlled(exact_block(ref.params, o.power));
    result["params"] = params_json(ref.params);
  } else {
    payload = io::read_text(o.unitary_file);
    const CMatrix u = io::unitary_from_json(io::parse(payload, o.unitary_file));
    const CMatrix upow = matrix_power(u, o.power);
    target = controlled(upow);
    if (u.rows() == 2) {
      circuit = decompose_controlled_1q(upow);
    } else if (u.rows() == 4) {
      const QsdParams p = decompose_controlled_2q(u);
      circuit = build_circuit(p, o.power, o.variant == 9 ? QsdVariant::nine_cnot : QsdVariant::ten_cnot_universal);
      result["params"] = params_json(p);
    } else {
      throw DimensionError("decompose supports 2x2 and 4x4 unitaries");
    }
  }
  result["n_qubits"] = circuit.n_qubits;
  result["cnot_count"] = circuit.cnot_count();
  result["gate_count"] = circuit.ops.size();
  result["fidelity"] = fidelity(target, circuit_matrix(circuit));
  const json circuit_json = io::to_json(circuit);
  if (!o.circuit_out.empty()) io::write_text(o.circuit_out, circuit_json.dump(2) + "\n");
  result["circuit"] = circuit_json;

  const json inputs = {{"unitary", o.unitary_file}, {"sbh", o.sbh}, {"power", o.power}, {"variant", o.variant}};
  return detail::make_record("decompose", inputs, payload, std::move(result), start);
}

// ------------------------------------------------------------- reproduce-sbh

struct ReproduceSbhOptions {
  int bits = 17;
  int variant = 10;
};

struct SbhRun {
  std::vector<int> bits;
  double phase = 0.0;
  double energy = 0.0;
  double exact_phase = 0.0;
  double exact_energy = 0.0;
  double hf_overlap = 0.0;
  double sp_exact_initial = 0.0;
  double sp_hf_initial = 0.0;
};

inline SbhRun reproduce_state(SbhState state, int n_bits, QsdVariant variant) {
  const SbhReference ref = sbh_reference(state);
  const SbhReconstruction rec = reconstruct(ref);
  const Eigen::Index j = hf_dominant_eigenvector(rec, ref.hf_index);
  const StateVector exact(rec.eigenvectors.col(j).cast<cplx>());
  const StateVector hf = new_basis_state(2, static_cast<std::uint64_t>(ref.hf_index));

  const QsdParams params = ref.params;
  const ControlledPowerOracle oracle = [params, variant](std::uint64_t power) {
    return build_circuit(params, power, variant);
  };
  const IpeaTrace t = trace_ipea(oracle, exact, n_bits, IpeaVersion::A);

  SbhRun r;
  r.bits = t.bits;
  r.phase = bits_to_phase(t.bits);
  r.energy = phase_to_energy(r.phase, ref.window, ref.shift);
  r.exact_phase = rec.phases[j];
  r.exact_energy = rec.total_energies[j];
  r.hf_overlap = std::norm(exact.amplitudes()[ref.hf_index]);
  r.sp_exact_initial = success_probability(rec.u, exact, n_bits, IpeaVersion::A, false);
  r.sp_hf_initial = success_probability(rec.u, hf, n_bits, IpeaVersion::A, false);
  return r;
}

inline json cmd_reproduce_sbh(const ReproduceSbhOptions& o) {
  const auto start = detail::clock::now();
  if (o.variant != 9 && o.variant != 10) throw InputError("variant must be 9 or 10");
  if (o.bits < 2 || o.bits > 40) throw InputError("bits must lie in [2, 40]");
  const QsdVariant var = o.variant == 9 ? QsdVariant::nine_cnot : QsdVariant::ten_cnot_universal;

  json result;
  json states = json::object();
  SbhRun runs[2];
  int i = 0;
  for (SbhState s : {SbhState::ground_0plus, SbhState::excited_1}) {
    const SbhRun r = reproduce_state(s, o.bits, var);
    runs[i++] = r;
    states[std::string(to_string(s))] = {
        {"bits", detail::bits_json(r.bits)}, {"bit_string", detail::bit_string(r.bits)},
        {"phase", r.phase}, {"energy", r.energy}, {"exact_phase", r.exact_phase},
        {"exact_energy", r.exact_energy}, {"hf_overlap", r.hf_overlap},
        {"success_probability_exact_initial", r.sp_exact_initial},
        {"success_probability_hf_initial", r.sp_hf_initial}};
  }
  result["states"] = states;
  result["delta_e_so_cm"] = (runs[1].energy - runs[0].energy) * hartree_to_wavenumber;
  result["delta_e_so_exact_cm"] = (runs[1].exact_energy - runs[0].exact_energy) * hartree_to_wavenumber;
  result["linear_check_cm"] = sbh_linear_splitting_cm();
  result["energy_resolution"] = sbh_reference(SbhState::ground_0plus).window.width() / std::ldexp(1.0, o.bits);

  const json inputs = {{"bits", o.bits}, {"variant", o.variant}};
  return detail::make_record("reproduce-sbh", inputs, "", std::move(result), start);
}

// ---------------------------------------------------------------------- dims

struct DimsOptions {
  std::uint64_t electrons = 2;
  std::uint64_t orbitals = 2;
};

inline json cmd_dims(const DimsOptions& o) {
  const auto start = detail::clock::now();
  const CiDimensions d = ci_dimensions(o.electrons, o.orbitals);
  json result = {{"log_n_nr", d.log_n_nr}, {"log_n_r", d.log_n_r}, {"ratio", d.ratio},
                 {"stirling_ratio", d.stirling_ratio}};
  result["n_nr"] = d.n_nr ? json(*d.n_nr) : json(nullptr);
  result["n_r"] = d.n_r ? json(*d.n_r) : json(nullptr);
  const json inputs = {{"electrons", o.electrons}, {"orbitals", o.orbitals}};
  return detail::make_record("dims", inputs, "", std::move(result), start);
}

}  // namespace rqpe::cli
