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


#include "rqpe/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using rqpe::cli::emit;

template <typename F>
int guarded(F&& f) {
  try {
    f();
    return rqpe::cli::exit_ok;
  } catch (const std::exception& e) {
    rqpe::cli::log(rqpe::cli::LogLevel::error, e.what());
    return rqpe::cli::exit_code_for(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rqpe: phase estimation, state preparation and controlled-U synthesis"};
  app.require_subcommand(1);

  std::string out;

  rqpe::cli::RunIpeaOptions ipea;
  auto* c_ipea = app.add_subcommand("run-ipea", "iterative phase estimation on a Hamiltonian file");
  c_ipea->add_option("hamiltonian", ipea.hamiltonian_file, "hamiltonian/1 JSON file")->required();
  c_ipea->add_option("--bits", ipea.bits, "number of phase bits K")->capture_default_str();
  c_ipea->add_option("--version", ipea.version, "A (keep collapsed register) or B (re-prepare)")->capture_default_str();
  c_ipea->add_option("--initial", ipea.initial, "basis index or statevector/1 file")->capture_default_str();
  c_ipea->add_flag("--count-last-bit", ipea.count_last_bit, "count the least significant bit for success");
  c_ipea->add_option("--csv", ipea.csv_out, "per-bit probability CSV");
  c_ipea->add_option("--out", out, "run record path (default stdout)");

  rqpe::cli::RunAspOptions asp;
  auto* c_asp = app.add_subcommand("run-asp", "adiabatic state preparation from the HF determinant");
  c_asp->add_option("hamiltonian", asp.hamiltonian_file, "hamiltonian/1 JSON file")->required();
  c_asp->add_option("--hf-index", asp.hf_index, "basis index of the HF determinant")->capture_default_str();
  c_asp->add_option("--time", asp.times, "total evolution time(s), comma separated")->delimiter(',');
  c_asp->add_option("--steps", asp.steps, "time steps per run")->capture_default_str();
  c_asp->add_option("--track", asp.track, "eigenvector index followed (0 = lowest)")->capture_default_str();
  c_asp->add_option("--jobs", asp.jobs, "parallel runs across the time sweep")->capture_default_str();
  c_asp->add_option("--csv", asp.csv_out, "trajectory CSV (total_time, s, overlap)");
  c_asp->add_option("--state-out", asp.state_out, "final state of the last time as statevector/1");
  c_asp->add_option("--out", out, "run record path (default stdout)");

  rqpe::cli::DecomposeOptions dec;
  auto* c_dec = app.add_subcommand("decompose", "controlled-U circuit synthesis");
  c_dec->add_option("unitary", dec.unitary_file, "unitary/1 JSON file (2x2 or 4x4)");
  c_dec->add_option("--sbh", dec.sbh, "built-in SbH block: ground or excited");
  c_dec->add_option("--power", dec.power, "power n of U")->capture_default_str();
  c_dec->add_option("--variant", dec.variant, "9 or 10 CNOT form")->capture_default_str();
  c_dec->add_option("--circuit", dec.circuit_out, "circuit/1 JSON output path");
  c_dec->add_option("--out", out, "run record path (default stdout)");

  rqpe::cli::ReproduceSbhOptions sbh;
  auto* c_sbh = app.add_subcommand("reproduce-sbh", "SbH spin-orbit splitting from the built-in circuit parameters");
  c_sbh->add_option("--bits", sbh.bits, "number of phase bits")->capture_default_str();
  c_sbh->add_option("--variant", sbh.variant, "9 or 10 CNOT oracle circuits")->capture_default_str();
  c_sbh->add_option("--out", out, "report path (default stdout)");

  rqpe::cli::DimsOptions dims;
  auto* c_dims = app.add_subcommand("dims", "relativistic and non-relativistic CI dimensions");
  c_dims->add_option("--electrons", dims.electrons, "electron count n")->required();
  c_dims->add_option("--orbitals", dims.orbitals, "Kramers pairs m")->required();
  c_dims->add_option("--out", out, "run record path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : rqpe::cli::exit_input;
  }

  return guarded([&] {
    if (*c_ipea) emit(rqpe::cli::cmd_run_ipea(ipea), out);
    else if (*c_asp) emit(rqpe::cli::cmd_run_asp(asp), out);
    else if (*c_dec) emit(rqpe::cli::cmd_decompose(dec), out);
    else if (*c_sbh) emit(rqpe::cli::cmd_reproduce_sbh(sbh), out);
    else if (*c_dims) emit(rqpe::cli::cmd_dims(dims), out);
  });
}
