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
 * Reference controlled-U parameters for the SbH CAS(4,3) blocks (X 0+ and
 * A 1 states at 3.255 a0). These define U directly. A and B coincide up to
 * a global phase, so both are stored with the same (beta, gamma, delta).
 *
 * Reconstruction reads eigenphases lambda_j = exp(-2 pi i phi_j) of the
 * circuit's control-1 block and maps phi_j through the energy window.
 */
#pragma once

#include "rqpe/core.hpp"
#include "rqpe/hamil.hpp"
#include "rqpe/qsd.hpp"

#include <string_view>

namespace rqpe {

enum class SbhState { ground_0plus, excited_1 };

inline std::string_view to_string(SbhState s) {
  return s == SbhState::ground_0plus ? "ground_0plus" : "excited_1";
}

struct SbhReference {
  SbhState state = SbhState::ground_0plus;
  QsdParams params;
  double shift = 0.0;
  EnergyWindow window;
  /// Basis index of the HF determinant.
  Eigen::Index hf_index = 0;
};

inline constexpr double sbh_energy_shift = -6477.89247780;

inline SbhReference sbh_reference(SbhState state) {
  SbhReference r;
  r.state = state;
  r.shift = sbh_energy_shift;
  r.window = EnergyWindow{2.0, 3.5, true};
  if (state == SbhState::ground_0plus) {
    const ZyAngles a{0.0, 0.73125768, -0.10311594, -0.12107336};
    r.params = QsdParams::from_angles({-1.01642278, -0.68574813, 0.69657237, 0.0}, a, a, false);
  } else {
    const ZyAngles a{0.0, -0.00680941, 2.21832498, -3.13494247};
    r.params = QsdParams::from_angles({-1.00656763, -0.18597924, -0.39129153, 0.0}, a, a, true);
  }
  return r;
}

struct SbhReconstruction {
  /// Control-1 block of the power-1 ten-CNOT circuit.
  CMatrix u;
  /// Relative Hamiltonian with the reference shift and window.
  HamiltonianModel h;
  /// Real orthogonal eigenvectors of u (columns) and their phases.
  RMatrix eigenvectors;
  RVector phases;
  /// Total energies phase_to_energy(phases).
  RVector total_energies;
};

inline SbhReconstruction reconstruct(const SbhReference& ref) {
  SbhReconstruction out;
  out.u = controlled_block(build_circuit(ref.params, 1, QsdVariant::ten_cnot_universal));
  const RMatrix q = real_orthogonal_eigenbasis(out.u, 1e-9);
  const CMatrix qc = q.cast<cplx>();
  const CMatrix diag = qc.transpose() * out.u * qc;
  out.eigenvectors = q;
  out.phases.resize(4);
  out.total_energies.resize(4);
  RVector rel(4);
  for (Eigen::Index j = 0; j < 4; ++j) {
    out.phases[j] = wrap_unit(-std::arg(diag(j, j)) / two_pi);
    out.total_energies[j] = phase_to_energy(out.phases[j], ref.window, ref.shift);
    rel[j] = out.total_energies[j] - ref.shift;
  }
  out.h.matrix = (q * rel.asDiagonal() * q.transpose()).cast<cplx>();
  out.h.shift = ref.shift;
  out.h.window = ref.window;
  out.h.label = std::string("SbH ") + std::string(to_string(ref.state));
  return out;
}

/// Column of `eigenvectors` with the largest weight on the HF determinant.
inline Eigen::Index hf_dominant_eigenvector(const SbhReconstruction& rec, Eigen::Index hf_index) {
  Eigen::Index best = 0;
  rec.eigenvectors.row(hf_index).cwiseAbs().maxCoeff(&best);
  return best;
}

/// |phi_00(ground) - phi_00(excited)| * width / 2 pi in cm^-1.
inline double sbh_linear_splitting_cm() {
  const SbhReference g = sbh_reference(SbhState::ground_0plus);
  const SbhReference e = sbh_reference(SbhState::excited_1);
  return std::abs(g.params.phi[0] - e.params.phi[0]) * g.window.width() / two_pi * hartree_to_wavenumber;
}

}  // namespace rqpe
