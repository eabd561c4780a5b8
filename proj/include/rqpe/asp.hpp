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
 * Adiabatic state preparation along H(s) = (1 - s) H_init + s H_exact.
 *
 * Step j of n propagates by exp(-i H(s_mid) dt) with s_mid = (j - 1/2)/n
 * and dt = T/n; each step is an exact exponential. The recorded overlap
 * after step j is attributed to s_j = j/n.
 */
#pragma once

#include "rqpe/core.hpp"
#include "rqpe/hamil.hpp"
#include "rqpe/qsim.hpp"

#include <vector>

namespace rqpe {

enum class AspInterpolation { linear };

struct AspSchedule {
  double total_time = 1000.0;
  int n_steps = 1000;
  AspInterpolation interpolation = AspInterpolation::linear;

  void validate() const {
    if (!std::isfinite(total_time) || !(total_time > 0.0)) throw InputError("ASP total_time must be > 0");
    if (n_steps < 1) throw InputError("ASP n_steps must be >= 1");
  }
};

/// Zero matrix except the HF diagonal element.
inline HamiltonianModel build_h_init(const HamiltonianModel& h_exact, Eigen::Index hf_index) {
  h_exact.validate();
  if (hf_index < 0 || hf_index >= h_exact.dim()) throw DimensionError("hf_index out of range");
  HamiltonianModel h = h_exact;
  h.matrix.setZero();
  h.matrix(hf_index, hf_index) = h_exact.matrix(hf_index, hf_index).real();
  h.label = h_exact.label.empty() ? "init" : h_exact.label + ":init";
  return h;
}

struct AspResult {
  CVector final_state;
  std::vector<double> s_values;
  /// |<psi_target|psi(s_j)>|^2 after each step.
  std::vector<double> overlap;
  double final_overlap = 0.0;
};

/// `track_index` selects the eigenvector of h_exact (ascending energy) the
/// overlap is measured against. `psi0` has h's dimension.
inline AspResult evolve_asp(const HamiltonianModel& h_init, const HamiltonianModel& h_exact,
                            const AspSchedule& schedule, const CVector& psi0,
                            Eigen::Index track_index = 0) {
  h_init.validate();
  h_exact.validate();
  schedule.validate();
  const Eigen::Index d = h_exact.dim();
  if (h_init.dim() != d || psi0.size() != d) throw DimensionError("ASP inputs have different dimensions");
  if (std::abs(psi0.squaredNorm() - 1.0) > 1e-10) throw InputError("ASP initial state is not normalized");
  if (track_index < 0 || track_index >= d) throw DimensionError("track_index out of range");

  const Spectrum target_sp = spectrum(h_exact.matrix);
  const CVector target = target_sp.vectors.col(track_index);
  const double dt = schedule.total_time / schedule.n_steps;

  AspResult r;
  r.s_values.reserve(static_cast<std::size_t>(schedule.n_steps));
  r.overlap.reserve(static_cast<std::size_t>(schedule.n_steps));
  CVector psi = psi0;
  for (int j = 1; j <= schedule.n_steps; ++j) {
    const double s = (j - 0.5) / schedule.n_steps;
    const CMatrix hs = (1.0 - s) * h_init.matrix + s * h_exact.matrix;
    const Spectrum sp = spectrum(hs);
    CVector phases(d);
    for (Eigen::Index i = 0; i < d; ++i) phases[i] = std::polar(1.0, -sp.values[i] * dt);
    psi = sp.vectors * (phases.asDiagonal() * (sp.vectors.adjoint() * psi));
    r.s_values.push_back(static_cast<double>(j) / schedule.n_steps);
    r.overlap.push_back(std::norm(target.dot(psi)));
  }
  r.final_overlap = r.overlap.back();
  r.final_state = std::move(psi);
  return r;
}

}  // namespace rqpe
