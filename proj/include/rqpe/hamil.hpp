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
 * Determinant-basis Hamiltonians, energy windows and exact propagators.
 *
 * A HamiltonianModel stores the relative operator H (total energies are
 * eigenvalues of H plus `shift`). The window maps an eigenvalue E of H to
 * the phase
 *
 *     phi = (sign * E - e_min) / (e_max - e_min),   sign = negate ? -1 : +1
 *
 * and the propagator is exp(-i tau p H_win) with H_win = sign * H - e_min.
 * With tau = 2 pi / width every in-window eigenvector therefore picks up
 * exp(-2 pi i p phi).
 */
#pragma once

#include "rqpe/core.hpp"

#include <string>
#include <utility>

namespace rqpe {

struct EnergyWindow {
  double e_min = 0.0;
  double e_max = 1.0;
  bool negate = false;

  double width() const { return e_max - e_min; }
  double sign() const { return negate ? -1.0 : 1.0; }

  void validate() const {
    if (!std::isfinite(e_min) || !std::isfinite(e_max) || !(e_max > e_min))
      throw InputError("energy window requires finite e_max > e_min");
  }
};

struct HamiltonianModel {
  CMatrix matrix;
  double shift = 0.0;
  EnergyWindow window;
  std::string label;

  Eigen::Index dim() const { return matrix.rows(); }

  void validate() const {
    if (matrix.rows() < 1 || matrix.rows() != matrix.cols())
      throw DimensionError("Hamiltonian must be a non-empty square matrix");
    if (!matrix.allFinite()) throw InputError("Hamiltonian has non-finite entries");
    if (!is_hermitian(matrix, 1e-10)) throw InputError("Hamiltonian is not Hermitian");
    if (!std::isfinite(shift)) throw InputError("Hamiltonian shift is not finite");
    window.validate();
  }
};

inline double window_tau(const EnergyWindow& w) {
  w.validate();
  return two_pi / w.width();
}

/// Total energy for phase phi in [0, 1).
inline double phase_to_energy(double phi, const EnergyWindow& w, double shift) {
  w.validate();
  if (!(phi >= 0.0 && phi < 1.0)) throw InputError("phase must lie in [0, 1)");
  const double e_win = w.e_min + phi * w.width();
  return w.sign() * e_win + shift;
}

inline double phase_to_energy(double phi, const HamiltonianModel& h) {
  return phase_to_energy(phi, h.window, h.shift);
}

/// Phase of a total energy, wrapped to [0, 1); exact inverse of
/// phase_to_energy inside the window.
inline double energy_to_phase(double total_energy, const EnergyWindow& w, double shift) {
  w.validate();
  return wrap_unit((w.sign() * (total_energy - shift) - w.e_min) / w.width());
}

inline double energy_to_phase(double total_energy, const HamiltonianModel& h) {
  return energy_to_phase(total_energy, h.window, h.shift);
}

/// Eigenpairs of H in ascending eigenvalue order (relative energies).
struct Spectrum {
  RVector values;
  CMatrix vectors;
};

inline Spectrum spectrum(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionError("spectrum: matrix must be square");
  if (!is_hermitian(m, 1e-10)) throw InputError("spectrum: matrix is not Hermitian");
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  if (es.info() != Eigen::Success) throw InputError("spectrum: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline Spectrum spectrum(const HamiltonianModel& h) { return spectrum(h.matrix); }

/// Eigenvalues of H_win = sign * H - e_min.
inline RVector windowed_eigenvalues(const RVector& rel, const EnergyWindow& w) {
  return (w.sign() * rel.array() - w.e_min).matrix();
}

/// exp(-i tau power H_win), exact via eigendecomposition.
inline CMatrix propagator(const HamiltonianModel& h, double tau, std::uint64_t power = 1) {
  h.validate();
  if (!std::isfinite(tau)) throw InputError("propagator: tau must be finite");
  if (power < 1) throw InputError("propagator: power must be >= 1");
  const Spectrum sp = spectrum(h.matrix);
  const RVector ew = windowed_eigenvalues(sp.values, h.window);
  CVector phases(ew.size());
  // Reduce tau*power*ew modulo 2 pi in long double before exponentiating so
  // large IPEA powers keep full double precision in the phase fraction.
  for (Eigen::Index i = 0; i < ew.size(); ++i) {
    const long double x = static_cast<long double>(tau) * static_cast<long double>(power) *
                          static_cast<long double>(ew[i]);
    const long double r = std::fmod(x, 2.0L * std::numbers::pi_v<long double>);
    phases[i] = std::polar(1.0, -static_cast<double>(r));
  }
  return sp.vectors * phases.asDiagonal() * sp.vectors.adjoint();
}

/// Propagator on the qubit register: for non-power-of-two dimensions the
/// matrix is padded with an identity block (zero windowed energy).
inline CMatrix register_propagator(const HamiltonianModel& h, double tau, std::uint64_t power = 1) {
  const CMatrix u = propagator(h, tau, power);
  const auto d = static_cast<std::size_t>(u.rows());
  const Eigen::Index padded = Eigen::Index{1} << qubits_for_dim(d);
  if (padded == u.rows()) return u;
  CMatrix out = CMatrix::Identity(padded, padded);
  out.topLeftCorner(u.rows(), u.cols()) = u;
  return out;
}

}  // namespace rqpe
