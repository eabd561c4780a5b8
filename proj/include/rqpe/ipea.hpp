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
 * Iterative phase estimation with a single read-out qubit.
 *
 * Phase convention: U |psi> = exp(-2 pi i phi) |psi>, phi = 0.phi_1 phi_2 ...
 * Iteration k (run from K down to 1) applies, on read-out qubit 0,
 *
 *     H ; controlled-U^{2^{k-1}} ; Rz(omega_k) ; H ; measure
 *
 * with omega_k = +2 pi (0.0 phi_{k+1} ... phi_K)_2. On an eigenstate this
 * gives P(m) = (1 + (-1)^m cos(theta_k + omega_k)) / 2 where
 * theta_k = -2 pi frac(2^{k-1} phi); the feedback cancels the lower bits so
 * an exactly representable phase is read without error.
 *
 * Version A keeps the collapsed system register between iterations;
 * version B re-prepares the initial state before every iteration.
 */
#pragma once

#include "rqpe/core.hpp"
#include "rqpe/hamil.hpp"
#include "rqpe/qsim.hpp"

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace rqpe {

enum class IpeaVersion { A, B };

struct IpeaConfig {
  int n_bits = 17;
  IpeaVersion version = IpeaVersion::A;
  /// Overrides the Hamiltonian's own window when set.
  std::optional<EnergyWindow> window;
  bool count_last_bit = false;

  void validate() const {
    if (n_bits < 1 || n_bits > 52) throw InputError("n_bits must lie in [1, 52]");
    if (window) window->validate();
  }
};

struct IpeaResult {
  /// bits[0] is phi_1, the most significant bit.
  std::vector<int> bits;
  double phase = 0.0;
  double energy = 0.0;
  /// Probability of the recorded outcome, indexed like `bits`.
  std::vector<double> per_bit_probability;
  double total_success_probability = 0.0;
  StateVector final_state;
};

/// omega_k from the bits already measured, given as phi_{k+1}, ..., phi_K.
inline double feedback_angle(std::span<const int> known_lower_bits) {
  double frac = 0.0, scale = 0.25;
  for (int b : known_lower_bits) {
    if (b != 0 && b != 1) throw InputError("bits must be 0 or 1");
    frac += b * scale;
    scale *= 0.5;
  }
  return two_pi * frac;
}

/// Maps a power of the system unitary to a circuit on 1 + n qubits whose
/// qubit 0 controls U^power on qubits 1..n.
using ControlledPowerOracle = std::function<Circuit(std::uint64_t power)>;

inline Circuit controlled_matrix_circuit(const CMatrix& upow) {
  const int n = qubits_for_dim(static_cast<std::size_t>(upow.rows()));
  if ((Eigen::Index{1} << n) != upow.rows()) throw DimensionError("unitary dimension must be a power of two");
  std::vector<int> targets(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) targets[static_cast<std::size_t>(q)] = q + 1;
  Circuit c(n + 1);
  c.add(op::controlled({0}, std::move(targets), upow));
  return c;
}

inline ControlledPowerOracle matrix_oracle(const CMatrix& u) {
  if (!is_unitary(u, 1e-10)) throw InputError("IPEA unitary is not unitary");
  return [u](std::uint64_t power) { return controlled_matrix_circuit(matrix_power(u, power)); };
}

/// Exact propagator powers of h on the (padded) register.
inline ControlledPowerOracle hamiltonian_oracle(const HamiltonianModel& h) {
  const double tau = window_tau(h.window);
  return [h, tau](std::uint64_t power) {
    return controlled_matrix_circuit(register_propagator(h, tau, power));
  };
}

struct IterationOutcome {
  double p[2] = {0.0, 0.0};
  /// Normalized system state after each outcome; empty for zero-probability branches.
  std::optional<StateVector> post[2];
};

/// One read-out cycle given the controlled-power circuit for this iteration.
inline IterationOutcome ipea_step(const StateVector& system, const Circuit& controlled_power,
                                  double omega) {
  const int n = system.n_qubits();
  if (controlled_power.n_qubits != n + 1)
    throw DimensionError("controlled-power circuit does not match the system register");
  CVector joint = CVector::Zero(Eigen::Index{2} << n);
  joint.head(system.dim()) = system.amplitudes();
  StateVector reg(std::move(joint));
  apply_inplace(reg, op::h(0));
  reg = run_circuit(reg, controlled_power);
  apply_inplace(reg, op::rz(0, omega));
  apply_inplace(reg, op::h(0));

  IterationOutcome out;
  const Eigen::Index half = system.dim();
  const double p1 = reg.amplitudes().tail(half).squaredNorm();
  const double p0 = reg.amplitudes().head(half).squaredNorm();
  const double total = p0 + p1;
  out.p[0] = p0 / total;
  out.p[1] = p1 / total;
  for (int m = 0; m < 2; ++m) {
    const CVector part = m == 0 ? CVector(reg.amplitudes().head(half)) : CVector(reg.amplitudes().tail(half));
    const double nrm = part.norm();
    if (nrm > 1e-300) out.post[m] = StateVector(part / nrm);
  }
  return out;
}

/// Iteration k with U^{2^{k-1}} obtained by repeated squaring.
inline IterationOutcome ipea_iteration(const StateVector& system, const CMatrix& u, int k,
                                       double omega) {
  if (k < 1 || k > 63) throw InputError("iteration index out of range");
  if (u.rows() != system.dim() || u.cols() != system.dim())
    throw DimensionError("unitary does not match the system register");
  if (!is_unitary(u, 1e-10)) throw InputError("IPEA unitary is not unitary");
  const CMatrix upow = matrix_power(u, std::uint64_t{1} << (k - 1));
  return ipea_step(system, controlled_matrix_circuit(upow), omega);
}

struct IpeaTrace {
  std::vector<int> bits;
  std::vector<double> per_bit_probability;
  StateVector final_state;
};

/// Maximum-likelihood trace: at every step the more probable outcome is
/// taken (ties resolve to 0).
inline IpeaTrace trace_ipea(const ControlledPowerOracle& oracle, const StateVector& initial,
                            int n_bits, IpeaVersion version) {
  if (n_bits < 1 || n_bits > 52) throw InputError("n_bits must lie in [1, 52]");
  IpeaTrace t;
  t.bits.assign(static_cast<std::size_t>(n_bits), 0);
  t.per_bit_probability.assign(static_cast<std::size_t>(n_bits), 0.0);
  StateVector state = initial;
  for (int k = n_bits; k >= 1; --k) {
    const double omega =
        feedback_angle(std::span<const int>(t.bits).subspan(static_cast<std::size_t>(k)));
    if (version == IpeaVersion::B) state = initial;
    const IterationOutcome o =
        ipea_step(state, oracle(std::uint64_t{1} << (k - 1)), omega);
    const int bit = o.p[1] > o.p[0] ? 1 : 0;
    t.bits[static_cast<std::size_t>(k - 1)] = bit;
    t.per_bit_probability[static_cast<std::size_t>(k - 1)] = o.p[bit];
    state = *o.post[bit];
  }
  t.final_state = std::move(state);
  return t;
}

inline double bits_to_phase(std::span<const int> bits) {
  double phase = 0.0, scale = 0.5;
  for (int b : bits) {
    phase += b * scale;
    scale *= 0.5;
  }
  return phase;
}

/// Eigenphase and weight of one spectral component of the initial state.
struct PhaseComponent {
  double phase = 0.0;
  double weight = 0.0;
};

namespace detail {

/// P(m | phi) at iteration k with feedback omega.
inline double outcome_probability(double phi, int k, double omega, int m) {
  const double frac = wrap_unit(std::ldexp(phi, k - 1));
  const double theta = -two_pi * frac;
  const double c = std::cos(theta + omega);
  return 0.5 * (1.0 + (m == 0 ? c : -c));
}

/// Bit list phi_1..phi_K of a K-bit integer.
inline std::vector<int> int_to_bits(std::uint64_t x, int n_bits) {
  std::vector<int> bits(static_cast<std::size_t>(n_bits));
  for (int i = 0; i < n_bits; ++i) bits[static_cast<std::size_t>(i)] = static_cast<int>((x >> (n_bits - 1 - i)) & 1u);
  return bits;
}

}  // namespace detail

/// K-bit strings (phi_1 most significant) accepted for a target phase.
inline std::vector<std::uint64_t> acceptable_outcomes(double target_phase, int n_bits,
                                                      bool count_last_bit) {
  const int kc = count_last_bit ? n_bits : n_bits - 1;
  const std::uint64_t mod = std::uint64_t{1} << kc;
  const auto y0 = static_cast<std::uint64_t>(std::floor(wrap_unit(target_phase) * static_cast<double>(mod))) % mod;
  const std::uint64_t y1 = (y0 + 1) % mod;
  std::set<std::uint64_t> out;
  for (std::uint64_t y : {y0, y1}) {
    if (count_last_bit) {
      out.insert(y);
    } else {
      out.insert(2 * y);
      out.insert(2 * y + 1);
    }
  }
  return {out.begin(), out.end()};
}

/// Exact probability of the full K-bit outcome string `bits`.
inline double path_probability(std::span<const PhaseComponent> comps, std::span<const int> bits,
                               IpeaVersion version) {
  const int n_bits = static_cast<int>(bits.size());
  if (version == IpeaVersion::A) {
    double total = 0.0;
    for (const PhaseComponent& c : comps) {
      if (c.weight == 0.0) continue;
      double p = c.weight;
      for (int k = n_bits; k >= 1 && p > 0.0; --k) {
        const double omega = feedback_angle(bits.subspan(static_cast<std::size_t>(k)));
        p *= detail::outcome_probability(c.phase, k, omega, bits[static_cast<std::size_t>(k - 1)]);
      }
      total += p;
    }
    return total;
  }
  double p = 1.0;
  for (int k = n_bits; k >= 1 && p > 0.0; --k) {
    const double omega = feedback_angle(bits.subspan(static_cast<std::size_t>(k)));
    double step = 0.0;
    for (const PhaseComponent& c : comps)
      step += c.weight *
              detail::outcome_probability(c.phase, k, omega, bits[static_cast<std::size_t>(k - 1)]);
    p *= step;
  }
  return p;
}

inline double spectral_success_probability(std::span<const PhaseComponent> comps,
                                           double target_phase, int n_bits, IpeaVersion version,
                                           bool count_last_bit) {
  double sp = 0.0;
  for (std::uint64_t x : acceptable_outcomes(target_phase, n_bits, count_last_bit)) {
    const std::vector<int> bits = detail::int_to_bits(x, n_bits);
    sp += path_probability(comps, bits, version);
  }
  return std::clamp(sp, 0.0, 1.0);
}

/// Spectral data of an initial state with respect to h on the register.
struct SpectralInput {
  std::vector<PhaseComponent> components;
  /// Index into `components` of the target eigenvector.
  std::size_t target = 0;
  /// Relative energy of the target (eigenvalue of h.matrix).
  double target_energy = 0.0;
  double target_overlap = 0.0;
};

namespace detail {

inline double normalization_error(const CVector& v) { return std::abs(v.squaredNorm() - 1.0); }

inline EnergyWindow effective_window(const HamiltonianModel& h, const IpeaConfig& cfg) {
  return cfg.window ? *cfg.window : h.window;
}

/// Initial state embedded into the padded register of h.
inline StateVector embed_initial(const HamiltonianModel& h, const StateVector& initial) {
  const auto d = h.dim();
  const Eigen::Index padded = Eigen::Index{1} << qubits_for_dim(static_cast<std::size_t>(d));
  if (initial.dim() == padded) return initial;
  if (initial.dim() == d) {
    CVector v = CVector::Zero(padded);
    v.head(d) = initial.amplitudes();
    return StateVector(std::move(v));
  }
  throw DimensionError("initial state does not match the Hamiltonian dimension");
}

/// Accepts an unpadded vector too: StateVector requires power-of-two length.
inline StateVector embed_initial(const HamiltonianModel& h, const CVector& initial) {
  const auto d = h.dim();
  const Eigen::Index padded = Eigen::Index{1} << qubits_for_dim(static_cast<std::size_t>(d));
  if (initial.size() != d && initial.size() != padded)
    throw DimensionError("initial state does not match the Hamiltonian dimension");
  CVector v = CVector::Zero(padded);
  v.head(initial.size()) = initial;
  return StateVector(std::move(v));
}

}  // namespace detail

/// Target = in-window eigenvector with the largest overlap; ties go to the
/// lower energy. Padding states carry phase 0.
inline SpectralInput spectral_input(const HamiltonianModel& h, const StateVector& padded_initial,
                                    const EnergyWindow& w) {
  const Spectrum sp = spectrum(h.matrix);
  const Eigen::Index d = h.dim();
  const CVector head = padded_initial.amplitudes().head(d);
  SpectralInput in;
  bool found = false;
  double best = -1.0, best_e = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double ew = w.sign() * sp.values[j] - w.e_min;
    const double ov = std::norm(sp.vectors.col(j).dot(head));
    in.components.push_back({wrap_unit(ew / w.width()), ov});
    const bool inside = ew >= 0.0 && ew < w.width();
    if (!inside) continue;
    const bool better = ov > best + 1e-12 || (std::abs(ov - best) <= 1e-12 && sp.values[j] < best_e);
    if (!found || better) {
      found = true;
      best = ov;
      best_e = sp.values[j];
      in.target = static_cast<std::size_t>(j);
    }
  }
  if (!found) throw InputError("no eigenvalue of the Hamiltonian lies inside the energy window");
  const double pad_weight = padded_initial.amplitudes().tail(padded_initial.dim() - d).squaredNorm();
  if (pad_weight > 0.0) in.components.push_back({0.0, pad_weight});
  in.target_energy = best_e;
  in.target_overlap = best;
  return in;
}

inline double success_probability(const HamiltonianModel& h, const StateVector& initial,
                                  const IpeaConfig& cfg) {
  h.validate();
  cfg.validate();
  const StateVector psi = detail::embed_initial(h, initial);
  if (detail::normalization_error(psi.amplitudes()) > 1e-10) throw InputError("initial state is not normalized");
  const EnergyWindow w = detail::effective_window(h, cfg);
  const SpectralInput in = spectral_input(h, psi, w);
  return spectral_success_probability(in.components, in.components[in.target].phase, cfg.n_bits,
                                      cfg.version, cfg.count_last_bit);
}

/// Success probability for a unitary given directly on the register. The
/// target is the eigenvector with the largest overlap with `initial`.
inline double success_probability(const CMatrix& u, const StateVector& initial, int n_bits,
                                  IpeaVersion version, bool count_last_bit) {
  if (u.rows() != initial.dim() || u.cols() != initial.dim())
    throw DimensionError("unitary does not match the initial state");
  if (!is_unitary(u, 1e-10)) throw InputError("IPEA unitary is not unitary");
  // Schur form of a normal matrix is diagonal with an orthonormal basis.
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& z = schur.matrixU();
  const CMatrix& t = schur.matrixT();
  std::vector<PhaseComponent> comps;
  std::size_t target = 0;
  double best = -1.0;
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    const double phase = wrap_unit(-std::arg(t(j, j)) / two_pi);
    const double ov = std::norm(z.col(j).dot(initial.amplitudes()));
    comps.push_back({phase, ov});
    if (ov > best + 1e-12) {
      best = ov;
      target = static_cast<std::size_t>(j);
    }
  }
  return spectral_success_probability(comps, comps[target].phase, n_bits, version, count_last_bit);
}

inline IpeaResult run_ipea(const HamiltonianModel& h, const StateVector& initial,
                           const IpeaConfig& cfg) {
  h.validate();
  cfg.validate();
  const StateVector psi = detail::embed_initial(h, initial);
  if (detail::normalization_error(psi.amplitudes()) > 1e-10) throw InputError("initial state is not normalized");
  HamiltonianModel hw = h;
  hw.window = detail::effective_window(h, cfg);

  IpeaTrace t = trace_ipea(hamiltonian_oracle(hw), psi, cfg.n_bits, cfg.version);
  IpeaResult r;
  r.bits = std::move(t.bits);
  r.per_bit_probability = std::move(t.per_bit_probability);
  r.final_state = std::move(t.final_state);
  r.phase = bits_to_phase(r.bits);
  r.energy = phase_to_energy(r.phase, hw);
  r.total_success_probability = success_probability(hw, psi, cfg);
  return r;
}

}  // namespace rqpe
