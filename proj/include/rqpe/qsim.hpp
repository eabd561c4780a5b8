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
 * Dense statevector simulator.
 *
 * Qubit 0 is the most significant bit of a basis index: for n qubits the
 * basis state |b_0 b_1 ... b_{n-1}> sits at index sum_q b_q 2^{n-1-q}.
 * Every gate is applied exactly; measurement is branch-selected by the
 * caller, so the simulator carries no random state.
 */
#pragma once

#include "rqpe/core.hpp"

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rqpe {

class StateVector {
 public:
  StateVector() = default;

  /// Takes ownership of `amplitudes`; length must be a power of two.
  explicit StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
    if (!is_power_of_two(static_cast<std::size_t>(amps_.size())))
      throw DimensionError("statevector length must be a power of two");
    n_qubits_ = qubits_for_dim(static_cast<std::size_t>(amps_.size()));
  }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amps_.size(); }
  const CVector& amplitudes() const { return amps_; }
  CVector& mutable_amplitudes() { return amps_; }
  cplx operator[](Eigen::Index i) const { return amps_[i]; }

  double norm_squared() const { return amps_.squaredNorm(); }

 private:
  int n_qubits_ = 0;
  CVector amps_;
};

inline StateVector new_basis_state(int n_qubits, std::uint64_t index) {
  if (n_qubits < 0 || n_qubits > 30) throw DimensionError("unsupported qubit count");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  if (index >= dim) throw DimensionError("basis index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(std::move(v));
}

enum class GateKind { H, X, S, Sdag, Rz, Ry, CNOT, SWAP, Unitary1q, ControlledUnitary };

inline std::string_view to_string(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::S: return "S";
    case GateKind::Sdag: return "Sdag";
    case GateKind::Rz: return "Rz";
    case GateKind::Ry: return "Ry";
    case GateKind::CNOT: return "CNOT";
    case GateKind::SWAP: return "SWAP";
    case GateKind::Unitary1q: return "Unitary1q";
    case GateKind::ControlledUnitary: return "ControlledUnitary";
  }
  return "?";
}

inline GateKind gate_kind_from_string(std::string_view s) {
  for (GateKind k : {GateKind::H, GateKind::X, GateKind::S, GateKind::Sdag, GateKind::Rz,
                     GateKind::Ry, GateKind::CNOT, GateKind::SWAP, GateKind::Unitary1q,
                     GateKind::ControlledUnitary})
    if (to_string(k) == s) return k;
  throw InputError("unknown gate kind: " + std::string(s));
}

/// One elementary operation. `matrix` is only meaningful for Unitary1q and
/// ControlledUnitary (acting on `targets`, conditioned on all `controls`
/// being |1>). CNOT is stored as target + single control.
struct GateOp {
  GateKind kind = GateKind::H;
  std::vector<int> targets;
  std::vector<int> controls;
  double angle = 0.0;
  CMatrix matrix;
  std::string label;
};

namespace gates {

inline CMatrix hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix m(2, 2);
  m << r, r, r, -r;
  return m;
}

inline CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline CMatrix phase_s() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = imag_unit;
  return m;
}

/// Rz(theta) = diag(e^{-i theta/2}, e^{+i theta/2}).
inline CMatrix rz(double theta) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -theta / 2.0);
  m(1, 1) = std::polar(1.0, theta / 2.0);
  return m;
}

/// Ry(theta) = [[cos, -sin], [sin, cos]] of theta/2.
inline CMatrix ry(double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  CMatrix m(2, 2);
  m << c, -s, s, c;
  return m;
}

inline CMatrix swap() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
  return m;
}

}  // namespace gates

namespace op {

inline GateOp h(int q) { return {GateKind::H, {q}, {}, 0.0, {}, {}}; }
inline GateOp x(int q) { return {GateKind::X, {q}, {}, 0.0, {}, {}}; }
inline GateOp s(int q) { return {GateKind::S, {q}, {}, 0.0, {}, {}}; }
inline GateOp sdag(int q) { return {GateKind::Sdag, {q}, {}, 0.0, {}, {}}; }
inline GateOp rz(int q, double theta) { return {GateKind::Rz, {q}, {}, theta, {}, {}}; }
inline GateOp ry(int q, double theta) { return {GateKind::Ry, {q}, {}, theta, {}, {}}; }
inline GateOp cnot(int control, int target) {
  return {GateKind::CNOT, {target}, {control}, 0.0, {}, {}};
}
inline GateOp swap(int a, int b) { return {GateKind::SWAP, {a, b}, {}, 0.0, {}, {}}; }
inline GateOp unitary(int q, CMatrix m) {
  return {GateKind::Unitary1q, {q}, {}, 0.0, std::move(m), {}};
}
inline GateOp controlled(std::vector<int> controls, std::vector<int> targets, CMatrix m) {
  return {GateKind::ControlledUnitary, std::move(targets), std::move(controls), 0.0,
          std::move(m), {}};
}

}  // namespace op

/// Matrix acting on op.targets (controls excluded).
inline CMatrix target_matrix(const GateOp& g) {
  switch (g.kind) {
    case GateKind::H: return gates::hadamard();
    case GateKind::X:
    case GateKind::CNOT: return gates::pauli_x();
    case GateKind::S: return gates::phase_s();
    case GateKind::Sdag: return gates::phase_s().adjoint();
    case GateKind::Rz: return gates::rz(g.angle);
    case GateKind::Ry: return gates::ry(g.angle);
    case GateKind::SWAP: return gates::swap();
    case GateKind::Unitary1q:
    case GateKind::ControlledUnitary: return g.matrix;
  }
  throw InputError("unknown gate kind");
}

/// Exact inverse of a single operation.
inline GateOp adjoint(const GateOp& g) {
  GateOp out = g;
  switch (g.kind) {
    case GateKind::S: out.kind = GateKind::Sdag; break;
    case GateKind::Sdag: out.kind = GateKind::S; break;
    case GateKind::Rz:
    case GateKind::Ry: out.angle = -g.angle; break;
    case GateKind::Unitary1q:
    case GateKind::ControlledUnitary: out.matrix = g.matrix.adjoint(); break;
    default: break;
  }
  return out;
}

inline void validate(const GateOp& g, int n_qubits) {
  const std::size_t expected_targets =
      g.kind == GateKind::SWAP ? 2 : (g.kind == GateKind::ControlledUnitary ? 0 : 1);
  if (expected_targets != 0 && g.targets.size() != expected_targets)
    throw InputError(std::string(to_string(g.kind)) + ": wrong number of targets");
  if (g.kind == GateKind::CNOT && g.controls.size() != 1)
    throw InputError("CNOT needs exactly one control");
  if (g.targets.empty()) throw InputError("gate without targets");

  std::uint64_t seen = 0;
  auto check = [&](int q) {
    if (q < 0 || q >= n_qubits) throw DimensionError("qubit index out of range");
    const std::uint64_t bit = std::uint64_t{1} << q;
    if (seen & bit) throw InputError("qubit index collision");
    seen |= bit;
  };
  for (int q : g.targets) check(q);
  for (int q : g.controls) check(q);

  if (g.kind == GateKind::Unitary1q || g.kind == GateKind::ControlledUnitary) {
    const Eigen::Index d = Eigen::Index{1} << g.targets.size();
    if (g.matrix.rows() != d || g.matrix.cols() != d)
      throw DimensionError("gate matrix does not match the number of targets");
    if (!is_unitary(g.matrix, 1e-10)) throw InputError("gate matrix is not unitary");
  }
}

namespace detail {

inline std::uint64_t qubit_mask(int q, int n) { return std::uint64_t{1} << (n - 1 - q); }

/// In-place application of a (possibly controlled) k-target gate.
inline void apply_matrix(CVector& amps, int n, std::span<const int> targets,
                         std::span<const int> controls, const CMatrix& m) {
  const std::size_t k = targets.size();
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t sub = std::uint64_t{1} << k;

  std::uint64_t target_mask = 0, control_mask = 0;
  for (int t : targets) target_mask |= qubit_mask(t, n);
  for (int c : controls) control_mask |= qubit_mask(c, n);

  // offsets[j]: bit pattern placing local index j (targets[0] most
  // significant) onto the global target positions.
  std::vector<std::uint64_t> offsets(sub, 0);
  for (std::uint64_t j = 0; j < sub; ++j)
    for (std::size_t t = 0; t < k; ++t)
      if (j & (std::uint64_t{1} << (k - 1 - t))) offsets[j] |= qubit_mask(targets[t], n);

  CVector in(static_cast<Eigen::Index>(sub));
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & target_mask) continue;
    if ((base & control_mask) != control_mask) continue;
    for (std::uint64_t j = 0; j < sub; ++j) in[static_cast<Eigen::Index>(j)] = amps[static_cast<Eigen::Index>(base | offsets[j])];
    const CVector out = m * in;
    for (std::uint64_t j = 0; j < sub; ++j) amps[static_cast<Eigen::Index>(base | offsets[j])] = out[static_cast<Eigen::Index>(j)];
  }
}

}  // namespace detail

inline void apply_inplace(StateVector& state, const GateOp& g) {
  validate(g, state.n_qubits());
  detail::apply_matrix(state.mutable_amplitudes(), state.n_qubits(), g.targets, g.controls,
                       target_matrix(g));
}

inline StateVector apply(const StateVector& state, const GateOp& g) {
  StateVector out = state;
  apply_inplace(out, g);
  return out;
}

/// Ordered gate list; ops[0] is applied first.
struct Circuit {
  int n_qubits = 0;
  std::vector<GateOp> ops;

  Circuit() = default;
  explicit Circuit(int n) : n_qubits(n) {}

  Circuit& add(GateOp g) {
    ops.push_back(std::move(g));
    return *this;
  }

  Circuit& append(const Circuit& other) {
    if (other.n_qubits != n_qubits) throw DimensionError("circuit width mismatch");
    ops.insert(ops.end(), other.ops.begin(), other.ops.end());
    return *this;
  }

  std::size_t count(GateKind k) const {
    return static_cast<std::size_t>(
        std::count_if(ops.begin(), ops.end(), [k](const GateOp& g) { return g.kind == k; }));
  }

  std::size_t cnot_count() const { return count(GateKind::CNOT); }

  Circuit inverse() const {
    Circuit inv(n_qubits);
    inv.ops.reserve(ops.size());
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) inv.ops.push_back(adjoint(*it));
    return inv;
  }
};

inline StateVector run_circuit(const StateVector& state, const Circuit& circuit) {
  if (circuit.n_qubits != state.n_qubits())
    throw DimensionError("circuit and state have different qubit counts");
  StateVector out = state;
  for (const GateOp& g : circuit.ops) apply_inplace(out, g);
  return out;
}

/// Columns are run_circuit applied to each basis state.
inline CMatrix circuit_matrix(const Circuit& circuit) {
  const Eigen::Index dim = Eigen::Index{1} << circuit.n_qubits;
  CMatrix m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    m.col(j) = run_circuit(new_basis_state(circuit.n_qubits, static_cast<std::uint64_t>(j)), circuit)
                   .amplitudes();
  return m;
}

struct Branch {
  double probability = 0.0;
  StateVector state;
};

/// Probability of reading `outcome` on `qubit` and the renormalized
/// post-measurement state.
inline Branch measure_branch(const StateVector& state, int qubit, int outcome) {
  if (qubit < 0 || qubit >= state.n_qubits()) throw DimensionError("qubit index out of range");
  if (outcome != 0 && outcome != 1) throw InputError("outcome must be 0 or 1");
  const std::uint64_t mask = detail::qubit_mask(qubit, state.n_qubits());
  CVector collapsed = state.amplitudes();
  double p = 0.0;
  for (Eigen::Index i = 0; i < collapsed.size(); ++i) {
    const bool one = (static_cast<std::uint64_t>(i) & mask) != 0;
    if (one == (outcome == 1))
      p += std::norm(collapsed[i]);
    else
      collapsed[i] = 0.0;
  }
  if (!(p > 0.0)) throw InputError("requested measurement branch has zero probability");
  collapsed /= std::sqrt(p);
  return {p, StateVector(std::move(collapsed))};
}

/// <a|b>
inline cplx overlap(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("overlap: dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

}  // namespace rqpe
