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
 * Shannon-style synthesis of controlled two-qubit unitaries of the form
 *
 *     U = V diag(e^{i phi_00}, e^{i phi_01}, e^{i phi_10}, e^{i phi_11}) V^T,
 *
 * V real orthogonal, on a 3-qubit register (qubit 0 controls qubits 1, 2).
 * The multiplexed Rz stage acts as D = diag(e^{-i phi_ab / 2}) when the
 * control reads 0 and as D^dag when it reads 1. With W = D^dag V^dag the
 * control-0 block V D W is I and the control-1 block V D^dag W is U.
 * Powers U^n are obtained by scaling every Rz angle of the multiplexor and
 * of the D^dag stage by n; V is unchanged.
 *
 * V is synthesized with two CNOTs as V = P^dag (A x B) [SWAP] P,
 * P = CX(2 -> 1) (I x H) (S x S); the SWAP is present iff det V = -1.
 */
#pragma once

#include "rqpe/core.hpp"
#include "rqpe/qsim.hpp"

#include <array>
#include <numeric>
#include <utility>

namespace rqpe {

/// u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta).
struct ZyAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

inline CMatrix zy_matrix(const ZyAngles& z) {
  return std::polar(1.0, z.alpha) * gates::rz(z.beta) * gates::ry(z.gamma) * gates::rz(z.delta);
}

/// Canonical branch gamma in [0, pi]; beta and delta from the SU(2) part.
inline ZyAngles zy_decompose(const CMatrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw DimensionError("zy_decompose expects a 2x2 matrix");
  if (!is_unitary(u, 1e-10)) throw InputError("zy_decompose: matrix is not unitary");
  ZyAngles z;
  z.alpha = std::arg(u.determinant()) / 2.0;
  const CMatrix v = u * std::polar(1.0, -z.alpha);
  const cplx a = v(0, 0), b = v(1, 0);
  z.gamma = 2.0 * std::atan2(std::abs(b), std::abs(a));
  constexpr double eps = 1e-14;
  if (std::abs(b) < eps) {
    z.beta = -2.0 * std::arg(a);
    z.delta = 0.0;
  } else if (std::abs(a) < eps) {
    z.beta = 2.0 * std::arg(b);
    z.delta = 0.0;
  } else {
    z.beta = std::arg(b) - std::arg(a);
    z.delta = -std::arg(a) - std::arg(b);
  }
  return z;
}

/// Rz/Ry ops realizing the SU(2) part of `z` on qubit q (time order
/// Rz(delta), Ry(gamma), Rz(beta)); zero angles are omitted.
inline void append_zy(Circuit& c, int q, const ZyAngles& z, double scale = 1.0) {
  if (z.delta != 0.0) c.add(op::rz(q, scale * z.delta));
  if (z.gamma != 0.0) c.add(op::ry(q, scale * z.gamma));
  if (z.beta != 0.0) c.add(op::rz(q, scale * z.beta));
}

namespace detail {

/// Embeds a gate on (top, bottom) of a 2-qubit register as a 4x4 matrix.
inline CMatrix two_qubit_matrix(const Circuit& c) {
  if (c.n_qubits != 2) throw DimensionError("expected a 2-qubit circuit");
  return circuit_matrix(c);
}

/// P = CX(bottom -> top) (I x H) (S x S).
inline CMatrix o4_conjugator() {
  Circuit c(2);
  c.add(op::s(0)).add(op::s(1)).add(op::h(1)).add(op::cnot(1, 0));
  return two_qubit_matrix(c);
}

/// Standard magic basis: M^dag (SU(2) x SU(2)) M is SO(4) and XX, YY, ZZ
/// are diagonal in it.
inline CMatrix magic_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i = imag_unit;
  CMatrix m(4, 4);
  m << r, 0, 0, i * r,
       0, i * r, r, 0,
       0, i * r, -r, 0,
       r, 0, 0, -i * r;
  return m;
}

/// M^dag (P x P) M for P in {X, Y, Z}; diagonal with entries +-1.
inline CMatrix pauli_pair_in_magic(char p) {
  CMatrix s(2, 2);
  if (p == 'X') s << 0, 1, 1, 0;
  else if (p == 'Y') s << 0, -imag_unit, imag_unit, 0;
  else s << 1, 0, 0, -1;
  const CMatrix m = magic_basis();
  return m.adjoint() * kron(s, s) * m;
}

}  // namespace detail

/// (A, B) with m = A x B; throws DecompositionError if m is not a product
/// of 2x2 unitaries within `tol`. B is normalized to det 1.
inline std::pair<CMatrix, CMatrix> tensor_factor(const CMatrix& m, double tol = 1e-9) {
  if (m.rows() != 4 || m.cols() != 4) throw DimensionError("tensor_factor expects a 4x4 matrix");
  Eigen::Index bi = 0, bj = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) {
      const double nrm = m.block(2 * i, 2 * j, 2, 2).norm();
      if (nrm > best) {
        best = nrm;
        bi = i;
        bj = j;
      }
    }
  CMatrix b = m.block(2 * bi, 2 * bj, 2, 2);
  b /= b.norm() / std::sqrt(2.0);
  b /= std::sqrt(b.determinant());
  CMatrix a(2, 2);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j)
      a(i, j) = (b.adjoint() * m.block(2 * i, 2 * j, 2, 2)).trace() / 2.0;
  if (max_abs(kron(a, b) - m) > tol || !is_unitary(a, tol) || !is_unitary(b, tol))
    throw DecompositionError("matrix is not a tensor product of single-qubit unitaries");
  return {a, b};
}

struct O4Factors {
  CMatrix a;
  CMatrix b;
  bool swap = false;
};

inline CMatrix o4_circuit_matrix(const CMatrix& a, const CMatrix& b, bool swap) {
  const CMatrix p = detail::o4_conjugator();
  CMatrix mid = kron(a, b);
  if (swap) mid = mid * gates::swap();
  return p.adjoint() * mid * p;
}

/// v = P^dag (A x B) [SWAP] P for real orthogonal v.
inline O4Factors decompose_o4(const CMatrix& v) {
  if (v.rows() != 4 || v.cols() != 4) throw DimensionError("decompose_o4 expects a 4x4 matrix");
  if (max_abs(CMatrix(v.imag().cast<cplx>())) > 1e-9) throw InputError("decompose_o4: matrix is not real");
  const RMatrix vr = v.real();
  if ((vr.transpose() * vr - RMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-9)
    throw InputError("decompose_o4: matrix is not orthogonal");
  O4Factors f;
  f.swap = vr.determinant() < 0.0;
  const CMatrix p = detail::o4_conjugator();
  CMatrix ab = p * v * p.adjoint();
  if (f.swap) ab = ab * gates::swap();
  std::tie(f.a, f.b) = tensor_factor(ab);
  return f;
}

/// V circuit on qubits (top, bottom) of an n-qubit register.
inline Circuit o4_circuit(int n_qubits, int top, int bottom, const ZyAngles& a, const ZyAngles& b,
                          bool swap) {
  Circuit c(n_qubits);
  c.add(op::s(top)).add(op::s(bottom)).add(op::h(bottom)).add(op::cnot(bottom, top));
  if (swap) c.add(op::swap(top, bottom));
  append_zy(c, top, a);
  append_zy(c, bottom, b);
  c.add(op::cnot(bottom, top)).add(op::h(bottom)).add(op::sdag(top)).add(op::sdag(bottom));
  return c;
}

/// Multiplexor angles from (phi_00, phi_01, phi_10, phi_11).
inline std::array<double, 4> multiplexed_rz_angles(const std::array<double, 4>& p) {
  return {0.25 * (p[0] + p[1] + p[2] + p[3]), 0.25 * (p[0] + p[1] - p[2] - p[3]),
          0.25 * (p[0] - p[1] - p[2] + p[3]), 0.25 * (p[0] - p[1] + p[2] - p[3])};
}

/// D^dag stage angles (phi_5, phi_6, phi_7).
inline std::array<double, 3> d_angles(const std::array<double, 4>& p) {
  return {0.5 * (p[0] - p[1] - p[2] + p[3]), 0.25 * (-p[0] - p[1] + p[2] + p[3]),
          0.5 * (-p[0] + p[1])};
}

struct QsdParams {
  /// phi_00, phi_01, phi_10, phi_11 (index 2a + b for system bits a, b).
  std::array<double, 4> phi{};
  std::array<double, 4> mux{};
  std::array<double, 3> d{};
  ZyAngles a_zy;
  ZyAngles b_zy;
  bool v_swap = false;

  static QsdParams from_angles(const std::array<double, 4>& phi, const ZyAngles& a,
                               const ZyAngles& b, bool v_swap) {
    QsdParams p;
    p.phi = phi;
    p.mux = multiplexed_rz_angles(phi);
    p.d = d_angles(phi);
    p.a_zy = a;
    p.b_zy = b;
    p.v_swap = v_swap;
    return p;
  }

  CMatrix v_matrix() const { return o4_circuit_matrix(zy_matrix(a_zy), zy_matrix(b_zy), v_swap); }

  void validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    for (double x : phi) if (!finite(x)) throw InputError("QsdParams: non-finite angle");
    for (double x : {a_zy.alpha, a_zy.beta, a_zy.gamma, a_zy.delta, b_zy.alpha, b_zy.beta, b_zy.gamma, b_zy.delta})
      if (!finite(x)) throw InputError("QsdParams: non-finite angle");
    const auto m = multiplexed_rz_angles(phi);
    const auto dd = d_angles(phi);
    for (std::size_t i = 0; i < 4; ++i)
      if (!(std::abs(m[i] - mux[i]) <= 1e-12)) throw InputError("QsdParams: multiplexor angles inconsistent");
    for (std::size_t i = 0; i < 3; ++i)
      if (!(std::abs(dd[i] - d[i]) <= 1e-12)) throw InputError("QsdParams: D angles inconsistent");
    CMatrix v = v_matrix();
    Eigen::Index r, c;
    v.cwiseAbs().maxCoeff(&r, &c);
    v *= std::polar(1.0, -std::arg(v(r, c)));
    if (max_abs(CMatrix(v.imag().cast<cplx>())) > 1e-9 || !is_unitary(v, 1e-9))
      throw InputError("QsdParams: V is not real orthogonal");
  }
};

/// Decomposes U = V diag(e^{i phi}) V^T. Columns of V are matched to basis
/// states by maximizing sum_j V_jj^2 and signed so V_jj >= 0.
inline QsdParams decompose_controlled_2q(const CMatrix& u) {
  if (u.rows() != 4 || u.cols() != 4) throw DimensionError("decompose_controlled_2q expects a 4x4 matrix");
  if (!is_unitary(u, 1e-10)) throw InputError("decompose_controlled_2q: matrix is not unitary");
  const RMatrix q = real_orthogonal_eigenbasis(u, 1e-9);

  std::array<int, 4> perm{0, 1, 2, 3}, best_perm = perm;
  double best = -1.0;
  do {
    double score = 0.0;
    for (int j = 0; j < 4; ++j) score += q(j, perm[static_cast<std::size_t>(j)]) * q(j, perm[static_cast<std::size_t>(j)]);
    if (score > best + 1e-12) {
      best = score;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  RMatrix v(4, 4);
  for (int j = 0; j < 4; ++j) {
    v.col(j) = q.col(best_perm[static_cast<std::size_t>(j)]);
    if (v(j, j) < 0.0) v.col(j) = -v.col(j);
  }
  const CMatrix vc = v.cast<cplx>();
  const CMatrix diag = vc.transpose() * u * vc;
  std::array<double, 4> phi{};
  for (int j = 0; j < 4; ++j) phi[static_cast<std::size_t>(j)] = std::arg(diag(j, j));

  const O4Factors f = decompose_o4(vc);
  return QsdParams::from_angles(phi, zy_decompose(f.a), zy_decompose(f.b), f.swap);
}

/// Nine-CNOT form re-synthesizes W = D^dag V^dag per power; ten-CNOT form
/// keeps V^dag and D^dag as separate fixed-structure stages.
enum class QsdVariant { nine_cnot, ten_cnot_universal };

/// Exact exp(i(a XX + b YY + c ZZ)) up to global phase, 3 CNOTs.
inline void append_canonical_core(Circuit& circ, int top, int bottom, double a, double b, double c) {
  circ.add(op::rz(bottom, -pi / 2));
  circ.add(op::cnot(bottom, top));
  circ.add(op::rz(top, pi / 2 - 2 * c));
  circ.add(op::ry(bottom, 2 * a - pi / 2));
  circ.add(op::cnot(top, bottom));
  circ.add(op::ry(bottom, pi / 2 - 2 * b));
  circ.add(op::cnot(bottom, top));
  circ.add(op::rz(top, pi / 2));
}

/// Generic two-qubit unitary on (top, bottom) with exactly 3 CNOTs, via
/// the magic-basis (KAK) form u ~ K1 exp(i(a XX + b YY + c ZZ)) K2.
inline Circuit two_qubit_unitary_circuit(const CMatrix& u, int n_qubits, int top, int bottom) {
  if (u.rows() != 4 || u.cols() != 4) throw DimensionError("expected a 4x4 unitary");
  if (!is_unitary(u, 1e-9)) throw InputError("two-qubit gate is not unitary");
  const CMatrix m = detail::magic_basis();
  const CMatrix su = u / std::pow(u.determinant(), 0.25);
  const CMatrix ut = m.adjoint() * su * m;

  RMatrix q = real_orthogonal_eigenbasis(ut.transpose() * ut, 1e-8);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  const CMatrix qc = q.cast<cplx>();
  const CMatrix lam = qc.transpose() * ut.transpose() * ut * qc;
  CVector d(4);
  for (Eigen::Index j = 0; j < 4; ++j) d[j] = std::sqrt(lam(j, j));
  CMatrix o1 = ut * qc * d.cwiseInverse().asDiagonal();
  if (o1.real().determinant() < 0) {
    d[0] = -d[0];
    o1.col(0) = -o1.col(0);
  }
  const CMatrix k1 = m * o1 * m.adjoint();
  const CMatrix k2 = m * qc.transpose() * m.adjoint();

  // d_j = exp(i(psi + a x_j + b y_j + c z_j)) with x, y, z the magic-basis
  // eigenvalues of XX, YY, ZZ.
  const CMatrix px = detail::pauli_pair_in_magic('X');
  const CMatrix py = detail::pauli_pair_in_magic('Y');
  const CMatrix pz = detail::pauli_pair_in_magic('Z');
  double a = 0.0, b = 0.0, c = 0.0;
  for (Eigen::Index j = 0; j < 4; ++j) {
    const double th = std::arg(d[j]);
    a += 0.25 * th * px(j, j).real();
    b += 0.25 * th * py(j, j).real();
    c += 0.25 * th * pz(j, j).real();
  }

  const auto [k2a, k2b] = tensor_factor(k2, 1e-8);
  const auto [k1a, k1b] = tensor_factor(k1, 1e-8);
  Circuit circ(n_qubits);
  circ.add(op::unitary(top, k2a)).add(op::unitary(bottom, k2b));
  append_canonical_core(circ, top, bottom, a, b, c);
  circ.add(op::unitary(top, k1a)).add(op::unitary(bottom, k1b));
  return circ;
}

/// D^dag stage on (top, bottom) with angles scaled by `scale`; realizes
/// diag(e^{+i scale phi_ab / 2}) up to global phase.
inline void append_d_dagger(Circuit& c, int top, int bottom, const std::array<double, 3>& d, double scale) {
  c.add(op::cnot(top, bottom));
  c.add(op::rz(bottom, -scale * d[0] / 2));
  c.add(op::cnot(top, bottom));
  c.add(op::rz(bottom, scale * d[0] / 2));
  c.add(op::rz(top, scale * d[1]));
  c.add(op::rz(bottom, scale * d[2]));
}

/// Multiplexed Rz on `control` selected by (s1, s2); angles scaled.
inline void append_multiplexor(Circuit& c, int control, int s1, int s2, const std::array<double, 4>& mux,
                               double scale) {
  c.add(op::rz(control, scale * mux[0])).add(op::cnot(s1, control));
  c.add(op::rz(control, scale * mux[1])).add(op::cnot(s2, control));
  c.add(op::rz(control, scale * mux[2])).add(op::cnot(s1, control));
  c.add(op::rz(control, scale * mux[3])).add(op::cnot(s2, control));
}

/// Controlled-U^power on a 3-qubit register; qubit 0 is the control.
inline Circuit build_circuit(const QsdParams& params, std::uint64_t power, QsdVariant variant) {
  params.validate();
  if (power < 1) throw InputError("build_circuit: power must be >= 1");
  const double n = static_cast<double>(power);
  const Circuit v_circ = o4_circuit(3, 1, 2, params.a_zy, params.b_zy, params.v_swap);
  Circuit c(3);
  if (variant == QsdVariant::ten_cnot_universal) {
    c.append(v_circ.inverse());
    append_d_dagger(c, 1, 2, params.d, n);
  } else {
    CVector half(4);
    for (std::size_t j = 0; j < 4; ++j) {
      const long double x = static_cast<long double>(params.phi[j]) * power / 2.0L;
      half[static_cast<Eigen::Index>(j)] =
          std::polar(1.0, static_cast<double>(std::fmod(x, 2.0L * std::numbers::pi_v<long double>)));
    }
    const CMatrix w = half.asDiagonal() * params.v_matrix().adjoint();
    c.append(two_qubit_unitary_circuit(w, 3, 1, 2));
  }
  append_multiplexor(c, 0, 1, 2, params.mux, n);
  c.append(v_circ);
  return c;
}

/// V diag(e^{i power phi}) V^dag from the parameters alone.
inline CMatrix exact_block(const QsdParams& params, std::uint64_t power) {
  CVector ph(4);
  for (std::size_t j = 0; j < 4; ++j) {
    const long double x = static_cast<long double>(params.phi[j]) * power;
    ph[static_cast<Eigen::Index>(j)] =
        std::polar(1.0, static_cast<double>(std::fmod(x, 2.0L * std::numbers::pi_v<long double>)));
  }
  const CMatrix v = params.v_matrix();
  return v * ph.asDiagonal() * v.adjoint();
}

/// Control-1 block of a circuit with qubit 0 as control, normalized by the
/// global phase of the control-0 block.
inline CMatrix controlled_block(const Circuit& c) {
  const CMatrix m = circuit_matrix(c);
  const Eigen::Index h = m.rows() / 2;
  const cplx g = m(0, 0);
  if (std::abs(g) < 1e-12) throw DecompositionError("control-0 block is not proportional to identity");
  return m.bottomRightCorner(h, h) / (g / std::abs(g));
}

/// Controlled-u on (control 0, target 1) with two CNOTs:
/// u = e^{i alpha} A X B X C, ABC = I.
inline Circuit decompose_controlled_1q(const CMatrix& u) {
  const ZyAngles z = zy_decompose(u);
  Circuit c(2);
  auto rz = [&](double th) { if (th != 0.0) c.add(op::rz(1, th)); };
  auto ry = [&](double th) { if (th != 0.0) c.add(op::ry(1, th)); };
  rz((z.delta - z.beta) / 2);                // C
  c.add(op::cnot(0, 1));
  rz(-(z.delta + z.beta) / 2);               // B
  ry(-z.gamma / 2);
  c.add(op::cnot(0, 1));
  ry(z.gamma / 2);                           // A
  rz(z.beta);
  if (z.alpha != 0.0) c.add(op::rz(0, z.alpha));
  return c;
}

}  // namespace rqpe
