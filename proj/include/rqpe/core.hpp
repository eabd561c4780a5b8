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

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rqpe {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx imag_unit{0.0, 1.0};

/// 1 E_h expressed in cm^-1.
inline constexpr double hartree_to_wavenumber = 219474.6313632;

/// Malformed or inconsistent input data (files, matrices, parameters).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mismatched register or matrix dimensions.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix falls outside the class a decomposition is defined for.
class DecompositionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// ||U^dag U - I||_max
inline double unitarity_error(const CMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
}

inline bool is_unitary(const CMatrix& u, double tol = 1e-10) {
  return unitarity_error(u) < tol;
}

inline double hermiticity_error(const CMatrix& h) {
  if (h.rows() != h.cols()) return INFINITY;
  return max_abs(h - h.adjoint());
}

inline bool is_hermitian(const CMatrix& h, double tol = 1e-10) {
  return hermiticity_error(h) < tol;
}

/// |tr(target^dag built)| / dim, insensitive to global phase.
inline double fidelity(const CMatrix& target, const CMatrix& built) {
  if (target.rows() != built.rows() || target.cols() != built.cols())
    throw DimensionError("fidelity: dimension mismatch");
  return std::abs((target.adjoint() * built).trace()) /
         static_cast<double>(target.rows());
}

/// Wraps x into [0, 1).
inline double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  return r;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Smallest q with 2^q >= dim.
inline int qubits_for_dim(std::size_t dim) {
  int q = 0;
  while ((std::size_t{1} << q) < dim) ++q;
  return q;
}

/// Block diagonal diag(I, u).
inline CMatrix controlled(const CMatrix& u) {
  const auto d = u.rows();
  CMatrix c = CMatrix::Zero(2 * d, 2 * d);
  c.topLeftCorner(d, d).setIdentity();
  c.bottomRightCorner(d, d) = u;
  return c;
}

/// u^power by repeated squaring.
inline CMatrix matrix_power(const CMatrix& u, std::uint64_t power) {
  CMatrix result = CMatrix::Identity(u.rows(), u.cols());
  CMatrix base = u;
  while (power > 0) {
    if (power & 1u) result = result * base;
    power >>= 1u;
    if (power > 0) base = base * base;
  }
  return result;
}

/// Real orthogonal Q diagonalizing a complex symmetric normal matrix
/// (Q^T m Q diagonal). Such matrices have commuting real and imaginary
/// parts, so a generic real combination of the two shares their
/// eigenvectors. Throws DecompositionError if no real basis exists.
inline RMatrix real_orthogonal_eigenbasis(const CMatrix& m, double tol = 1e-9) {
  const RMatrix re = m.real();
  const RMatrix im = m.imag();
  if ((re - re.transpose()).cwiseAbs().maxCoeff() > tol ||
      (im - im.transpose()).cwiseAbs().maxCoeff() > tol)
    throw DecompositionError("matrix is not complex symmetric");
  constexpr double mixes[] = {0.5772156649, 1.6180339887, -2.7182818284, 0.3183098862, 4.6692016091};
  for (double x : mixes) {
    RMatrix combo = re + x * im;
    combo = 0.5 * (combo + combo.transpose());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(combo);
    const RMatrix& q = es.eigenvectors();
    CMatrix d = q.transpose().cast<cplx>() * m * q.cast<cplx>();
    d.diagonal().setZero();
    if (max_abs(d) < tol) return q;
  }
  throw DecompositionError("no real orthogonal eigenbasis within tolerance");
}

/// Kronecker product of two dense complex matrices (first factor is the
/// more significant subsystem).
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace rqpe
