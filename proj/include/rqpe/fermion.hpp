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
 * Second-quantized Hamiltonians over Kramers-paired spinors:
 *
 *     H = sum_pq h_pq a+_p a_q + 1/2 sum_pqrs g_pqrs a+_p a+_q a_s a_r
 *
 * Spinor p occupies qubit p. Kramers pair j contributes the unbarred
 * spinor 2j and the barred spinor 2j+1, so partners are adjacent on the
 * register. A set qubit means an occupied spinor.
 */
#pragma once

#include "rqpe/core.hpp"
#include "rqpe/hamil.hpp"

#include <array>
#include <bit>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rqpe {

/// Spinor (and qubit) index of Kramers pair `pair`, partner A or B.
inline constexpr int kramers_spinor(int pair, bool barred) { return 2 * pair + (barred ? 1 : 0); }

struct SecondQuantizedHamiltonian {
  int n_spinors = 0;
  std::map<std::array<int, 2>, cplx> one_body;
  std::map<std::array<int, 4>, cplx> two_body;

  cplx h(int p, int q) const {
    auto it = one_body.find({p, q});
    return it == one_body.end() ? cplx{} : it->second;
  }

  cplx g(int p, int q, int r, int s) const {
    auto it = two_body.find({p, q, r, s});
    return it == two_body.end() ? cplx{} : it->second;
  }

  /// Index ranges plus h_pq = conj(h_qp) and g_pqrs = conj(g_rspq).
  void validate(double tol = 1e-12) const {
    if (n_spinors < 0 || n_spinors > 62) throw DimensionError("unsupported spinor count");
    auto in_range = [&](int p) { return p >= 0 && p < n_spinors; };
    for (const auto& [k, v] : one_body) {
      if (!in_range(k[0]) || !in_range(k[1])) throw InputError("one-body index out of range");
      if (std::abs(v - std::conj(h(k[1], k[0]))) > tol)
        throw InputError("one-body integrals are not Hermitian");
    }
    for (const auto& [k, v] : two_body) {
      for (int p : k)
        if (!in_range(p)) throw InputError("two-body index out of range");
      if (std::abs(v - std::conj(g(k[2], k[3], k[0], k[1]))) > tol)
        throw InputError("two-body integrals are not Hermitian");
    }
  }
};

/// Linear combination of Pauli words; word[q] acts on qubit q.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_(n_qubits) {}

  static PauliSum identity(int n_qubits, cplx c = 1.0) {
    PauliSum s(n_qubits);
    s.add(c, std::string(static_cast<std::size_t>(n_qubits), 'I'));
    return s;
  }

  int n_qubits() const { return n_; }

  void add(cplx c, const std::string& word) {
    if (static_cast<int>(word.size()) != n_) throw DimensionError("Pauli word length mismatch");
    for (char ch : word)
      if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z') throw InputError("invalid Pauli letter");
    terms_[word] += c;
  }

  PauliSum& operator+=(const PauliSum& o) {
    check_width(o);
    for (const auto& [w, c] : o.terms_) terms_[w] += c;
    return *this;
  }

  PauliSum& operator*=(cplx c) {
    for (auto& [w, v] : terms_) v *= c;
    return *this;
  }

  friend PauliSum operator*(const PauliSum& a, const PauliSum& b) {
    a.check_width(b);
    PauliSum out(a.n_);
    for (const auto& [wa, ca] : a.terms_)
      for (const auto& [wb, cb] : b.terms_) {
        std::string w(static_cast<std::size_t>(a.n_), 'I');
        cplx phase = 1.0;
        for (std::size_t q = 0; q < w.size(); ++q) {
          const auto [letter, f] = multiply_letters(wa[q], wb[q]);
          w[q] = letter;
          phase *= f;
        }
        out.terms_[w] += phase * ca * cb;
      }
    return out;
  }

  /// Drops terms with |c| <= tol; remaining words are sorted and unique.
  PauliSum simplified(double tol = 1e-12) const {
    PauliSum out(n_);
    for (const auto& [w, c] : terms_)
      if (std::abs(c) > tol) out.terms_.emplace(w, c);
    return out;
  }

  std::vector<std::pair<cplx, std::string>> terms() const {
    std::vector<std::pair<cplx, std::string>> v;
    v.reserve(terms_.size());
    for (const auto& [w, c] : terms_) v.emplace_back(c, w);
    return v;
  }

  std::size_t size() const { return terms_.size(); }

  cplx coefficient(const std::string& word) const {
    auto it = terms_.find(word);
    return it == terms_.end() ? cplx{} : it->second;
  }

  /// Dense matrix in the simulator's qubit order (qubit 0 most significant).
  CMatrix to_matrix() const {
    if (n_ > 14) throw DimensionError("PauliSum::to_matrix limited to 14 qubits");
    const std::uint64_t dim = std::uint64_t{1} << n_;
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& [w, c] : terms_) {
      std::uint64_t flip = 0, zmask = 0, ymask = 0;
      for (int q = 0; q < n_; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n_ - 1 - q);
        if (w[static_cast<std::size_t>(q)] == 'X' || w[static_cast<std::size_t>(q)] == 'Y') flip |= bit;
        if (w[static_cast<std::size_t>(q)] == 'Y' || w[static_cast<std::size_t>(q)] == 'Z') zmask |= bit;
        if (w[static_cast<std::size_t>(q)] == 'Y') ymask |= bit;
      }
      // Y = i X Z on each site: phase i^{#Y} (-1)^{popcount(col & zmask)}.
      static constexpr cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      const cplx base = c * ipow[std::popcount(ymask) % 4];
      for (std::uint64_t col = 0; col < dim; ++col) {
        const double sgn = (std::popcount(col & zmask) & 1) ? -1.0 : 1.0;
        m(static_cast<Eigen::Index>(col ^ flip), static_cast<Eigen::Index>(col)) += sgn * base;
      }
    }
    return m;
  }

 private:
  void check_width(const PauliSum& o) const {
    if (o.n_ != n_) throw DimensionError("PauliSum width mismatch");
  }

  static std::pair<char, cplx> multiply_letters(char a, char b) {
    if (a == 'I') return {b, 1.0};
    if (b == 'I') return {a, 1.0};
    if (a == b) return {'I', 1.0};
    // Cyclic XY = iZ, YZ = iX, ZX = iY.
    const std::string order = "XYZ";
    const auto ia = order.find(a), ib = order.find(b);
    const char c = order[3 - ia - ib];
    const bool cyclic = (ib == (ia + 1) % 3);
    return {c, cyclic ? imag_unit : -imag_unit};
  }

  int n_ = 0;
  std::map<std::string, cplx> terms_;
};

namespace detail {

/// Z_0 ... Z_{p-1} (X_p + sign i Y_p)/2; sign -1 gives a+_p, +1 gives a_p.
inline PauliSum jw_ladder(int p, int n, double sign) {
  std::string w(static_cast<std::size_t>(n), 'I');
  for (int q = 0; q < p; ++q) w[static_cast<std::size_t>(q)] = 'Z';
  PauliSum s(n);
  w[static_cast<std::size_t>(p)] = 'X';
  s.add(0.5, w);
  w[static_cast<std::size_t>(p)] = 'Y';
  s.add(0.5 * sign * imag_unit, w);
  return s;
}

}  // namespace detail

inline PauliSum jordan_wigner(const SecondQuantizedHamiltonian& sq) {
  sq.validate();
  const int n = sq.n_spinors;
  std::vector<PauliSum> create, annihilate;
  for (int p = 0; p < n; ++p) {
    create.push_back(detail::jw_ladder(p, n, -1.0));
    annihilate.push_back(detail::jw_ladder(p, n, +1.0));
  }
  PauliSum out(n);
  for (const auto& [k, v] : sq.one_body) {
    PauliSum t = create[static_cast<std::size_t>(k[0])] * annihilate[static_cast<std::size_t>(k[1])];
    t *= v;
    out += t;
  }
  for (const auto& [k, v] : sq.two_body) {
    const auto [p, q, r, s] = k;
    PauliSum t = create[static_cast<std::size_t>(p)] * create[static_cast<std::size_t>(q)] *
                 annihilate[static_cast<std::size_t>(s)] * annihilate[static_cast<std::size_t>(r)];
    t *= 0.5 * v;
    out += t;
  }
  return out.simplified();
}

namespace detail {

/// Applies a_p (create = false) or a+_p to an occupation bitstring in the
/// qubit layout; returns false when the result vanishes.
inline bool apply_ladder(std::uint64_t& occ, double& sign, int p, int n, bool create) {
  const std::uint64_t bit = std::uint64_t{1} << (n - 1 - p);
  if (((occ & bit) != 0) == create) return false;
  // Modes q < p sit at more significant bits than p.
  const std::uint64_t above = ~((bit << 1) - 1);
  if (std::popcount(occ & above) & 1) sign = -sign;
  occ ^= bit;
  return true;
}

}  // namespace detail

/// Brute-force matrix in the occupation-number basis; window (0, 1).
inline HamiltonianModel fock_matrix(const SecondQuantizedHamiltonian& sq) {
  if (sq.n_spinors > 14) throw DimensionError("fock_matrix limited to 14 spinors");
  sq.validate();
  const int n = sq.n_spinors;
  const std::uint64_t dim = std::uint64_t{1} << n;
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t col = 0; col < dim; ++col) {
    for (const auto& [k, v] : sq.one_body) {
      std::uint64_t occ = col;
      double sgn = 1.0;
      if (!detail::apply_ladder(occ, sgn, k[1], n, false)) continue;
      if (!detail::apply_ladder(occ, sgn, k[0], n, true)) continue;
      m(static_cast<Eigen::Index>(occ), static_cast<Eigen::Index>(col)) += sgn * v;
    }
    for (const auto& [k, v] : sq.two_body) {
      const auto [p, q, r, s] = k;
      std::uint64_t occ = col;
      double sgn = 1.0;
      if (!detail::apply_ladder(occ, sgn, r, n, false)) continue;
      if (!detail::apply_ladder(occ, sgn, s, n, false)) continue;
      if (!detail::apply_ladder(occ, sgn, q, n, true)) continue;
      if (!detail::apply_ladder(occ, sgn, p, n, true)) continue;
      m(static_cast<Eigen::Index>(occ), static_cast<Eigen::Index>(col)) += 0.5 * sgn * v;
    }
  }
  HamiltonianModel h{m, 0.0, EnergyWindow{0.0, 1.0, false}, "fock"};
  if (!is_hermitian(h.matrix, 1e-10)) throw InputError("fock_matrix produced a non-Hermitian matrix");
  return h;
}

struct GateCount {
  std::size_t pauli_strings = 0;
  std::size_t gates = 0;
};

/// Gates to exponentiate one Pauli string of weight w with c X/Y letters:
/// a CNOT ladder (2(w-1)), basis changes (2c) and one Rz.
inline std::size_t pauli_string_gate_cost(const std::string& word) {
  std::size_t w = 0, xy = 0;
  for (char ch : word) {
    if (ch != 'I') ++w;
    if (ch == 'X' || ch == 'Y') ++xy;
  }
  if (w == 0) return 0;
  return 2 * (w - 1) + 2 * xy + 1;
}

/// Counts the non-identity Pauli strings (and their exponentiation gates)
/// produced by one integral and its Hermitian partner on `n_spinors` modes.
/// `indices` holds (p, q) for h_pq or (p, q, r, s) for g_pqrs. A complex
/// integral uses the coefficient e^{0.7 i}, a real one uses 1.
inline GateCount gate_count_estimate(std::span<const int> indices, int n_spinors, bool is_complex) {
  SecondQuantizedHamiltonian sq;
  sq.n_spinors = n_spinors;
  const cplx c = is_complex ? std::polar(1.0, 0.7) : cplx{1.0};
  if (indices.size() == 2) {
    const std::array<int, 2> k{indices[0], indices[1]}, kc{indices[1], indices[0]};
    if (k == kc && is_complex)
      throw std::invalid_argument("diagonal one-body integral cannot be complex");
    sq.one_body[k] = c;
    sq.one_body[kc] = std::conj(c);
  } else if (indices.size() == 4) {
    const std::array<int, 4> k{indices[0], indices[1], indices[2], indices[3]};
    const std::array<int, 4> kc{indices[2], indices[3], indices[0], indices[1]};
    if (k == kc && is_complex)
      throw std::invalid_argument("self-adjoint two-body integral cannot be complex");
    sq.two_body[k] = c;
    sq.two_body[kc] = std::conj(c);
  } else {
    throw std::invalid_argument("integral pattern needs 2 or 4 indices");
  }
  GateCount out;
  for (const auto& [coef, word] : jordan_wigner(sq).terms()) {
    if (word.find_first_not_of('I') == std::string::npos) continue;
    ++out.pauli_strings;
    out.gates += pauli_string_gate_cost(word);
  }
  return out;
}

}  // namespace rqpe
