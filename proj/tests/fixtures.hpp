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


// Problem generators shared by the unit tests and the acceptance runner.
#pragma once

#include "rqpe/asp.hpp"
#include "rqpe/fermion.hpp"
#include "rqpe/hamil.hpp"
#include "test_support.hpp"

#include <array>

namespace rqpe::testing {

/// Random integrals obeying h_pq = conj(h_qp), g_pqrs = conj(g_rspq).
inline SecondQuantizedHamiltonian random_integrals(int n, bool complex_values, int n_two_body) {
  SecondQuantizedHamiltonian sq;
  sq.n_spinors = n;
  auto value = [&] { return complex_values ? cplx(gaussian(), gaussian()) : cplx(gaussian(), 0.0); };
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      const cplx v = p == q ? cplx(gaussian(), 0.0) : value();
      sq.one_body[{p, q}] = v;
      sq.one_body[{q, p}] = std::conj(v);
    }
  std::uniform_int_distribution<int> idx(0, n - 1);
  for (int t = 0; t < n_two_body; ++t) {
    const std::array<int, 4> k{idx(rng()), idx(rng()), idx(rng()), idx(rng())};
    const std::array<int, 4> kc{k[2], k[3], k[0], k[1]};
    const cplx v = k == kc ? cplx(gaussian(), 0.0) : value();
    sq.two_body[k] = v;
    sq.two_body[kc] = std::conj(v);
  }
  return sq;
}

/// V diag(rel) V^dagger with Haar V; V is returned through `vectors`.
inline HamiltonianModel with_spectrum(const RVector& rel, const EnergyWindow& w, CMatrix* vectors = nullptr) {
  const CMatrix v = random_unitary(rel.size());
  if (vectors) *vectors = v;
  HamiltonianModel h;
  h.matrix = v * rel.cast<cplx>().asDiagonal() * v.adjoint();
  h.matrix = 0.5 * (h.matrix + h.matrix.adjoint());
  h.window = w;
  return h;
}

/// Exact Hamiltonian whose ground state has overlap^2 `q` with |hf>, its
/// HF-seeded initial Hamiltonian, and the smallest gap along the path.
/// Levels are `scale` * (-10, 1, 1.5, 2, ...).
struct GappedPair {
  HamiltonianModel init, exact;
  double min_gap = 0.0;
};

inline GappedPair gapped_pair(Eigen::Index d, Eigen::Index hf, double q, double scale = 1.0) {
  for (;;) {
    CVector g = random_state(d);
    g[hf] = 0.0;
    g = std::sqrt(q) * CVector::Unit(d, hf) + std::sqrt(1 - q) * g.normalized();
    CMatrix basis = random_complex(d, d);
    basis.col(0) = g;
    const CMatrix v = Eigen::HouseholderQR<CMatrix>(basis).householderQ();
    RVector e(d);
    e[0] = -10.0 * scale;
    for (Eigen::Index i = 1; i < d; ++i) e[i] = scale * (0.5 + 0.5 * static_cast<double>(i));
    GappedPair p;
    p.exact.matrix = v * e.cast<cplx>().asDiagonal() * v.adjoint();
    p.exact.matrix = 0.5 * (p.exact.matrix + p.exact.matrix.adjoint());
    p.init = build_h_init(p.exact, hf);
    p.min_gap = 1e9;
    for (int j = 0; j <= 200; ++j) {
      const double s = j / 200.0;
      const RVector ev = spectrum(CMatrix((1 - s) * p.init.matrix + s * p.exact.matrix)).values;
      p.min_gap = std::min(p.min_gap, ev[1] - ev[0]);
    }
    if (p.min_gap > 0.2 * scale) return p;
  }
}

}  // namespace rqpe::testing
