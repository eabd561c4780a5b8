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


#include "rqpe/hamil.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

using namespace rqpe;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

HamiltonianModel model(CMatrix m, EnergyWindow w = {0.0, 1.0, false}, double shift = 0.0) {
  return HamiltonianModel{std::move(m), shift, w, "test"};
}

/// Scalar-exponential oracle for a diagonal input.
CMatrix diagonal_oracle(const RVector& e, const EnergyWindow& w, double tau, double power) {
  CMatrix out = CMatrix::Zero(e.size(), e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double ew = w.sign() * e[i] - w.e_min;
    out(i, i) = std::exp(cplx(0.0, -tau * power * ew));
  }
  return out;
}

}  // namespace

TEST_CASE("window_tau", "[hamil]") {
  CHECK_THAT(window_tau({2.0, 3.5, true}), WithinRel(two_pi / 1.5, 1e-15));
  CHECK_THAT(window_tau({0.0, 1.0, false}), WithinRel(two_pi, 1e-15));
  CHECK_THAT(0.5 / std::ldexp(1.0, 17), WithinAbs(3.8147e-6, 1e-10));
  CHECK_THROWS_AS(window_tau({1.0, 1.0, false}), InputError);
}

TEST_CASE("phase_to_energy affine map", "[hamil]") {
  const EnergyWindow w{2.0, 3.5, true};
  CHECK_THAT(phase_to_energy(0.0, w, -6477.89247780), WithinAbs(-6479.89247780, 1e-9));
  CHECK_THROWS_AS(phase_to_energy(1.0, w, 0.0), InputError);
  CHECK_THROWS_AS(phase_to_energy(-0.1, w, 0.0), InputError);

  for (int i = 0; i < 100; ++i) {
    const double x = rqpe::testing::uniform(0.0, 1.0);
    for (const EnergyWindow& win : {w, EnergyWindow{-1.0, 0.5, false}}) {
      const double e = phase_to_energy(x, win, -12.5);
      CHECK_THAT(energy_to_phase(e, win, -12.5), WithinAbs(x, 1e-12));
    }
  }
}

TEST_CASE("propagator examples", "[hamil]") {
  const CMatrix zero = CMatrix::Zero(3, 3);
  CHECK(max_abs(propagator(model(zero), 1.7, 1) - CMatrix::Identity(3, 3)) < 1e-14);

  RVector e(4);
  e << 0.1, 0.35, 0.8, 0.99;
  const EnergyWindow w{-1.0, 0.0, true};
  const double tau = window_tau(w);
  for (std::uint64_t p : {1u, 2u, 5u}) {
    const CMatrix u = propagator(model(e.cast<cplx>().asDiagonal(), w), tau, p);
    CHECK(max_abs(u - diagonal_oracle(e, w, tau, static_cast<double>(p))) < 1e-12);
  }

  const HamiltonianModel h = model(rqpe::testing::random_hermitian(4));
  const CMatrix u1 = propagator(h, 0.9, 1);
  const CMatrix u2 = propagator(h, 0.9, 2);
  CHECK(max_abs(u2 - u1 * u1) < 1e-10);
  CHECK(unitarity_error(u1) < 1e-10);

  CMatrix bad = rqpe::testing::random_complex(3, 3);
  CHECK_THROWS_AS(propagator(model(bad), 1.0, 1), InputError);
}

TEST_CASE("property: propagator eigenphases are -tau times windowed eigenvalues", "[hamil][property]") {
  for (int trial = 0; trial < 30; ++trial) {
    const EnergyWindow w{rqpe::testing::uniform(-3, 0), rqpe::testing::uniform(0.5, 3), trial % 2 == 0};
    const HamiltonianModel h = model(rqpe::testing::random_hermitian(5), w);
    const double tau = window_tau(w);
    const CMatrix u = propagator(h, tau, 1);
    const Spectrum sp = spectrum(h);
    for (Eigen::Index j = 0; j < 5; ++j) {
      const CVector v = sp.vectors.col(j);
      const cplx lambda = v.dot(u * v);
      const double expect = -tau * (w.sign() * sp.values[j] - w.e_min);
      CHECK(std::abs(lambda - std::polar(1.0, expect)) < 1e-9);
    }
  }
}

TEST_CASE("register_propagator pads with an identity block", "[hamil]") {
  const HamiltonianModel h = model(rqpe::testing::random_hermitian(3));
  const CMatrix u = register_propagator(h, 1.3, 3);
  REQUIRE(u.rows() == 4);
  CHECK(max_abs(u.topLeftCorner(3, 3) - propagator(h, 1.3, 3)) < 1e-14);
  CHECK(std::abs(u(3, 3) - 1.0) < 1e-15);
  CHECK(max_abs(u.row(3).head(3)) == 0.0);
}

TEST_CASE("HamiltonianModel validation", "[hamil]") {
  CHECK_THROWS_AS(model(CMatrix(0, 0)).validate(), DimensionError);
  CHECK_THROWS_AS(model(CMatrix::Identity(2, 2), EnergyWindow{1.0, 0.0, false}).validate(), InputError);
  CMatrix nh = CMatrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(model(nh).validate(), InputError);
}
