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


#include "rqpe/ipea.hpp"
#include "ipea_oracle.hpp"
#include "fixtures.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

using namespace rqpe;
using rqpe::testing::uniform;
using rqpe::testing::with_spectrum;

namespace {

double relative_energy(double phi, const EnergyWindow& w) { return w.sign() * (w.e_min + phi * w.width()); }

double circular_distance(double a, double b) {
  const double d = wrap_unit(a - b);
  return std::min(d, 1.0 - d);
}

StateVector padded(const CVector& v) {
  const Eigen::Index p = Eigen::Index{1} << qubits_for_dim(static_cast<std::size_t>(v.size()));
  CVector out = CVector::Zero(p);
  out.head(v.size()) = v;
  return StateVector(out);
}

const double eight_over_pi2 = 8.0 / (pi * pi);

}  // namespace

TEST_CASE("feedback angle examples", "[ipea]") {
  CHECK(feedback_angle({}) == 0.0);
  const std::vector<int> one{1};
  CHECK(feedback_angle(one) == Catch::Approx(pi / 2).epsilon(1e-15));
  const std::vector<int> two{1, 1};
  CHECK(feedback_angle(two) == Catch::Approx(3 * pi / 4).epsilon(1e-15));
  const std::vector<int> mixed{0, 1, 0, 1};
  CHECK(feedback_angle(mixed) == Catch::Approx(two_pi * (1.0 / 8 + 1.0 / 32)).epsilon(1e-15));
  const std::vector<int> bad{2};
  CHECK_THROWS_AS(feedback_angle(bad), InputError);
}

TEST_CASE("single iteration examples", "[ipea]") {
  const StateVector e0 = new_basis_state(1, 0);
  const IterationOutcome id = ipea_iteration(e0, CMatrix::Identity(2, 2), 1, 0.0);
  CHECK(id.p[0] == Catch::Approx(1.0).margin(1e-15));
  CHECK(id.p[1] == Catch::Approx(0.0).margin(1e-15));

  CMatrix u = CMatrix::Identity(2, 2);
  u(0, 0) = std::polar(1.0, -two_pi * 0.5);
  const IterationOutcome half = ipea_iteration(e0, u, 1, 0.0);
  CHECK(half.p[1] == Catch::Approx(1.0).margin(1e-15));
  REQUIRE(half.post[1]);
  CHECK(std::norm(e0.amplitudes().dot(half.post[1]->amplitudes())) == Catch::Approx(1.0).margin(1e-14));

  // Analytic one-bit formula P(0) = cos^2((theta + omega) / 2).
  for (int trial = 0; trial < 50; ++trial) {
    const double phi = uniform();
    const double omega = uniform(0.0, two_pi);
    const int k = 1 + trial % 4;
    u(0, 0) = std::polar(1.0, -two_pi * phi);
    const IterationOutcome o = ipea_iteration(e0, u, k, omega);
    const double theta = -two_pi * std::ldexp(phi, k - 1);
    CHECK(std::abs(o.p[0] - std::pow(std::cos(0.5 * (theta + omega)), 2)) < 1e-12);
    CHECK(std::abs(o.p[0] + o.p[1] - 1.0) < 1e-13);
  }

  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(ipea_iteration(e0, bad, 1, 0.0), InputError);
  CHECK_THROWS_AS(ipea_iteration(e0, CMatrix::Identity(4, 4), 1, 0.0), DimensionError);
}

TEST_CASE("exact three-bit phase is read out deterministically", "[ipea]") {
  CMatrix u = CMatrix::Identity(2, 2);
  u(1, 1) = std::polar(1.0, -two_pi * 0.625);  // 0.101 in binary
  const IpeaTrace t = trace_ipea(matrix_oracle(u), new_basis_state(1, 1), 3, IpeaVersion::A);
  CHECK(t.bits == std::vector<int>{1, 0, 1});
  for (double p : t.per_bit_probability) CHECK(p == Catch::Approx(1.0).margin(1e-12));
  CHECK(bits_to_phase(t.bits) == 0.625);

  // Same readout through a Hamiltonian with a window.
  HamiltonianModel h;
  h.window = {-1.0, 1.0, false};
  h.shift = 10.0;
  h.matrix = CMatrix::Zero(2, 2);
  h.matrix(1, 1) = relative_energy(0.625, h.window);
  h.matrix(0, 0) = relative_energy(0.125, h.window);
  IpeaConfig cfg;
  cfg.n_bits = 3;
  const IpeaResult r = run_ipea(h, new_basis_state(1, 1), cfg);
  CHECK(r.bits == std::vector<int>{1, 0, 1});
  CHECK(r.energy == Catch::Approx(h.matrix(1, 1).real() + 10.0).margin(1e-12));
  CHECK(r.total_success_probability == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("17-bit readout reaches the window resolution", "[ipea]") {
  for (int trial = 0; trial < 40; ++trial) {
    EnergyWindow w{uniform(-3.0, -1.0), 0.0, trial % 2 == 1};
    w.e_max = w.e_min + 0.5;
    const int d = 2 + trial % 3;
    HamiltonianModel h;
    h.window = w;
    h.shift = uniform(-100.0, 100.0);
    h.matrix = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) h.matrix(i, i) = relative_energy(uniform(0.0, 0.999), w);
    const int pick = trial % d;
    CVector e = CVector::Zero(d);
    e[pick] = 1.0;
    const IpeaResult r = run_ipea(h, padded(e), IpeaConfig{});
    const double exact = h.matrix(pick, pick).real() + h.shift;
    CHECK(std::abs(r.energy - exact) <= 0.5 / std::ldexp(1.0, 17) + 1e-12);
    CHECK(r.total_success_probability > eight_over_pi2);
    CHECK(r.total_success_probability <= 1.0 + 1e-12);
    REQUIRE(r.bits.size() == 17);
    CHECK(r.phase == Catch::Approx(bits_to_phase(r.bits)).margin(0));
    CHECK(r.phase >= 0.0);
    CHECK(r.phase < 1.0);
  }
}

TEST_CASE("random Hermitian eigenvector input matches the eigensolver", "[ipea]") {
  const int k = 12;
  for (int trial = 0; trial < 20; ++trial) {
    HamiltonianModel h;
    h.matrix = rqpe::testing::random_hermitian(4);
    const Spectrum sp = spectrum(h.matrix);
    h.window = {sp.values.minCoeff() - 0.5, sp.values.maxCoeff() + 0.5, false};
    const int j = trial % 4;
    IpeaConfig cfg;
    cfg.n_bits = k;
    const IpeaResult r = run_ipea(h, StateVector(sp.vectors.col(j)), cfg);
    CHECK(std::abs(r.energy - sp.values[j]) <= h.window.width() / std::ldexp(1.0, k) + 1e-12);

    // The ML string is the true phase truncated or rounded up to K bits.
    const double phi = energy_to_phase(sp.values[j], h);
    const auto y = static_cast<std::uint64_t>(std::llround(std::ldexp(r.phase, k)));
    const auto lo = static_cast<std::uint64_t>(std::floor(std::ldexp(phi, k)));
    CHECK((y == lo || y == (lo + 1) % (std::uint64_t{1} << k)));

    // Collapse preserves an eigenstate in version A.
    CHECK(std::norm(sp.vectors.col(j).dot(r.final_state.amplitudes())) == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("success probability of an eigenvector lies in (8/pi^2, 1]", "[ipea][property]") {
  for (int k = 1; k <= 12; ++k)
    for (int trial = 0; trial < 25; ++trial) {
      CMatrix vecs;
      RVector rel(3);
      const EnergyWindow w{-2.0, 1.0, trial % 2 == 0};
      for (int i = 0; i < 3; ++i) rel[i] = relative_energy(uniform(), w);
      const HamiltonianModel h = with_spectrum(rel, w, &vecs);
      for (IpeaVersion v : {IpeaVersion::A, IpeaVersion::B}) {
        IpeaConfig cfg;
        cfg.n_bits = k;
        cfg.version = v;
        const double sp = success_probability(h, padded(vecs.col(trial % 3)), cfg);
        CHECK(sp > eight_over_pi2 - 1e-9);
        CHECK(sp <= 1.0 + 1e-12);
      }
    }
  // Exactly representable phase.
  const EnergyWindow w{0.0, 1.0, false};
  RVector rel(2);
  rel << 0.375, 0.75;
  CMatrix vecs;
  const HamiltonianModel h = with_spectrum(rel, w, &vecs);
  IpeaConfig cfg;
  cfg.n_bits = 6;
  CHECK(success_probability(h, StateVector(vecs.col(0)), cfg) == Catch::Approx(1.0).margin(1e-12));
  cfg.count_last_bit = true;
  CHECK(success_probability(h, StateVector(vecs.col(1)), cfg) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("mixed initial state scales the success probability", "[ipea]") {
  // Target phase generic; the other eigenphases sit on the K-bit grid far
  // from it, so they never produce an acceptable string.
  const int k = 8;
  const EnergyWindow w{-1.0, 1.0, false};
  for (int trial = 0; trial < 30; ++trial) {
    const double phi_t = uniform();
    RVector rel(4);
    rel[0] = relative_energy(phi_t, w);
    for (int i = 1; i < 4; ++i) {
      double phi;
      do {
        phi = std::floor(uniform() * 256.0) / 256.0;
      } while (circular_distance(phi, phi_t) < 8.0 / 256.0);
      rel[i] = relative_energy(phi, w);
    }
    CMatrix vecs;
    const HamiltonianModel h = with_spectrum(rel, w, &vecs);
    const double q = 0.6;
    CVector orth = vecs.col(1) * rqpe::testing::random_state(1)[0] + vecs.col(2) * 0.5 + vecs.col(3) * 0.3;
    orth.normalize();
    const CVector psi = std::sqrt(q) * vecs.col(0) + std::sqrt(1 - q) * orth;
    IpeaConfig cfg;
    cfg.n_bits = k;
    const double sp = success_probability(h, StateVector(psi), cfg);
    CHECK(sp > q * (eight_over_pi2 - 1e-9));
    CHECK(sp <= q + 1e-12);
    const double oracle = rqpe::testing::exhaustive_success_probability(hamiltonian_oracle(h), StateVector(psi), k,
                                                                      IpeaVersion::A, false, phi_t);
    CHECK(std::abs(sp - oracle) < 1e-10);
  }
}

TEST_CASE("property: spectral formula equals exhaustive path enumeration", "[ipea][property]") {
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 4 + trial % 5;
    const int k = 3 + trial % 6;
    HamiltonianModel h;
    h.matrix = rqpe::testing::random_hermitian(d);
    const Spectrum spec = spectrum(h.matrix);
    h.window = {spec.values.minCoeff() - 0.3, spec.values.maxCoeff() + 0.3, trial % 3 == 0};
    if (h.window.negate) h.window = {-spec.values.maxCoeff() - 0.3, -spec.values.minCoeff() + 0.3, true};
    const CVector psi = rqpe::testing::random_state(d);
    for (IpeaVersion v : {IpeaVersion::A, IpeaVersion::B})
      for (bool last : {false, true}) {
        IpeaConfig cfg;
        cfg.n_bits = k;
        cfg.version = v;
        cfg.count_last_bit = last;
        const StateVector init = padded(psi);
        const SpectralInput in = spectral_input(h, init, h.window);
        const double sp = success_probability(h, init, cfg);
        double total = 0.0;
        const double oracle = rqpe::testing::exhaustive_success_probability(
            hamiltonian_oracle(h), init, k, v, last, in.components[in.target].phase, &total);
        CHECK(std::abs(sp - oracle) < 1e-10);
        CHECK(std::abs(total - 1.0) < 1e-10);
      }
  }
}

TEST_CASE("unitary overload agrees with path enumeration", "[ipea]") {
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix u = rqpe::testing::random_unitary(4);
    const StateVector psi(rqpe::testing::random_state(4));
    Eigen::ComplexSchur<CMatrix> schur(u);
    Eigen::Index best = 0;
    (schur.matrixU().adjoint() * psi.amplitudes()).cwiseAbs2().maxCoeff(&best);
    const double phi = wrap_unit(-std::arg(schur.matrixT()(best, best)) / two_pi);
    const double sp = success_probability(u, psi, 6, IpeaVersion::A, false);
    const double oracle = rqpe::testing::exhaustive_success_probability(matrix_oracle(u), psi, 6,
                                                                      IpeaVersion::A, false, phi);
    CHECK(std::abs(sp - oracle) < 1e-10);
  }
}

TEST_CASE("property: more overlap never lowers the success probability", "[ipea][property]") {
  const EnergyWindow w{-1.0, 1.0, false};
  for (int trial = 0; trial < 20; ++trial) {
    RVector rel(4);
    for (int i = 0; i < 4; ++i) rel[i] = relative_energy(uniform(), w);
    CMatrix vecs;
    const HamiltonianModel h = with_spectrum(rel, w, &vecs);
    CVector rest = vecs.col(1) * 0.6 + vecs.col(2) * 0.48 + vecs.col(3) * 0.64;
    rest.normalize();
    IpeaConfig cfg;
    cfg.n_bits = 9;
    double previous = -1.0;
    for (double q = 0.5; q <= 1.0 + 1e-12; q += 0.05) {
      const CVector psi = std::sqrt(q) * vecs.col(0) + std::sqrt(std::max(0.0, 1 - q)) * rest;
      const double sp = success_probability(h, StateVector(psi), cfg);
      CHECK(sp >= previous - 1e-12);
      previous = sp;
    }
  }
}

TEST_CASE("target selection", "[ipea]") {
  const EnergyWindow w{0.0, 1.0, false};
  RVector rel(4);
  rel << 0.2, 0.4, 0.6, 1.7;
  CMatrix vecs;
  const HamiltonianModel h = with_spectrum(rel, w, &vecs);
  // Equal overlaps on 0.4 and 0.6 break toward the lower energy; 1.7 is
  // outside the window even though it carries the largest weight.
  const CVector psi = 0.5 * vecs.col(1) + 0.5 * vecs.col(2) + std::sqrt(0.5) * vecs.col(3);
  const SpectralInput in = spectral_input(h, StateVector(psi), w);
  CHECK(std::abs(in.target_energy - 0.4) < 1e-12);
  CHECK(std::abs(in.target_overlap - 0.25) < 1e-12);

  const CVector outside = vecs.col(3);
  HamiltonianModel h2 = h;
  h2.window = {3.0, 4.0, false};
  CHECK_THROWS_AS(spectral_input(h2, StateVector(outside), h2.window), InputError);
}

TEST_CASE("padding embeds odd dimensions", "[ipea]") {
  const EnergyWindow w{-1.0, 2.0, false};
  RVector rel(3);
  rel << -0.5, 0.3, 1.1;
  CMatrix vecs;
  const HamiltonianModel h = with_spectrum(rel, w, &vecs);
  IpeaConfig cfg;
  cfg.n_bits = 10;
  const StateVector short_state = detail::embed_initial(h, CVector(vecs.col(1)));
  CHECK(short_state.dim() == 4);
  const IpeaResult r = run_ipea(h, short_state, cfg);
  CHECK(std::abs(r.energy - 0.3) <= 3.0 / 1024 + 1e-12);
}

TEST_CASE("invalid IPEA inputs", "[ipea]") {
  HamiltonianModel h;
  h.matrix = CMatrix::Identity(2, 2) * 0.5;
  IpeaConfig cfg;
  cfg.n_bits = 4;
  CHECK_THROWS_AS(run_ipea(h, new_basis_state(2, 0), cfg), DimensionError);
  CVector unnorm = CVector::Ones(2);
  CHECK_THROWS_AS(run_ipea(h, StateVector(unnorm), cfg), InputError);
  cfg.n_bits = 0;
  CHECK_THROWS_AS(run_ipea(h, new_basis_state(1, 0), cfg), InputError);
  cfg.n_bits = 4;
  cfg.window = EnergyWindow{1.0, 1.0, false};
  CHECK_THROWS_AS(run_ipea(h, new_basis_state(1, 0), cfg), InputError);
}
