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

#include "rqpe/core.hpp"

#include <limits>
#include <optional>

namespace rqpe {

/// Determinant counts for n electrons in m Kramers pairs (2m spinors).
///   non-relativistic: C(m, n/2)^2     relativistic: C(2m, n)
/// Counts are kept as natural logarithms so large spaces do not overflow;
/// exact integers are filled in when they fit in 64 bits.
struct CiDimensions {
  double log_n_nr = 0.0;
  double log_n_r = 0.0;
  std::optional<std::uint64_t> n_nr;
  std::optional<std::uint64_t> n_r;
  double ratio = 0.0;
  /// sqrt(pi (2k - 1)) / (2k) * sqrt(m), k = m / n.
  double stirling_ratio = 0.0;
};

inline double log_binomial(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

/// C(n, k) if it fits in uint64_t.
inline std::optional<std::uint64_t> binomial_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  }
  return static_cast<std::uint64_t>(acc);
}

inline CiDimensions ci_dimensions(std::uint64_t n_electrons, std::uint64_t m_orbitals) {
  if (n_electrons < 2) throw InputError("ci_dimensions requires at least 2 electrons");
  if (n_electrons % 2 != 0) throw InputError("ci_dimensions requires an even electron count");
  if (n_electrons > 2 * m_orbitals) throw InputError("more electrons than spinors");

  CiDimensions d;
  const std::uint64_t half = n_electrons / 2;
  d.log_n_nr = 2.0 * log_binomial(m_orbitals, half);
  d.log_n_r = log_binomial(2 * m_orbitals, n_electrons);

  const auto c_nr = binomial_u64(m_orbitals, half);
  if (c_nr && *c_nr <= std::numeric_limits<std::uint32_t>::max()) d.n_nr = *c_nr * *c_nr;
  d.n_r = binomial_u64(2 * m_orbitals, n_electrons);

  if (d.n_nr && d.n_r)
    d.ratio = static_cast<double>(*d.n_r) / static_cast<double>(*d.n_nr);
  else
    d.ratio = std::exp(d.log_n_r - d.log_n_nr);

  const double m = static_cast<double>(m_orbitals);
  const double k = m / static_cast<double>(n_electrons);
  d.stirling_ratio = std::sqrt(pi * (2.0 * k - 1.0)) / (2.0 * k) * std::sqrt(m);
  return d;
}

}  // namespace rqpe
