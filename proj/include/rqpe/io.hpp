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
 * JSON file formats. Complex numbers are [re, im] pairs; matrices are
 * row-major lists of rows.
 *
 *   hamiltonian/1  {schema, dim, shift, window{e_min, e_max, negate}, matrix, label?}
 *   circuit/1      {schema, n_qubits, ops[{kind, targets, controls, angle?, matrix?, label?}]}
 *   statevector/1  {schema, dim, amplitudes}
 *   unitary/1      {schema, dim, matrix}
 *
 * Malformed documents raise InputError; shape disagreements inside a
 * document raise DimensionError.
 */
#pragma once

#include "rqpe/core.hpp"
#include "rqpe/hamil.hpp"
#include "rqpe/qsim.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace rqpe::io {

using json = nlohmann::json;

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + p.string());
  out << text;
  if (!out) throw InputError("failed writing file: " + p.string());
}

inline json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(what + ": malformed JSON (" + e.what() + ")");
  }
}

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw InputError("matrix rows must be lists");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array()) throw InputError("matrix rows must be lists");
    if (static_cast<Eigen::Index>(row.size()) != cols) throw DimensionError("ragged matrix rows");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

inline json vector_to_json(const CVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v[i]));
  return a;
}

inline CVector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("amplitudes must be a non-empty list");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return v;
}

namespace detail {

inline void expect_schema(const json& j, const std::string& schema) {
  if (!j.is_object()) throw InputError("document must be a JSON object");
  if (!j.contains("schema") || j["schema"] != schema)
    throw InputError("expected schema \"" + schema + "\"");
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("bad type for field: ") + key);
  }
}

}  // namespace detail

// ---------------------------------------------------------------- hamiltonian

inline json to_json(const HamiltonianModel& h) {
  json j;
  j["schema"] = "hamiltonian/1";
  j["dim"] = h.dim();
  j["shift"] = h.shift;
  j["window"] = {{"e_min", h.window.e_min}, {"e_max", h.window.e_max}, {"negate", h.window.negate}};
  j["matrix"] = matrix_to_json(h.matrix);
  if (!h.label.empty()) j["label"] = h.label;
  return j;
}

inline HamiltonianModel hamiltonian_from_json(const json& j) {
  detail::expect_schema(j, "hamiltonian/1");
  HamiltonianModel h;
  const auto dim = detail::field<long long>(j, "dim");
  h.shift = detail::field<double>(j, "shift");
  if (!j.contains("window") || !j["window"].is_object()) throw InputError("missing field: window");
  const json& w = j["window"];
  h.window.e_min = detail::field<double>(w, "e_min");
  h.window.e_max = detail::field<double>(w, "e_max");
  h.window.negate = detail::field<bool>(w, "negate");
  if (!j.contains("matrix")) throw InputError("missing field: matrix");
  h.matrix = matrix_from_json(j["matrix"]);
  if (j.contains("label")) h.label = detail::field<std::string>(j, "label");
  if (h.matrix.rows() != dim || h.matrix.cols() != dim)
    throw DimensionError("Hamiltonian matrix does not match its declared dim");
  h.validate();
  return h;
}

inline HamiltonianModel load_hamiltonian(const std::filesystem::path& p) {
  return hamiltonian_from_json(parse(read_text(p), p.string()));
}

// -------------------------------------------------------------------- circuit

inline json to_json(const GateOp& g) {
  json j;
  j["kind"] = std::string(to_string(g.kind));
  j["targets"] = g.targets;
  j["controls"] = g.controls;
  if (g.kind == GateKind::Rz || g.kind == GateKind::Ry) j["angle"] = g.angle;
  if (g.kind == GateKind::Unitary1q || g.kind == GateKind::ControlledUnitary) j["matrix"] = matrix_to_json(g.matrix);
  if (!g.label.empty()) j["label"] = g.label;
  return j;
}

inline json to_json(const Circuit& c) {
  json j;
  j["schema"] = "circuit/1";
  j["n_qubits"] = c.n_qubits;
  json ops = json::array();
  for (const GateOp& g : c.ops) ops.push_back(to_json(g));
  j["ops"] = std::move(ops);
  return j;
}

inline Circuit circuit_from_json(const json& j) {
  detail::expect_schema(j, "circuit/1");
  Circuit c(detail::field<int>(j, "n_qubits"));
  if (c.n_qubits < 0 || c.n_qubits > 24) throw InputError("unsupported qubit count");
  if (!j.contains("ops") || !j["ops"].is_array()) throw InputError("missing field: ops");
  for (const json& o : j["ops"]) {
    GateOp g;
    g.kind = gate_kind_from_string(detail::field<std::string>(o, "kind"));
    g.targets = detail::field<std::vector<int>>(o, "targets");
    g.controls = o.contains("controls") ? detail::field<std::vector<int>>(o, "controls") : std::vector<int>{};
    if (o.contains("angle")) g.angle = detail::field<double>(o, "angle");
    if (o.contains("matrix")) g.matrix = matrix_from_json(o["matrix"]);
    if (o.contains("label")) g.label = detail::field<std::string>(o, "label");
    validate(g, c.n_qubits);
    c.ops.push_back(std::move(g));
  }
  return c;
}

// ---------------------------------------------------------------- statevector

inline json statevector_to_json(const CVector& v) {
  return {{"schema", "statevector/1"}, {"dim", v.size()}, {"amplitudes", vector_to_json(v)}};
}

inline CVector statevector_from_json(const json& j) {
  detail::expect_schema(j, "statevector/1");
  CVector v = vector_from_json(j.contains("amplitudes") ? j["amplitudes"] : json());
  if (j.contains("dim") && detail::field<long long>(j, "dim") != v.size())
    throw DimensionError("statevector length does not match its declared dim");
  return v;
}

inline CVector load_statevector(const std::filesystem::path& p) {
  return statevector_from_json(parse(read_text(p), p.string()));
}

// -------------------------------------------------------------------- unitary

inline json unitary_to_json(const CMatrix& u) {
  return {{"schema", "unitary/1"}, {"dim", u.rows()}, {"matrix", matrix_to_json(u)}};
}

inline CMatrix unitary_from_json(const json& j) {
  detail::expect_schema(j, "unitary/1");
  CMatrix u = matrix_from_json(j.contains("matrix") ? j["matrix"] : json());
  if (u.rows() != u.cols()) throw DimensionError("unitary must be square");
  if (j.contains("dim") && detail::field<long long>(j, "dim") != u.rows())
    throw DimensionError("unitary does not match its declared dim");
  if (!is_unitary(u, 1e-10)) throw InputError("matrix is not unitary");
  return u;
}

inline CMatrix load_unitary(const std::filesystem::path& p) {
  return unitary_from_json(parse(read_text(p), p.string()));
}

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, x >>= 4) s[static_cast<std::size_t>(i)] = digits[x & 0xfu];
  return s;
}

}  // namespace rqpe::io
