// Copyright 2026 The QCPM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcpm/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace qcpm {

StateVector to_complex(const RealStateVector& state) {
  std::vector<Amplitude> amps(state.amplitudes().begin(), state.amplitudes().end());
  return StateVector(state.n_qubits(), std::move(amps));
}

std::string_view to_string(GateKind gate) {
  switch (gate) {
    case GateKind::kH:
      return "H";
    case GateKind::kCNOT:
      return "CNOT";
    case GateKind::kCZ:
      return "CZ";
  }
  return "?";
}

std::string_view to_string(Entangler entangler) {
  return entangler == Entangler::kClosed ? "closed" : "open";
}

Entangler parse_entangler(std::string_view text) {
  if (text == "closed") return Entangler::kClosed;
  if (text == "open") return Entangler::kOpen;
  throw ValidationError("unknown entangler '" + std::string(text) + "' (expected open or closed)");
}

std::vector<std::pair<int, int>> AnsatzSpec::entangler_pairs() const {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i + 1 < n_qubits; ++i) pairs.emplace_back(i, i + 1);
  if (entangler == Entangler::kClosed && n_qubits >= 2) pairs.emplace_back(n_qubits - 1, 0);
  return pairs;
}

void check_register_pair(int n_qubits, std::span<const int> z_qubits,
                         std::span<const int> q_qubits) {
  if (z_qubits.size() != q_qubits.size()) {
    throw IndexError("correlation layer: register sizes differ (" +
                     std::to_string(z_qubits.size()) + " vs " +
                     std::to_string(q_qubits.size()) + ")");
  }
  std::vector<int> all(z_qubits.begin(), z_qubits.end());
  all.insert(all.end(), q_qubits.begin(), q_qubits.end());
  for (int q : all) {
    if (q < 0 || q >= n_qubits) throw IndexError("correlation layer: qubit out of range");
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw IndexError("correlation layer: registers overlap or repeat a qubit");
  }
}

std::vector<int> qubit_range(int first, int count) {
  std::vector<int> qubits(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) qubits[static_cast<std::size_t>(i)] = first + i;
  return qubits;
}

ReducedDensity partial_trace(const StateVector& state, std::span<const int> keep) {
  const int n = state.n_qubits();
  if (keep.empty()) throw IndexError("partial_trace: nothing to keep");
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (int q : keep) {
    state.check_qubit(q);
    if (kept[static_cast<std::size_t>(q)]) throw IndexError("partial_trace: repeated qubit");
    kept[static_cast<std::size_t>(q)] = true;
  }
  std::vector<int> env;
  for (int q = 0; q < n; ++q) {
    if (!kept[static_cast<std::size_t>(q)]) env.push_back(q);
  }

  const std::size_t keep_dim = std::size_t{1} << keep.size();
  const std::size_t env_dim = std::size_t{1} << env.size();
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(keep_dim),
                                                static_cast<Eigen::Index>(env_dim));
  for (std::size_t i = 0; i < state.dim(); ++i) {
    std::size_t a = 0;
    for (int q : keep) a = (a << 1) | ((i & state.mask(q)) ? 1u : 0u);
    std::size_t e = 0;
    for (int q : env) e = (e << 1) | ((i & state.mask(q)) ? 1u : 0u);
    psi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(e)) = state[i];
  }
  const double norm2 = state.squared_norm();
  if (!(norm2 > 0.0)) throw ValidationError("partial_trace: zero state");
  ReducedDensity rho;
  rho.dim = keep_dim;
  rho.matrix = (psi * psi.adjoint()) / norm2;
  return rho;
}

namespace {

void check_hermitian(const ReducedDensity& rho) {
  const auto dim = static_cast<Eigen::Index>(rho.dim);
  if (rho.matrix.rows() != dim || rho.matrix.cols() != dim) {
    throw ValidationError("density matrix shape does not match its dimension");
  }
  const double deviation = (rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (deviation > 1e-10) {
    throw ValidationError("density matrix is not Hermitian (deviation " +
                          std::to_string(deviation) + ")");
  }
}

}  // namespace

double purity(const ReducedDensity& rho) {
  check_hermitian(rho);
  // Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
  return rho.matrix.cwiseAbs2().sum();
}

double von_neumann_entropy(const ReducedDensity& rho) {
  check_hermitian(rho);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix, Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (double lambda : solver.eigenvalues()) {
    if (lambda > 1e-12) entropy -= lambda * std::log2(lambda);
  }
  return std::max(entropy, 0.0);
}

double mutual_information_pure(const StateVector& state, std::span<const int> partition_z) {
  return 2.0 * von_neumann_entropy(partial_trace(state, partition_z));
}

}  // namespace qcpm
