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

// Dense statevector simulation for the gate set {R_Y, H, CNOT, CZ}, the
// layered real-amplitude ansatz, the H+CZ correlation layer, and reduced
// density matrices with purity / entropy measures.
//
// Qubit 0 is the most significant bit of a basis label. States need not be
// normalized: the Chebyshev feature states enter circuits unnormalized and
// every gate here is linear.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qcpm/errors.hpp"

namespace qcpm {

inline constexpr int kMaxSimulatedQubits = 24;

template <typename Scalar>
class BasicStateVector {
 public:
  using value_type = Scalar;

  /// |0...0> on n qubits.
  explicit BasicStateVector(int n_qubits) : n_qubits_(n_qubits) {
    check_size(n_qubits);
    amplitudes_.assign(std::size_t{1} << n_qubits, Scalar{0});
    amplitudes_[0] = Scalar{1};
  }

  BasicStateVector(int n_qubits, std::vector<Scalar> amplitudes)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    check_size(n_qubits);
    if (amplitudes_.size() != (std::size_t{1} << n_qubits)) {
      throw SizeError("state vector: " + std::to_string(amplitudes_.size()) +
                      " amplitudes for " + std::to_string(n_qubits) + " qubits");
    }
  }

  static BasicStateVector basis(int n_qubits, std::size_t index) {
    BasicStateVector state(n_qubits);
    if (index >= state.dim()) throw IndexError("basis index out of range");
    state.amplitudes_[0] = Scalar{0};
    state.amplitudes_[index] = Scalar{1};
    return state;
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }

  std::span<const Scalar> amplitudes() const { return amplitudes_; }
  std::span<Scalar> amplitudes() { return amplitudes_; }
  const Scalar& operator[](std::size_t i) const { return amplitudes_[i]; }
  Scalar& operator[](std::size_t i) { return amplitudes_[i]; }

  /// Bit of qubit q inside a basis label.
  std::size_t mask(int qubit) const { return std::size_t{1} << (n_qubits_ - 1 - qubit); }

  double squared_norm() const {
    double sum = 0.0;
    for (const Scalar& a : amplitudes_) sum += std::norm(a);
    return sum;
  }

  void normalize() {
    const double norm = std::sqrt(squared_norm());
    if (norm == 0.0) throw ValidationError("cannot normalize the zero vector");
    for (Scalar& a : amplitudes_) a /= norm;
  }

  void check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= n_qubits_) {
      throw IndexError("qubit index " + std::to_string(qubit) + " outside [0, " +
                       std::to_string(n_qubits_) + ")");
    }
  }

 private:
  static void check_size(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxSimulatedQubits) {
      throw SizeError("state vector: unsupported qubit count " + std::to_string(n_qubits));
    }
  }

  int n_qubits_;
  std::vector<Scalar> amplitudes_;
};

using Amplitude = std::complex<double>;
using StateVector = BasicStateVector<Amplitude>;
using RealStateVector = BasicStateVector<double>;

StateVector to_complex(const RealStateVector& state);

/// Kronecker product; `high` occupies the most significant qubits.
template <typename Scalar>
BasicStateVector<Scalar> tensor(const BasicStateVector<Scalar>& high,
                                const BasicStateVector<Scalar>& low) {
  std::vector<Scalar> out(high.dim() * low.dim());
  for (std::size_t i = 0; i < high.dim(); ++i) {
    for (std::size_t j = 0; j < low.dim(); ++j) out[i * low.dim() + j] = high[i] * low[j];
  }
  return BasicStateVector<Scalar>(high.n_qubits() + low.n_qubits(), std::move(out));
}

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

enum class GateKind { kH, kCNOT, kCZ };

std::string_view to_string(GateKind gate);

/// R_Y(angle) = [[cos a/2, -sin a/2], [sin a/2, cos a/2]].
template <typename Scalar>
void apply_ry(BasicStateVector<Scalar>& state, int qubit, double angle) {
  state.check_qubit(qubit);
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const std::size_t m = state.mask(qubit);
  auto amps = state.amplitudes();
  for (std::size_t base = 0; base < amps.size(); base += 2 * m) {
    for (std::size_t i = base; i < base + m; ++i) {
      const Scalar a0 = amps[i];
      const Scalar a1 = amps[i + m];
      amps[i] = c * a0 - s * a1;
      amps[i + m] = s * a0 + c * a1;
    }
  }
}

template <typename Scalar>
void apply_h(BasicStateVector<Scalar>& state, int qubit) {
  state.check_qubit(qubit);
  const double r = 1.0 / std::sqrt(2.0);
  const std::size_t m = state.mask(qubit);
  auto amps = state.amplitudes();
  for (std::size_t base = 0; base < amps.size(); base += 2 * m) {
    for (std::size_t i = base; i < base + m; ++i) {
      const Scalar a0 = amps[i];
      const Scalar a1 = amps[i + m];
      amps[i] = r * (a0 + a1);
      amps[i + m] = r * (a0 - a1);
    }
  }
}

namespace detail {
template <typename Scalar>
void check_pair(const BasicStateVector<Scalar>& state, int a, int b) {
  state.check_qubit(a);
  state.check_qubit(b);
  if (a == b) throw IndexError("two-qubit gate on repeated qubit " + std::to_string(a));
}
}  // namespace detail

template <typename Scalar>
void apply_cnot(BasicStateVector<Scalar>& state, int control, int target) {
  detail::check_pair(state, control, target);
  const std::size_t cm = state.mask(control);
  const std::size_t tm = state.mask(target);
  auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & cm) && !(i & tm)) std::swap(amps[i], amps[i | tm]);
  }
}

template <typename Scalar>
void apply_cz(BasicStateVector<Scalar>& state, int a, int b) {
  detail::check_pair(state, a, b);
  const std::size_t both = state.mask(a) | state.mask(b);
  auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & both) == both) amps[i] = -amps[i];
  }
}

template <typename Scalar>
void apply_gate(BasicStateVector<Scalar>& state, GateKind gate, std::span<const int> qubits) {
  const std::size_t arity = gate == GateKind::kH ? 1 : 2;
  if (qubits.size() != arity) {
    throw IndexError(std::string(to_string(gate)) + " expects " + std::to_string(arity) +
                     " qubit(s), got " + std::to_string(qubits.size()));
  }
  switch (gate) {
    case GateKind::kH:
      apply_h(state, qubits[0]);
      break;
    case GateKind::kCNOT:
      apply_cnot(state, qubits[0], qubits[1]);
      break;
    case GateKind::kCZ:
      apply_cz(state, qubits[0], qubits[1]);
      break;
  }
}

// ---------------------------------------------------------------------------
// Hardware-efficient real-amplitude ansatz
// ---------------------------------------------------------------------------

enum class Entangler {
  kClosed,  // CNOT(i, i+1) for i < N-1, then CNOT(N-1, 0): N gates per layer
  kOpen,    // CNOT(i, i+1) only: N-1 gates per layer
};

std::string_view to_string(Entangler entangler);
Entangler parse_entangler(std::string_view text);

struct AnsatzSpec {
  int n_qubits = 4;
  int depth = 3;
  Entangler entangler = Entangler::kClosed;

  std::size_t parameter_count() const {
    return static_cast<std::size_t>(n_qubits) * static_cast<std::size_t>(depth + 1);
  }
  /// (control, target) pairs of one entangling layer, register-local indices.
  std::vector<std::pair<int, int>> entangler_pairs() const;
  std::size_t entangler_count() const {
    return entangler_pairs().size() * static_cast<std::size_t>(depth);
  }
};

/// Applies d blocks of [R_Y on every qubit, CNOT layer] and a closing R_Y
/// layer to qubits first_qubit .. first_qubit + N - 1. Parameter l*N + q is
/// the angle of qubit q in rotation layer l. The adjoint runs the exact
/// inverse: reversed gate order and negated angles.
template <typename Scalar>
void apply_hera(BasicStateVector<Scalar>& state, std::span<const double> params,
                const AnsatzSpec& spec, int first_qubit = 0, bool adjoint = false) {
  if (params.size() != spec.parameter_count()) {
    throw SizeError("HERA with N=" + std::to_string(spec.n_qubits) +
                    ", d=" + std::to_string(spec.depth) + " takes " +
                    std::to_string(spec.parameter_count()) + " parameters, got " +
                    std::to_string(params.size()));
  }
  if (first_qubit < 0 || first_qubit + spec.n_qubits > state.n_qubits()) {
    throw IndexError("HERA register does not fit in the state");
  }
  const auto pairs = spec.entangler_pairs();
  const int n = spec.n_qubits;
  auto rotation_layer = [&](int layer, double sign) {
    for (int q = 0; q < n; ++q) {
      apply_ry(state, first_qubit + q, sign * params[static_cast<std::size_t>(layer * n + q)]);
    }
  };
  if (!adjoint) {
    for (int layer = 0; layer < spec.depth; ++layer) {
      rotation_layer(layer, 1.0);
      for (const auto& [c, t] : pairs) apply_cnot(state, first_qubit + c, first_qubit + t);
    }
    rotation_layer(spec.depth, 1.0);
  } else {
    rotation_layer(spec.depth, -1.0);
    for (int layer = spec.depth - 1; layer >= 0; --layer) {
      for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
        apply_cnot(state, first_qubit + it->first, first_qubit + it->second);
      }
      rotation_layer(layer, -1.0);
    }
  }
}

// ---------------------------------------------------------------------------
// Correlation layer
// ---------------------------------------------------------------------------

void check_register_pair(int n_qubits, std::span<const int> z_qubits, std::span<const int> q_qubits);

/// Forward: H on every z qubit, then CZ(z[i], q[i]). Adjoint: CZ layer first,
/// then the H layer.
template <typename Scalar>
void apply_correlation(BasicStateVector<Scalar>& state, std::span<const int> z_qubits,
                       std::span<const int> q_qubits, bool adjoint = false) {
  check_register_pair(state.n_qubits(), z_qubits, q_qubits);
  if (!adjoint) {
    for (int q : z_qubits) apply_h(state, q);
    for (std::size_t i = 0; i < z_qubits.size(); ++i) apply_cz(state, z_qubits[i], q_qubits[i]);
  } else {
    for (std::size_t i = z_qubits.size(); i-- > 0;) apply_cz(state, z_qubits[i], q_qubits[i]);
    for (int q : z_qubits) apply_h(state, q);
  }
}

template <typename Scalar>
Scalar overlap_with_zero(const BasicStateVector<Scalar>& state) {
  return state[0];
}

// ---------------------------------------------------------------------------
// Reductions and entanglement measures
// ---------------------------------------------------------------------------

struct ReducedDensity {
  std::size_t dim = 0;
  Eigen::MatrixXcd matrix;
};

/// Density matrix over `keep` (first listed qubit is most significant). The
/// input state is normalized internally, so the result always has trace 1.
ReducedDensity partial_trace(const StateVector& state, std::span<const int> keep);

/// Tr(rho^2). Rejects non-Hermitian input.
double purity(const ReducedDensity& rho);

/// -sum lambda log2 lambda over eigenvalues above 1e-12, in bits.
double von_neumann_entropy(const ReducedDensity& rho);

/// I(Z:Q) = 2 S(rho_Z) for a pure global state.
double mutual_information_pure(const StateVector& state, std::span<const int> partition_z);

/// Qubits [first, first + count).
std::vector<int> qubit_range(int first, int count);

}  // namespace qcpm
