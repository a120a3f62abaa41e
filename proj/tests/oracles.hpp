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

// Independent reference implementations used as test oracles. Nothing here
// calls into the simulator: gates are dense matrices built from Kronecker
// products and basis-label arithmetic.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <map>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace qcpm::testing {

template <typename T>
using MatrixT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using VectorT = Eigen::Matrix<T, Eigen::Dynamic, 1>;
using Matrix = MatrixT<double>;
using Vector = VectorT<double>;

template <typename T = double>
MatrixT<T> kron(const MatrixT<T>& a, const MatrixT<T>& b) {
  MatrixT<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

template <typename T = double>
MatrixT<T> ry_matrix(T angle) {
  MatrixT<T> m(2, 2);
  const T c = std::cos(angle / 2);
  const T s = std::sin(angle / 2);
  m << c, -s, s, c;
  return m;
}

template <typename T = double>
MatrixT<T> h_matrix() {
  MatrixT<T> m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(T(2));
}

/// Single-qubit gate on `qubit` of `n` (qubit 0 is the leftmost factor).
template <typename T = double>
MatrixT<T> embed(const MatrixT<T>& gate, int qubit, int n) {
  const MatrixT<T> left = MatrixT<T>::Identity(Eigen::Index{1} << qubit, Eigen::Index{1} << qubit);
  const MatrixT<T> right =
      MatrixT<T>::Identity(Eigen::Index{1} << (n - qubit - 1), Eigen::Index{1} << (n - qubit - 1));
  return kron<T>(kron<T>(left, gate), right);
}

inline int bit(std::size_t label, int qubit, int n) {
  return static_cast<int>((label >> (n - 1 - qubit)) & 1u);
}

template <typename T = double>
MatrixT<T> cnot_matrix(int control, int target, int n) {
  const std::size_t dim = std::size_t{1} << n;
  MatrixT<T> m = MatrixT<T>::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t j = i;
    if (bit(i, control, n)) j ^= std::size_t{1} << (n - 1 - target);
    m(j, i) = 1;
  }
  return m;
}

template <typename T = double>
MatrixT<T> cz_matrix(int a, int b, int n) {
  const std::size_t dim = std::size_t{1} << n;
  MatrixT<T> m = MatrixT<T>::Identity(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (bit(i, a, n) && bit(i, b, n)) m(i, i) = -1;
  }
  return m;
}

/// Layered R_Y / CNOT unitary on qubits [first, first + r) of an n-qubit space.
template <typename T = double>
MatrixT<T> hera_matrix(const std::vector<T>& angles, int r, int depth, bool closed, int first,
                       int n) {
  const std::size_t dim = std::size_t{1} << n;
  MatrixT<T> u = MatrixT<T>::Identity(dim, dim);
  auto rotations = [&](int layer) {
    for (int q = 0; q < r; ++q) u = embed<T>(ry_matrix<T>(angles[layer * r + q]), first + q, n) * u;
  };
  for (int layer = 0; layer < depth; ++layer) {
    rotations(layer);
    for (int q = 0; q + 1 < r; ++q) u = cnot_matrix<T>(first + q, first + q + 1, n) * u;
    if (closed && r >= 2) u = cnot_matrix<T>(first + r - 1, first, n) * u;
  }
  rotations(depth);
  return u;
}

/// H on the first register, then CZ(z_i, q_i), for two r-qubit registers.
template <typename T = double>
MatrixT<T> correlation_matrix(int r) {
  const int n = 2 * r;
  const std::size_t dim = std::size_t{1} << n;
  MatrixT<T> u = MatrixT<T>::Identity(dim, dim);
  for (int q = 0; q < r; ++q) u = embed<T>(h_matrix<T>(), q, n) * u;
  for (int q = 0; q < r; ++q) u = cz_matrix<T>(q, r + q, n) * u;
  return u;
}

/// Weighted Chebyshev feature state via the trigonometric definition.
template <typename T = double>
VectorT<T> feature_oracle(T x, int r) {
  const std::size_t m = std::size_t{1} << r;
  VectorT<T> out(m);
  const T t = std::acos(x);
  for (std::size_t k = 0; k < m; ++k) {
    const T w = k == 0 ? std::pow(T(2), T(-0.5) * r) : std::pow(T(2), T(-0.5) * (r - 1));
    out(k) = w * std::cos(static_cast<T>(k) * t);
  }
  return out;
}

/// <0| (V(theta) x V(vartheta)) C (tau(u) x tau(v)) from dense matrices.
inline double amplitude_oracle(const std::vector<double>& theta, const std::vector<double>& vartheta,
                               int r, int depth, bool closed, bool correlation, double u,
                               double v) {
  const int n = 2 * r;
  Matrix total = hera_matrix(theta, r, depth, closed, 0, n) * hera_matrix(vartheta, r, depth, closed, r, n);
  if (correlation) total = total * correlation_matrix(r);
  const Matrix input = kron<double>(Matrix(feature_oracle(u, r)), Matrix(feature_oracle(v, r)));
  return (total.row(0) * input)(0, 0);
}

/// Feature states of a fixed point set, evaluated once in type T.
template <typename T>
struct OracleBatch {
  int r = 0;
  std::vector<VectorT<T>> fu;
  std::vector<VectorT<T>> fv;
  std::vector<T> targets;
};

template <typename T>
OracleBatch<T> make_oracle_batch(int r, const std::vector<std::pair<double, double>>& points,
                                 const std::vector<double>& targets) {
  OracleBatch<T> batch;
  batch.r = r;
  for (std::size_t i = 0; i < points.size(); ++i) {
    batch.fu.push_back(feature_oracle<T>(points[i].first, r));
    batch.fv.push_back(feature_oracle<T>(points[i].second, r));
    batch.targets.push_back(targets[i]);
  }
  return batch;
}

/// Mean squared error of alpha A^2 + beta, evaluated in type T. Each register
/// unitary is formed on its own r qubits, then the zero row of the full
/// circuit is assembled as (row0(V_z) x row0(V_q)) C.
template <typename T>
T loss_oracle(const std::vector<double>& flat, int depth, bool closed, bool correlation,
              const OracleBatch<T>& batch) {
  const int r = batch.r;
  const std::size_t n_angles = static_cast<std::size_t>(r * (depth + 1));
  const std::vector<T> theta(flat.begin(), flat.begin() + n_angles);
  const std::vector<T> vartheta(flat.begin() + n_angles, flat.begin() + 2 * n_angles);
  const T alpha = flat[2 * n_angles];
  const T beta = flat[2 * n_angles + 1];
  const MatrixT<T> vz = hera_matrix<T>(theta, r, depth, closed, 0, r);
  const MatrixT<T> vq = hera_matrix<T>(vartheta, r, depth, closed, 0, r);
  MatrixT<T> row = kron<T>(MatrixT<T>(vz.row(0)), MatrixT<T>(vq.row(0)));
  if (correlation) {
    static std::map<int, MatrixT<T>> cache;
    auto it = cache.find(r);
    if (it == cache.end()) it = cache.emplace(r, correlation_matrix<T>(r)).first;
    row = row * it->second;
  }
  // Zero row reshaped so that A = fu^T R fv.
  const Eigen::Index m = Eigen::Index{1} << r;
  MatrixT<T> reshaped(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index l = 0; l < m; ++l) reshaped(k, l) = row(0, k * m + l);
  }
  T sum = 0;
  for (std::size_t i = 0; i < batch.fu.size(); ++i) {
    const T a = batch.fu[i].dot(reshaped * batch.fv[i]);
    const T d = alpha * a * a + beta - batch.targets[i];
    sum += d * d;
  }
  return sum / static_cast<T>(batch.fu.size());
}

inline std::vector<double> random_angles(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
  std::vector<double> out(count);
  for (double& a : out) a = dist(rng);
  return out;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Von Neumann entropy in bits of the subsystem made of the first `keep`
/// qubits of a pure state, via the singular values of the reshaped amplitudes.
inline double schmidt_entropy(const std::vector<std::complex<double>>& amps, int keep, int n) {
  const Eigen::Index rows = Eigen::Index{1} << keep;
  const Eigen::Index cols = Eigen::Index{1} << (n - keep);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = amps[i * cols + j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  double s = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double p = svd.singularValues()(i) * svd.singularValues()(i);
    if (p > 1e-15) s -= p * std::log2(p);
  }
  return s;
}

/// Entropy in bits of the last `n - skip` qubits of a pure state.
inline double schmidt_entropy_tail(const std::vector<std::complex<double>>& amps, int skip, int n) {
  // Singular values are shared by both sides of the bipartition; reshape the
  // other way to exercise the transpose.
  const Eigen::Index rows = Eigen::Index{1} << skip;
  const Eigen::Index cols = Eigen::Index{1} << (n - skip);
  Eigen::MatrixXcd m(cols, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(j, i) = amps[i * cols + j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  double s = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double p = svd.singularValues()(i) * svd.singularValues()(i);
    if (p > 1e-15) s -= p * std::log2(p);
  }
  return s;
}

inline std::vector<std::complex<double>> random_state(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  std::vector<std::complex<double>> out(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& a : out) {
    a = {g(rng), g(rng)};
    norm += std::norm(a);
  }
  for (auto& a : out) a /= std::sqrt(norm);
  return out;
}

}  // namespace qcpm::testing
