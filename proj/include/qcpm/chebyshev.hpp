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

// Chebyshev polynomials of the first kind, node lattices, amplitude-encoded
// feature vectors and the cosine-transform matrix that maps Chebyshev
// coefficients to values on the node grid. Also the affine (optionally
// log-scaled) maps between a problem box and [-1, 1]^2.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcpm {

inline constexpr int kMaxQubitsPerRegister = 12;

/// T_k(x) by the three-term recurrence. Throws DomainError for |x| > 1.
double chebyshev_t(int degree, double x);

/// T_0(x) .. T_{count-1}(x) in one recurrence pass.
std::vector<double> chebyshev_t_all(std::size_t count, double x);

/// Amplitude weight of degree k in an N-qubit Chebyshev state:
/// 2^{-N/2} for k = 0 and 2^{-(N-1)/2} otherwise.
double feature_weight(std::size_t degree, int n_qubits);

struct ChebGrid {
  int n_qubits = 0;
  std::size_t size = 0;             // 2^N
  std::vector<double> nodes;        // cos(pi (j + 1/2) / M), decreasing
  std::vector<double> half_nodes;   // cos(pi (i + 1) / M), interleaved
};

ChebGrid make_grid(int n_qubits);

struct ChebPoint {
  double u = 0.0;
  double v = 0.0;
};

/// Training lattice: all node pairs (row-major in j, j') followed by all
/// half-node pairs. Size 4^N + (2^N - 1)^2.
std::vector<ChebPoint> training_lattice(const ChebGrid& grid);

struct FeatureVector {
  double x = 0.0;
  std::vector<double> amplitudes;

  double squared_norm() const;
};

/// Unnormalized Chebyshev state amplitudes w_k T_k(x), k < 2^N.
FeatureVector feature_vector(double x, int n_qubits);

/// Row-major M'xM' matrix with entry(j, k) = eta_k cos(k pi (j + 1/2) / M').
/// Rows are Chebyshev-node evaluations, so applying it to a coefficient vector
/// gives the series values on the whole node grid at once.
class ChebTransform {
 public:
  explicit ChebTransform(int n_qubits_total);

  int n_qubits_total() const { return n_qubits_total_; }
  std::size_t dim() const { return dim_; }
  double entry(std::size_t j, std::size_t k) const { return matrix_[j * dim_ + k]; }
  std::span<const double> row(std::size_t j) const {
    return {matrix_.data() + j * dim_, dim_};
  }
  std::span<const double> data() const { return matrix_; }

  /// out[j] = sum_k entry(j, k) coeffs[k]; coeffs may be shorter than dim()
  /// (missing high degrees are zero).
  std::vector<double> evaluate(std::span<const double> coeffs) const;

 private:
  int n_qubits_total_;
  std::size_t dim_;
  std::vector<double> matrix_;
};

ChebTransform cheb_transform(int n_qubits_total);

enum class AxisTransform { kLinear, kLog10 };

std::string_view to_string(AxisTransform transform);
AxisTransform parse_axis_transform(std::string_view text);

/// Axis-aligned problem box. The x axis carries the momentum fraction z, the
/// y axis the energy scale Q.
struct DomainBox {
  double x_lo = 0.01;
  double x_hi = 1.0;
  double y_lo = 1.0;
  double y_hi = 1.0e4;
  AxisTransform x_axis = AxisTransform::kLinear;
  AxisTransform y_axis = AxisTransform::kLog10;

  /// Throws DomainError on inverted bounds or a log axis with bound <= 0.
  void validate() const;

  bool operator==(const DomainBox&) const = default;
};

struct ProblemPoint {
  double x = 0.0;
  double y = 0.0;
};

ChebPoint to_chebyshev_domain(ProblemPoint point, const DomainBox& box);
ProblemPoint from_chebyshev_domain(ChebPoint point, const DomainBox& box);

}  // namespace qcpm
