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

#include "qcpm/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcpm/errors.hpp"

namespace qcpm {
namespace {

void check_unit_interval(double x, const char* what) {
  if (!(std::abs(x) <= 1.0)) {
    throw DomainError(std::string(what) + ": argument " + std::to_string(x) +
                      " outside [-1, 1]");
  }
}

void check_qubits(int n_qubits, const char* what) {
  if (n_qubits < 1 || n_qubits > kMaxQubitsPerRegister) {
    throw SizeError(std::string(what) + ": qubit count " + std::to_string(n_qubits) +
                    " outside [1, " + std::to_string(kMaxQubitsPerRegister) + "]");
  }
}

double axis_forward(double value, AxisTransform transform) {
  if (transform == AxisTransform::kLog10) {
    if (!(value > 0.0)) {
      throw DomainError("log10 axis: non-positive coordinate " + std::to_string(value));
    }
    return std::log10(value);
  }
  return value;
}

double axis_inverse(double value, AxisTransform transform) {
  return transform == AxisTransform::kLog10 ? std::pow(10.0, value) : value;
}

double to_unit(double value, double lo, double hi, AxisTransform transform, const char* axis) {
  // Tolerate last-ulp excursions of points that sit on the box edge.
  const double slack = 1e-12 * std::max(std::abs(lo), std::abs(hi));
  if (!(value >= lo - slack && value <= hi + slack)) {
    throw DomainError(std::string(axis) + " coordinate " + std::to_string(value) +
                      " outside box [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const double t = axis_forward(value, transform);
  const double t_lo = axis_forward(lo, transform);
  const double t_hi = axis_forward(hi, transform);
  const double u = (2.0 * t - (t_lo + t_hi)) / (t_hi - t_lo);
  return std::clamp(u, -1.0, 1.0);
}

double from_unit(double u, double lo, double hi, AxisTransform transform) {
  const double t_lo = axis_forward(lo, transform);
  const double t_hi = axis_forward(hi, transform);
  const double t = ((t_hi - t_lo) * u + (t_lo + t_hi)) / 2.0;
  return axis_inverse(t, transform);
}

}  // namespace

double chebyshev_t(int degree, double x) {
  if (degree < 0) {
    throw DomainError("chebyshev_t: negative degree " + std::to_string(degree));
  }
  check_unit_interval(x, "chebyshev_t");
  if (degree == 0) return 1.0;
  double prev = 1.0;
  double curr = x;
  for (int k = 1; k < degree; ++k) {
    const double next = 2.0 * x * curr - prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

std::vector<double> chebyshev_t_all(std::size_t count, double x) {
  check_unit_interval(x, "chebyshev_t_all");
  std::vector<double> values(count);
  if (count > 0) values[0] = 1.0;
  if (count > 1) values[1] = x;
  for (std::size_t k = 2; k < count; ++k) {
    values[k] = 2.0 * x * values[k - 1] - values[k - 2];
  }
  return values;
}

double feature_weight(std::size_t degree, int n_qubits) {
  return degree == 0 ? std::pow(2.0, -0.5 * n_qubits) : std::pow(2.0, -0.5 * (n_qubits - 1));
}

ChebGrid make_grid(int n_qubits) {
  check_qubits(n_qubits, "make_grid");
  ChebGrid grid;
  grid.n_qubits = n_qubits;
  grid.size = std::size_t{1} << n_qubits;
  const double m = static_cast<double>(grid.size);
  grid.nodes.resize(grid.size);
  for (std::size_t j = 0; j < grid.size; ++j) {
    grid.nodes[j] = std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) / m);
  }
  grid.half_nodes.resize(grid.size - 1);
  for (std::size_t i = 0; i + 1 < grid.size; ++i) {
    grid.half_nodes[i] = std::cos(std::numbers::pi * (static_cast<double>(i) + 1.0) / m);
  }
  return grid;
}

std::vector<ChebPoint> training_lattice(const ChebGrid& grid) {
  std::vector<ChebPoint> points;
  points.reserve(grid.nodes.size() * grid.nodes.size() +
                 grid.half_nodes.size() * grid.half_nodes.size());
  for (double u : grid.nodes) {
    for (double v : grid.nodes) points.push_back({u, v});
  }
  for (double u : grid.half_nodes) {
    for (double v : grid.half_nodes) points.push_back({u, v});
  }
  return points;
}

double FeatureVector::squared_norm() const {
  double sum = 0.0;
  for (double a : amplitudes) sum += a * a;
  return sum;
}

FeatureVector feature_vector(double x, int n_qubits) {
  check_qubits(n_qubits, "feature_vector");
  check_unit_interval(x, "feature_vector");
  const std::size_t dim = std::size_t{1} << n_qubits;
  FeatureVector fv{x, chebyshev_t_all(dim, x)};
  const double w0 = feature_weight(0, n_qubits);
  const double wk = feature_weight(1, n_qubits);
  fv.amplitudes[0] *= w0;
  for (std::size_t k = 1; k < dim; ++k) fv.amplitudes[k] *= wk;
  return fv;
}

ChebTransform::ChebTransform(int n_qubits_total)
    : n_qubits_total_(n_qubits_total), dim_(0) {
  check_qubits(n_qubits_total, "cheb_transform");
  dim_ = std::size_t{1} << n_qubits_total;
  const double m = static_cast<double>(dim_);
  const double eta0 = std::sqrt(1.0 / m);
  const double eta = std::sqrt(2.0 / m);
  matrix_.resize(dim_ * dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    const double angle = std::numbers::pi * (static_cast<double>(j) + 0.5) / m;
    matrix_[j * dim_] = eta0;
    for (std::size_t k = 1; k < dim_; ++k) {
      matrix_[j * dim_ + k] = eta * std::cos(static_cast<double>(k) * angle);
    }
  }
}

std::vector<double> ChebTransform::evaluate(std::span<const double> coeffs) const {
  if (coeffs.size() > dim_) {
    throw SizeError("ChebTransform::evaluate: " + std::to_string(coeffs.size()) +
                    " coefficients for a " + std::to_string(dim_) + "-point grid");
  }
  std::vector<double> out(dim_, 0.0);
  for (std::size_t j = 0; j < dim_; ++j) {
    const double* r = matrix_.data() + j * dim_;
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) acc += r[k] * coeffs[k];
    out[j] = acc;
  }
  return out;
}

ChebTransform cheb_transform(int n_qubits_total) { return ChebTransform(n_qubits_total); }

std::string_view to_string(AxisTransform transform) {
  return transform == AxisTransform::kLog10 ? "log10" : "linear";
}

AxisTransform parse_axis_transform(std::string_view text) {
  if (text == "linear") return AxisTransform::kLinear;
  if (text == "log10") return AxisTransform::kLog10;
  throw ValidationError("unknown axis transform '" + std::string(text) +
                        "' (expected linear or log10)");
}

void DomainBox::validate() const {
  if (!(x_lo < x_hi)) throw DomainError("box: x_lo must be below x_hi");
  if (!(y_lo < y_hi)) throw DomainError("box: y_lo must be below y_hi");
  if (x_axis == AxisTransform::kLog10 && !(x_lo > 0.0)) {
    throw DomainError("box: log10 x axis needs a positive lower bound");
  }
  if (y_axis == AxisTransform::kLog10 && !(y_lo > 0.0)) {
    throw DomainError("box: log10 y axis needs a positive lower bound");
  }
}

ChebPoint to_chebyshev_domain(ProblemPoint point, const DomainBox& box) {
  box.validate();
  return {to_unit(point.x, box.x_lo, box.x_hi, box.x_axis, "x"),
          to_unit(point.y, box.y_lo, box.y_hi, box.y_axis, "y")};
}

ProblemPoint from_chebyshev_domain(ChebPoint point, const DomainBox& box) {
  box.validate();
  check_unit_interval(point.u, "from_chebyshev_domain (u)");
  check_unit_interval(point.v, "from_chebyshev_domain (v)");
  return {from_unit(point.u, box.x_lo, box.x_hi, box.x_axis),
          from_unit(point.v, box.y_lo, box.y_hi, box.y_axis)};
}

}  // namespace qcpm
