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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qcpm/chebyshev.hpp"
#include "qcpm/errors.hpp"

namespace qcpm {

struct GridPoint {
  double z = 0.0;
  double q = 0.0;
  double value = 0.0;
};

/// A bivariate dataset sampled on the nodes + half-nodes lattice of an
/// N-qubit model. Values are stored normalized to max 1; `scale` restores the
/// original units.
struct TargetGrid {
  DomainBox box;
  int n_qubits = 4;
  std::string label;
  double scale = 1.0;
  std::vector<GridPoint> points;

  std::vector<ChebPoint> chebyshev_points() const;
  std::vector<double> values() const;
};

class LatticeMismatchError : public ValidationError {
 public:
  LatticeMismatchError(const std::string& what, std::vector<ProblemPoint> missing,
                       std::vector<ProblemPoint> extra)
      : ValidationError(what), missing_(std::move(missing)), extra_(std::move(extra)) {}

  const std::vector<ProblemPoint>& missing() const { return missing_; }
  const std::vector<ProblemPoint>& extra() const { return extra_; }

 private:
  std::vector<ProblemPoint> missing_;
  std::vector<ProblemPoint> extra_;
};

/// Tolerance, in Chebyshev coordinates, for matching a data point to a
/// lattice point.
inline constexpr double kLatticeTolerance = 1e-9;

/// Throws LatticeMismatchError unless every lattice point is present exactly
/// once and nothing else is; throws ValidationError on negative or non-finite
/// values.
void validate_lattice(const TargetGrid& grid);

/// Divides values by their maximum and records it in `scale`.
void normalize_to_unit_max(TargetGrid& grid);

/// Evaluates `f(u, v)` on the training lattice and stores rows sorted
/// ascending in (z, Q). Values are not normalized.
TargetGrid make_lattice_grid(int n_qubits, const DomainBox& box, std::string label,
                             const std::function<double(ChebPoint)>& f);

/// Ascending (z, Q).
void sort_points(std::vector<GridPoint>& points);

}  // namespace qcpm
