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

#include "qcpm/target_grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace qcpm {

std::vector<ChebPoint> TargetGrid::chebyshev_points() const {
  std::vector<ChebPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(to_chebyshev_domain({p.z, p.q}, box));
  return out;
}

std::vector<double> TargetGrid::values() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.value);
  return out;
}

void validate_lattice(const TargetGrid& grid) {
  grid.box.validate();
  for (const auto& p : grid.points) {
    if (!std::isfinite(p.value)) {
      throw ValidationError("non-finite value at (z=" + std::to_string(p.z) +
                            ", Q=" + std::to_string(p.q) + ")");
    }
    if (p.value < 0.0) {
      throw ValidationError("negative value " + std::to_string(p.value) + " at (z=" +
                            std::to_string(p.z) + ", Q=" + std::to_string(p.q) + ")");
    }
  }

  const auto lattice = training_lattice(make_grid(grid.n_qubits));
  const auto cheb = grid.chebyshev_points();

  // Sort both sides by u so each lattice point only scans a narrow band.
  std::vector<std::size_t> order(cheb.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cheb[a].u < cheb[b].u;
  });

  std::vector<int> hits(cheb.size(), 0);
  std::vector<ProblemPoint> missing;
  std::vector<ProblemPoint> extra;
  for (const auto& lp : lattice) {
    auto lo = std::lower_bound(order.begin(), order.end(), lp.u - kLatticeTolerance,
                               [&](std::size_t i, double u) { return cheb[i].u < u; });
    int found = 0;
    for (auto it = lo; it != order.end() && cheb[*it].u <= lp.u + kLatticeTolerance; ++it) {
      if (std::abs(cheb[*it].v - lp.v) > kLatticeTolerance) continue;
      ++hits[*it];
      // Copies beyond the first are duplicates.
      if (++found > 1) extra.push_back({grid.points[*it].z, grid.points[*it].q});
    }
    if (found == 0) missing.push_back(from_chebyshev_domain(lp, grid.box));
  }
  for (std::size_t i = 0; i < cheb.size(); ++i) {
    if (hits[i] == 0) extra.push_back({grid.points[i].z, grid.points[i].q});
  }

  if (missing.empty() && extra.empty()) return;

  std::ostringstream msg;
  msg.precision(17);
  msg << "grid does not match the N=" << grid.n_qubits << " training lattice ("
      << lattice.size() << " points expected, " << grid.points.size() << " given)";
  const auto list = [&](const char* name, const std::vector<ProblemPoint>& pts) {
    if (pts.empty()) return;
    msg << "; " << name << ":";
    const std::size_t shown = std::min<std::size_t>(pts.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) msg << " (z=" << pts[i].x << ", Q=" << pts[i].y << ")";
    if (pts.size() > shown) msg << " ... (" << pts.size() - shown << " more)";
  };
  list("missing", missing);
  list("extra", extra);
  throw LatticeMismatchError(msg.str(), std::move(missing), std::move(extra));
}

void normalize_to_unit_max(TargetGrid& grid) {
  double peak = 0.0;
  for (const auto& p : grid.points) peak = std::max(peak, p.value);
  if (peak <= 0.0) {
    grid.scale = 1.0;
    return;
  }
  for (auto& p : grid.points) p.value /= peak;
  grid.scale *= peak;
}

void sort_points(std::vector<GridPoint>& points) {
  std::sort(points.begin(), points.end(), [](const GridPoint& a, const GridPoint& b) {
    return std::tie(a.z, a.q) < std::tie(b.z, b.q);
  });
}

TargetGrid make_lattice_grid(int n_qubits, const DomainBox& box, std::string label,
                             const std::function<double(ChebPoint)>& f) {
  box.validate();
  TargetGrid grid;
  grid.box = box;
  grid.n_qubits = n_qubits;
  grid.label = std::move(label);
  for (const auto& lp : training_lattice(make_grid(n_qubits))) {
    const auto pp = from_chebyshev_domain(lp, box);
    grid.points.push_back({pp.x, pp.y, f(lp)});
  }
  sort_points(grid.points);
  return grid;
}

}  // namespace qcpm
