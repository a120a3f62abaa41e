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

#include "qcpm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

#include <Eigen/Dense>

namespace qcpm {

double ProbabilityTable::total() const {
  double sum = 0.0;
  for (double p : probabilities) sum += p;
  return sum;
}

StateVector coefficient_state(const QcpmParams& params, const Architecture& arch) {
  return coefficient_circuit_state(params, arch);
}

ProbabilityTable exact_distribution(const QcpmParams& params, const Architecture& arch,
                                    int extension) {
  if (extension < 0) throw SizeError("extension qubit count must be non-negative");
  if (arch.n_qubits + extension > kMaxSamplingQubits) {
    throw SizeError("sampling register of " + std::to_string(arch.n_qubits + extension) +
                    " qubits exceeds the limit of " + std::to_string(kMaxSamplingQubits));
  }
  const StateVector state = coefficient_state(params, arch);
  const auto dim = static_cast<Eigen::Index>(arch.register_dim());
  Eigen::MatrixXd coeffs(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (Eigen::Index l = 0; l < dim; ++l) {
      coeffs(k, l) = state[static_cast<std::size_t>(k * dim + l)].real();
    }
  }

  const ChebTransform transform = cheb_transform(arch.n_qubits + extension);
  const auto side = static_cast<Eigen::Index>(transform.dim());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> full(
      transform.data().data(), side, side);
  // Degrees >= 2^N only ever multiply zero-padded amplitudes.
  const Eigen::MatrixXd low = full.leftCols(dim);
  const Eigen::MatrixXd amps = low * coeffs * low.transpose();

  ProbabilityTable table;
  table.n_qubits = arch.n_qubits;
  table.extension = extension;
  table.side = static_cast<std::size_t>(side);
  table.probabilities.resize(table.side * table.side);
  for (Eigen::Index j = 0; j < side; ++j) {
    for (Eigen::Index jp = 0; jp < side; ++jp) {
      const double a = amps(j, jp);
      table.probabilities[static_cast<std::size_t>(j * side + jp)] = a * a;
    }
  }
  return table;
}

SampleHistogram draw_samples(const ProbabilityTable& dist, std::uint64_t shots,
                             std::uint64_t seed) {
  if (shots < 1) throw ValidationError("draw_samples: need at least one shot");
  if (dist.probabilities.size() != dist.side * dist.side || dist.side == 0) {
    throw ValidationError("draw_samples: malformed probability table");
  }
  for (double p : dist.probabilities) {
    if (!(p >= 0.0)) throw ValidationError("draw_samples: negative or NaN probability");
  }
  const double total = dist.total();
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("draw_samples: distribution sums to " + std::to_string(total));
  }

  SampleHistogram hist;
  hist.n_qubits = dist.n_qubits;
  hist.extension = dist.extension;
  hist.side = dist.side;
  hist.shots = shots;
  hist.seed = seed;
  hist.counts.assign(dist.probabilities.size(), 0);
  hist.nodes = make_grid(dist.n_qubits + dist.extension).nodes;

  // Conditional binomials: bin i takes Binomial(remaining, p_i / remaining mass).
  std::mt19937_64 rng(seed);
  std::uint64_t remaining = shots;
  double mass = total;
  const std::size_t last = dist.probabilities.size() - 1;
  for (std::size_t i = 0; i < last && remaining > 0; ++i) {
    const double p = dist.probabilities[i];
    if (p <= 0.0) continue;
    const double ratio = mass > 0.0 ? std::clamp(p / mass, 0.0, 1.0) : 1.0;
    std::binomial_distribution<std::uint64_t> binomial(remaining, ratio);
    const std::uint64_t k = binomial(rng);
    hist.counts[i] = k;
    remaining -= k;
    mass -= p;
  }
  hist.counts[last] += remaining;
  return hist;
}

namespace {

template <typename CellFn>
std::vector<HistogramRow> lattice_rows(int n_total, std::size_t side, const DomainBox& box,
                                       CellFn&& cell) {
  const auto nodes = make_grid(n_total).nodes;
  std::vector<HistogramRow> rows;
  rows.reserve(side * side);
  for (std::size_t j = 0; j < side; ++j) {
    for (std::size_t jp = 0; jp < side; ++jp) {
      const auto p = from_chebyshev_domain({nodes[j], nodes[jp]}, box);
      HistogramRow row{p.x, p.y, 0, 0.0};
      cell(j, jp, row);
      rows.push_back(row);
    }
  }
  std::sort(rows.begin(), rows.end(), [](const HistogramRow& a, const HistogramRow& b) {
    return std::tie(a.z, a.q) < std::tie(b.z, b.q);
  });
  return rows;
}

}  // namespace

std::vector<HistogramRow> to_problem_domain(const SampleHistogram& hist, const DomainBox& box) {
  const double shots = static_cast<double>(hist.shots);
  return lattice_rows(hist.n_qubits + hist.extension, hist.side, box,
                      [&](std::size_t j, std::size_t jp, HistogramRow& row) {
                        row.count = hist.count(j, jp);
                        row.probability = static_cast<double>(row.count) / shots;
                      });
}

std::vector<HistogramRow> to_problem_domain(const ProbabilityTable& dist, const DomainBox& box) {
  return lattice_rows(dist.n_qubits + dist.extension, dist.side, box,
                      [&](std::size_t j, std::size_t jp, HistogramRow& row) {
                        row.probability = dist.at(j, jp);
                      });
}

double total_variation(const SampleHistogram& hist, const ProbabilityTable& dist) {
  if (hist.counts.size() != dist.probabilities.size()) {
    throw ValidationError("total_variation: histogram and distribution shapes differ");
  }
  const double shots = static_cast<double>(hist.shots);
  double sum = 0.0;
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    sum += std::abs(static_cast<double>(hist.counts[i]) / shots - dist.probabilities[i]);
  }
  return 0.5 * sum;
}

}  // namespace qcpm
