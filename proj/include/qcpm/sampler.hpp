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

// Generative sampling from a trained model. The coefficient state is
// zero-padded into registers of N + S qubits (extension bits most
// significant, so new degrees carry zero amplitude) and mapped to the fine
// Chebyshev node basis by the cosine transform of each register.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qcpm/chebyshev.hpp"
#include "qcpm/model.hpp"

namespace qcpm {

inline constexpr int kMaxSamplingQubits = 10;  // N + S per register

struct ProbabilityTable {
  int n_qubits = 0;   // trained register size N
  int extension = 0;  // S
  std::size_t side = 0;
  std::vector<double> probabilities;  // row-major side x side, (j, j')

  double at(std::size_t j, std::size_t jp) const { return probabilities[j * side + jp]; }
  double total() const;
};

/// C^dagger (V^dagger(theta) x V^dagger(vartheta)) |0...0>; amplitude
/// k 2^N + l equals M(k, l).
StateVector coefficient_state(const QcpmParams& params, const Architecture& arch);

/// Born probabilities on the 2^{N+S} x 2^{N+S} fine node lattice:
/// P(j, j') = 2^{-2S} A(x'_j, x'_j')^2. Throws SizeError if N + S > 10.
ProbabilityTable exact_distribution(const QcpmParams& params, const Architecture& arch,
                                    int extension);

struct SampleHistogram {
  int n_qubits = 0;
  int extension = 0;
  std::size_t side = 0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> counts;  // row-major side x side
  std::vector<double> nodes;          // fine Chebyshev nodes, shared by both axes

  std::uint64_t count(std::size_t j, std::size_t jp) const { return counts[j * side + jp]; }
};

/// Multinomial draw of `shots` outcomes, deterministic in `seed`.
SampleHistogram draw_samples(const ProbabilityTable& dist, std::uint64_t shots,
                             std::uint64_t seed);

struct HistogramRow {
  double z = 0.0;
  double q = 0.0;
  std::uint64_t count = 0;
  double probability = 0.0;
};

/// Rows for every lattice cell, sorted ascending in (z, Q); probability is
/// count / shots.
std::vector<HistogramRow> to_problem_domain(const SampleHistogram& hist, const DomainBox& box);

/// Exact probabilities on the same rows (count left at 0).
std::vector<HistogramRow> to_problem_domain(const ProbabilityTable& dist, const DomainBox& box);

/// 1/2 sum |count / shots - P|.
double total_variation(const SampleHistogram& hist, const ProbabilityTable& dist);

}  // namespace qcpm
