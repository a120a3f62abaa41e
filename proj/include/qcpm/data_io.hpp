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

// Text formats. Every file is UTF-8 with `# key: value` header lines, one
// comma-separated column-name line, then comma-separated rows. Numbers are
// written with 17 significant digits so re-reading is exact.
//
// Grid files (the contract with the dataset exporter) carry the header keys
// label, z_range, q_range, q_axis and n_qubits, then `z,Q,value` rows in
// ascending (z, Q).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcpm/diagnostics.hpp"
#include "qcpm/model.hpp"
#include "qcpm/sampler.hpp"
#include "qcpm/target_grid.hpp"

namespace qcpm {

// ---------------------------------------------------------------------------
// Target grids
// ---------------------------------------------------------------------------

/// Parses, validates lattice coverage and non-negativity, and normalizes to
/// max 1. `expected_n` / `expected_box` are checked against the header when
/// given.
TargetGrid read_grid(const std::string& path, std::optional<int> expected_n = std::nullopt,
                     const std::optional<DomainBox>& expected_box = std::nullopt);

/// Writes values in original units (value * scale).
void write_grid(const TargetGrid& grid, const std::string& path);

enum class SynthKind { kTeacherStudent, kGaussian2d, kSeparableBeta };

std::string_view to_string(SynthKind kind);
SynthKind parse_synth_kind(std::string_view text);

struct SynthOptions {
  Architecture arch;  // lattice size, and the teacher circuit for teacher_student
  DomainBox box;
  // gaussian_2d, in Chebyshev coordinates
  double center_u = 0.0;
  double center_v = 0.0;
  double sigma_u = 0.45;
  double sigma_v = 0.45;
  double correlation = 0.7;
  // separable_beta: z^a (1 - z)^b (1 + log10 Q)^{-c}
  double beta_a = -0.5;
  double beta_b = 2.0;
  double q_power = 1.0;
};

/// Synthetic targets on the training lattice, normalized to max 1. Only
/// teacher_student draws from `seed`, using a stream separate from the
/// training initialization.
TargetGrid synth_target(SynthKind kind, const SynthOptions& options, std::uint64_t seed);

/// Teacher parameters used by synth_target(kTeacherStudent, ...).
QcpmParams teacher_params(const Architecture& arch, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Trained models
// ---------------------------------------------------------------------------

struct TrainedModel {
  std::string label;
  Architecture arch;
  QcpmParams params;
  DomainBox box;
  double target_scale = 1.0;
};

void write_model(const TrainedModel& model, const std::string& path);
TrainedModel read_model(const std::string& path);

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

/// Train record: config header, `epoch,loss,r2,nonpurity` rows, and a
/// trailing `#` summary block with the chosen branch and final parameters.
void write_results(const TrainRecord& record, const std::string& path);
TrainRecord read_record(const std::string& path);

struct HistogramFile {
  int n_qubits = 0;
  int extension = 0;
  std::uint64_t shots = 0;  // 0 for exact probabilities
  std::uint64_t seed = 0;
  bool exact = false;
  DomainBox box;
  std::vector<HistogramRow> rows;
};

/// Columns z,Q,count,probability.
void write_results(const SampleHistogram& hist, const DomainBox& box, const std::string& path);
/// Columns z,Q,probability.
void write_results(const ProbabilityTable& dist, const DomainBox& box, const std::string& path);
HistogramFile read_histogram(const std::string& path);

/// Columns kind,abscissa,ordinate,tag.
void write_results(const DiagnosticSeries& series, const std::string& path);
DiagnosticSeries read_series(const std::string& path);

/// Shortest text that reads back to the same double.
std::string format_double(double x);

}  // namespace qcpm
