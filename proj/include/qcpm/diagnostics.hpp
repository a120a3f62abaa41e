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

// Entanglement diagnostics of trained models: nonpurity of the Z register,
// internal (half-register) entropies, and purity / mutual-information sweeps
// along z for the training-stage circuit.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcpm/model.hpp"
#include "qcpm/simulator.hpp"

namespace qcpm {

enum class SeriesKind { kNonpurityVsEpoch, kEntropyVsFf, kPurityVsZ, kMutualInfoVsZ };

std::string_view to_string(SeriesKind kind);
SeriesKind parse_series_kind(std::string_view text);

struct DiagnosticSeries {
  SeriesKind kind = SeriesKind::kNonpurityVsEpoch;
  std::vector<double> abscissa;
  std::vector<double> ordinate;
  std::vector<std::string> tags;  // per row: curve / node / half_node / epoch / model label
  std::vector<std::pair<std::string, std::string>> metadata;

  std::size_t size() const { return abscissa.size(); }
  void add(double x, double y, std::string tag);
  /// First metadata value for `key`, if any.
  std::optional<std::string> meta(std::string_view key) const;
};

/// Stable 64-bit FNV-1a digest of the architecture and every parameter bit.
std::string params_hash(const QcpmParams& params, const Architecture& arch);

/// |1 - Tr(rho_Z^2)| on the sampling-stage coefficient state.
double nonpurity(const QcpmParams& params, const Architecture& arch);

/// Per-epoch nonpurity stored in a record trained with diagnostics enabled.
DiagnosticSeries nonpurity_trace(const TrainRecord& record);

/// Trains `config` from a product-state start (vartheta = 0, so the
/// correlation layer is initially inert) with a nonpurity trace every epoch.
DiagnosticSeries product_start_nonpurity_trace(TrainConfig config, const TargetGrid& data);

/// (V x V) C (tau(u) x tau(v)) with unit-normalized feature vectors. Without
/// ansatze only the feature maps and the correlation layer are applied.
StateVector training_stage_state(const QcpmParams& params, const Architecture& arch,
                                 ChebPoint input, bool include_ansatze = true);

enum class Register { kZ, kQ };

std::string_view to_string(Register reg);
Register parse_register(std::string_view text);

/// Entropy in bits of the first N/2 qubits of one register. With an input
/// point the training-stage state is used, otherwise the coefficient state.
/// Throws ValidationError for odd N.
double half_register_entropy(const QcpmParams& params, const Architecture& arch, Register which,
                             std::optional<ChebPoint> training_input = std::nullopt);

struct LabeledModel {
  std::string label;
  QcpmParams params;
  Architecture arch;
};

/// Half-register entropy of each model, abscissa = model index, tag = label.
DiagnosticSeries entropy_table(std::span<const LabeledModel> models, Register which,
                               std::optional<ChebPoint> training_input = std::nullopt);

enum class SweepQuantity { kPurity, kMutualInformation };

std::string_view to_string(SweepQuantity quantity);
SweepQuantity parse_sweep_quantity(std::string_view text);

/// Purity of Z, or I(Z:Q) = 2 S(rho_Z), of the training-stage state along u
/// at fixed v: `resolution` equispaced points on [-1, 1] (tag "curve"),
/// followed by the nodes ("node") and half-nodes ("half_node").
DiagnosticSeries z_sweep(const QcpmParams& params, const Architecture& arch,
                         SweepQuantity quantity, double v_fixed, int resolution,
                         bool include_ansatze = true);

}  // namespace qcpm
