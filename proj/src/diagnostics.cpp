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

#include "qcpm/diagnostics.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "qcpm/sampler.hpp"

namespace qcpm {
namespace {

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

std::string_view to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::kNonpurityVsEpoch:
      return "nonpurity_vs_epoch";
    case SeriesKind::kEntropyVsFf:
      return "entropy_vs_ff";
    case SeriesKind::kPurityVsZ:
      return "purity_vs_z";
    case SeriesKind::kMutualInfoVsZ:
      return "mutualinfo_vs_z";
  }
  return "?";
}

SeriesKind parse_series_kind(std::string_view text) {
  for (auto kind : {SeriesKind::kNonpurityVsEpoch, SeriesKind::kEntropyVsFf,
                    SeriesKind::kPurityVsZ, SeriesKind::kMutualInfoVsZ}) {
    if (text == to_string(kind)) return kind;
  }
  throw ValidationError("unknown series kind '" + std::string(text) + "'");
}

void DiagnosticSeries::add(double x, double y, std::string tag) {
  abscissa.push_back(x);
  ordinate.push_back(y);
  tags.push_back(std::move(tag));
}

std::optional<std::string> DiagnosticSeries::meta(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string params_hash(const QcpmParams& params, const Architecture& arch) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(arch.n_qubits));
  mix(static_cast<std::uint64_t>(arch.depth));
  mix(arch.use_correlation ? 1u : 0u);
  mix(arch.entangler == Entangler::kClosed ? 1u : 0u);
  for (double x : params.flatten()) mix(std::bit_cast<std::uint64_t>(x));
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::vector<std::pair<std::string, std::string>> model_metadata(const QcpmParams& params,
                                                                 const Architecture& arch) {
  return {{"params_hash", params_hash(params, arch)},
          {"n_qubits", std::to_string(arch.n_qubits)},
          {"depth", std::to_string(arch.depth)},
          {"use_correlation", arch.use_correlation ? "1" : "0"},
          {"entangler", std::string(to_string(arch.entangler))}};
}

}  // namespace

double nonpurity(const QcpmParams& params, const Architecture& arch) {
  // Without the correlation layer the registers never interact.
  if (!arch.use_correlation) return 0.0;
  const StateVector state = coefficient_state(params, arch);
  const auto rho = partial_trace(state, arch.z_qubits());
  return std::abs(1.0 - purity(rho));
}

DiagnosticSeries nonpurity_trace(const TrainRecord& record) {
  if (!record.has_nonpurity()) {
    throw ValidationError("record carries no nonpurity trace (train with diagnostics enabled)");
  }
  DiagnosticSeries series;
  series.kind = SeriesKind::kNonpurityVsEpoch;
  series.metadata = model_metadata(record.final_params, record.config.arch);
  series.metadata.emplace_back("label", record.label);
  series.metadata.emplace_back("learning_rate", format_number(record.best_learning_rate));
  series.metadata.emplace_back("init", std::string(to_string(record.config.init)));
  for (std::size_t e = 0; e < record.nonpurity.size(); ++e) {
    if (std::isnan(record.nonpurity[e])) continue;
    series.add(static_cast<double>(e + 1), record.nonpurity[e], "epoch");
  }
  return series;
}

DiagnosticSeries product_start_nonpurity_trace(TrainConfig config, const TargetGrid& data) {
  config.init = InitMode::kProduct;
  config.diagnostics_cadence = 1;
  return nonpurity_trace(train(config, data));
}

StateVector training_stage_state(const QcpmParams& params, const Architecture& arch,
                                 ChebPoint input, bool include_ansatze) {
  arch.validate();
  params.validate(arch);
  auto fu = feature_vector(input.u, arch.n_qubits);
  auto fv = feature_vector(input.v, arch.n_qubits);
  const RealStateVector zu(arch.n_qubits, std::move(fu.amplitudes));
  const RealStateVector qv(arch.n_qubits, std::move(fv.amplitudes));
  StateVector state = to_complex(tensor(zu, qv));
  state.normalize();
  if (arch.use_correlation) apply_correlation(state, arch.z_qubits(), arch.q_qubits());
  if (include_ansatze) {
    apply_hera(state, params.theta, arch.ansatz(), 0);
    apply_hera(state, params.vartheta, arch.ansatz(), arch.n_qubits);
  }
  return state;
}

std::string_view to_string(Register reg) { return reg == Register::kZ ? "Z" : "Q"; }

Register parse_register(std::string_view text) {
  if (text == "Z" || text == "z") return Register::kZ;
  if (text == "Q" || text == "q") return Register::kQ;
  throw ValidationError("unknown register '" + std::string(text) + "' (expected Z or Q)");
}

double half_register_entropy(const QcpmParams& params, const Architecture& arch, Register which,
                             std::optional<ChebPoint> training_input) {
  if (arch.n_qubits % 2 != 0) {
    throw ValidationError("half-register entropy needs an even register size, got N=" +
                          std::to_string(arch.n_qubits));
  }
  const StateVector state = training_input ? training_stage_state(params, arch, *training_input)
                                           : coefficient_state(params, arch);
  const int first = which == Register::kZ ? 0 : arch.n_qubits;
  return von_neumann_entropy(partial_trace(state, qubit_range(first, arch.n_qubits / 2)));
}

DiagnosticSeries entropy_table(std::span<const LabeledModel> models, Register which,
                               std::optional<ChebPoint> training_input) {
  DiagnosticSeries series;
  series.kind = SeriesKind::kEntropyVsFf;
  series.metadata.emplace_back("register", std::string(to_string(which)));
  series.metadata.emplace_back(
      "state", training_input ? "training_stage u=" + format_number(training_input->u) +
                                    " v=" + format_number(training_input->v)
                              : std::string("coefficient"));
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto& m = models[i];
    series.metadata.emplace_back("params_hash[" + std::to_string(i) + "]",
                                 params_hash(m.params, m.arch));
    series.add(static_cast<double>(i),
               half_register_entropy(m.params, m.arch, which, training_input),
               m.label.empty() ? "model" + std::to_string(i) : m.label);
  }
  return series;
}

std::string_view to_string(SweepQuantity quantity) {
  return quantity == SweepQuantity::kPurity ? "purity" : "mutual_information";
}

SweepQuantity parse_sweep_quantity(std::string_view text) {
  if (text == "purity") return SweepQuantity::kPurity;
  if (text == "mutual_information" || text == "mutualinfo") return SweepQuantity::kMutualInformation;
  throw ValidationError("unknown sweep quantity '" + std::string(text) + "'");
}

DiagnosticSeries z_sweep(const QcpmParams& params, const Architecture& arch,
                         SweepQuantity quantity, double v_fixed, int resolution,
                         bool include_ansatze) {
  if (!(std::abs(v_fixed) <= 1.0)) {
    throw DomainError("z_sweep: fixed v " + std::to_string(v_fixed) + " outside [-1, 1]");
  }
  if (resolution < 2) throw ValidationError("z_sweep: resolution must be at least 2");

  const auto z = arch.z_qubits();
  auto measure = [&](double u) {
    if (!arch.use_correlation) return quantity == SweepQuantity::kPurity ? 1.0 : 0.0;
    const StateVector state = training_stage_state(params, arch, {u, v_fixed}, include_ansatze);
    const auto rho = partial_trace(state, z);
    return quantity == SweepQuantity::kPurity ? purity(rho) : 2.0 * von_neumann_entropy(rho);
  };

  DiagnosticSeries series;
  series.kind = quantity == SweepQuantity::kPurity ? SeriesKind::kPurityVsZ
                                                   : SeriesKind::kMutualInfoVsZ;
  series.metadata = model_metadata(params, arch);
  series.metadata.emplace_back("v_fixed", format_number(v_fixed));
  series.metadata.emplace_back("include_ansatze", include_ansatze ? "1" : "0");
  series.metadata.emplace_back("resolution", std::to_string(resolution));
  for (int i = 0; i < resolution; ++i) {
    const double u = i + 1 == resolution ? 1.0 : -1.0 + 2.0 * i / (resolution - 1);
    series.add(u, measure(u), "curve");
  }
  const ChebGrid grid = make_grid(arch.n_qubits);
  for (double u : grid.nodes) series.add(u, measure(u), "node");
  for (double u : grid.half_nodes) series.add(u, measure(u), "half_node");
  return series;
}

}  // namespace qcpm
