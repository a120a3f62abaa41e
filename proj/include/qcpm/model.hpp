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

// The explicit bivariate Chebyshev model: a correlation layer and two
// real-amplitude ansatze acting on a pair of Chebyshev feature registers. The
// zero-projection amplitude A(u, v) is a degree-(2^N - 1) Chebyshev expansion
// in each variable with coefficients read off the adjoint circuit, and the
// trained density is alpha * A^2 + beta.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcpm/chebyshev.hpp"
#include "qcpm/simulator.hpp"
#include "qcpm/target_grid.hpp"

namespace qcpm {

struct Architecture {
  int n_qubits = 4;  // per register
  int depth = 3;
  bool use_correlation = true;
  Entangler entangler = Entangler::kClosed;

  AnsatzSpec ansatz() const { return {n_qubits, depth, entangler}; }
  std::size_t angles_per_register() const { return ansatz().parameter_count(); }
  /// 2 N (d + 1) angles plus alpha and beta.
  std::size_t parameter_count() const { return 2 * angles_per_register() + 2; }
  std::size_t register_dim() const { return std::size_t{1} << n_qubits; }

  std::vector<int> z_qubits() const { return qubit_range(0, n_qubits); }
  std::vector<int> q_qubits() const { return qubit_range(n_qubits, n_qubits); }

  void validate() const;
};

struct QcpmParams {
  std::vector<double> theta;     // Z-register ansatz
  std::vector<double> vartheta;  // Q-register ansatz
  double alpha = 1.0;
  double beta = 0.0;

  /// Layout: theta, vartheta, alpha, beta.
  std::vector<double> flatten() const;
  static QcpmParams unflatten(std::span<const double> flat, const Architecture& arch);

  void validate(const Architecture& arch) const;
};

/// M(k, l) = <0...0| (V(theta) x V(vartheta)) C |k>|l>, row k over the Z
/// register, column l over the Q register.
struct CoefficientMatrix {
  int n_qubits = 0;
  std::size_t dim = 0;
  std::vector<double> entries;  // row-major dim x dim

  double at(std::size_t k, std::size_t l) const { return entries[k * dim + l]; }
  double squared_sum() const;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// A(u, v) by simulating the full training circuit on 2N qubits.
double model_amplitude(ChebPoint point, const QcpmParams& params, const Architecture& arch);

/// alpha * A(u, v)^2 + beta.
double model_value(ChebPoint point, const QcpmParams& params, const Architecture& arch);

/// C^dagger (V^dagger(theta) x V^dagger(vartheta)) |0...0> on 2N qubits.
StateVector coefficient_circuit_state(const QcpmParams& params, const Architecture& arch);

CoefficientMatrix extract_coefficients(const QcpmParams& params, const Architecture& arch);

/// Classical evaluation sum_kl w_k w_l M_kl T_k(u) T_l(v); no circuits.
double oracle_eval(const CoefficientMatrix& coefficients, ChebPoint point);

/// V^dagger(angles)|0> on a single N-qubit register.
RealStateVector register_state(std::span<const double> angles, const AnsatzSpec& spec);

/// Coefficient vector assembled from the two register states; equal to
/// coefficient_circuit_state for real parameters.
std::vector<double> coefficients_from_registers(const RealStateVector& z_register,
                                                const RealStateVector& q_register,
                                                const Architecture& arch);

/// |1 - Tr(rho_Z^2)| of a coefficient vector viewed as a D x D matrix.
double coefficient_nonpurity(std::span<const double> coefficients, std::size_t dim);

/// Evaluates A on a fixed set of points through the coefficient matrix.
/// Feature vectors are cached per distinct coordinate, so lattice inputs cost
/// O(D^2 * distinct + D * points) per call.
class BatchEvaluator {
 public:
  BatchEvaluator(int n_qubits, std::span<const ChebPoint> points);

  std::size_t size() const { return u_index_.size(); }
  int n_qubits() const { return n_qubits_; }

  /// out[p] = sum_kl coeffs[k D + l] tau_k(u_p) tau_l(v_p).
  void amplitudes(std::span<const double> coeffs, std::span<double> out) const;

  /// out[k D + l] = sum_p weights[p] tau_k(u_p) tau_l(v_p).
  void accumulate(std::span<const double> weights, std::span<double> out) const;

 private:
  int n_qubits_;
  std::size_t dim_;
  std::vector<double> u_features_;  // distinct u x D
  std::vector<double> v_features_;  // distinct v x D
  std::size_t n_u_ = 0;
  std::size_t n_v_ = 0;
  std::vector<std::size_t> u_index_;
  std::vector<std::size_t> v_index_;
};

double mse_loss(const QcpmParams& params, const Architecture& arch,
                std::span<const ChebPoint> points, std::span<const double> targets);

/// Gradient of mse_loss over theta, vartheta, alpha, beta (flatten() layout).
/// Angle components use the two-term parameter-shift rule on each register
/// state, contracted with the loss residuals.
std::vector<double> gradient(const QcpmParams& params, const Architecture& arch,
                             std::span<const ChebPoint> points, std::span<const double> targets);

/// 1 - SS_res / SS_tot; nullopt when the targets have zero variance.
std::optional<double> r_squared(std::span<const double> predictions,
                                std::span<const double> targets);

// ---------------------------------------------------------------------------
// Optimization
// ---------------------------------------------------------------------------

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long long step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected ADAM update of `params` in place.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grad,
               double learning_rate, const AdamOptions& options = {});

enum class AlphaBetaMode {
  kAdam,   // alpha, beta updated by ADAM with the angles
  kRefit,  // closed-form least-squares refit of alpha, beta every epoch
};

enum class InitMode {
  kRandom,   // every angle uniform in [-pi, pi]
  kProduct,  // theta random, vartheta = 0: the correlation layer starts inert
};

std::string_view to_string(AlphaBetaMode mode);
AlphaBetaMode parse_alpha_beta_mode(std::string_view text);
std::string_view to_string(InitMode mode);
InitMode parse_init_mode(std::string_view text);

/// 0.1, 0.2, ..., 1.0
std::vector<double> default_learning_rates();

struct TrainConfig {
  Architecture arch;
  int epochs = 10000;
  std::vector<double> learning_rates = default_learning_rates();
  AdamOptions adam;
  std::uint64_t seed = 0;
  int diagnostics_cadence = 0;  // 0: no nonpurity trace; k: every k-th epoch
  AlphaBetaMode alpha_beta = AlphaBetaMode::kAdam;
  InitMode init = InitMode::kRandom;

  void validate() const;
};

QcpmParams initial_params(const TrainConfig& config);

struct BranchResult {
  double learning_rate = 0.0;
  bool ok = true;
  double final_loss = 0.0;
  std::optional<double> final_r2;
  std::string message;
};

struct TrainRecord {
  TrainConfig config;
  std::string label;
  double target_scale = 1.0;
  std::vector<double> loss;       // per epoch, before that epoch's update
  std::vector<double> r2;         // NaN when the targets are degenerate
  std::vector<double> nonpurity;  // NaN where not computed
  QcpmParams final_params;
  double best_learning_rate = 0.0;
  double final_loss = 0.0;
  std::optional<double> final_r2;  // nullopt: degenerate targets
  std::vector<BranchResult> branches;

  bool degenerate() const { return !final_r2.has_value(); }
  bool has_nonpurity() const;
};

/// Runs config.epochs ADAM iterations per learning rate from a shared seeded
/// initialization and keeps the branch with the best final R^2 (lowest loss
/// for degenerate targets). Branches run in parallel.
TrainRecord train(const TrainConfig& config, const TargetGrid& data);

/// Predictions of the model on the grid's points.
std::vector<double> predict(const QcpmParams& params, const Architecture& arch,
                            std::span<const ChebPoint> points);

}  // namespace qcpm
