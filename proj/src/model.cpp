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

#include "qcpm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "qcpm/parallel.hpp"

namespace qcpm {

void Architecture::validate() const {
  if (n_qubits < 1 || n_qubits > kMaxQubitsPerRegister) {
    throw SizeError("qubits per register must lie in [1, " +
                    std::to_string(kMaxQubitsPerRegister) + "], got " +
                    std::to_string(n_qubits));
  }
  if (depth < 0) throw SizeError("ansatz depth must be non-negative");
}

std::vector<double> QcpmParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(theta.size() + vartheta.size() + 2);
  flat.insert(flat.end(), theta.begin(), theta.end());
  flat.insert(flat.end(), vartheta.begin(), vartheta.end());
  flat.push_back(alpha);
  flat.push_back(beta);
  return flat;
}

QcpmParams QcpmParams::unflatten(std::span<const double> flat, const Architecture& arch) {
  if (flat.size() != arch.parameter_count()) {
    throw SizeError("expected " + std::to_string(arch.parameter_count()) +
                    " model parameters, got " + std::to_string(flat.size()));
  }
  const std::size_t n = arch.angles_per_register();
  QcpmParams params;
  params.theta.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(n));
  params.vartheta.assign(flat.begin() + static_cast<std::ptrdiff_t>(n),
                         flat.begin() + static_cast<std::ptrdiff_t>(2 * n));
  params.alpha = flat[2 * n];
  params.beta = flat[2 * n + 1];
  return params;
}

void QcpmParams::validate(const Architecture& arch) const {
  const std::size_t n = arch.angles_per_register();
  if (theta.size() != n || vartheta.size() != n) {
    throw SizeError("ansatz with N=" + std::to_string(arch.n_qubits) + ", d=" +
                    std::to_string(arch.depth) + " needs " + std::to_string(n) +
                    " angles per register (got " + std::to_string(theta.size()) + " and " +
                    std::to_string(vartheta.size()) + ")");
  }
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw ValidationError("alpha and beta must be finite");
  }
}

double CoefficientMatrix::squared_sum() const {
  double sum = 0.0;
  for (double m : entries) sum += m * m;
  return sum;
}

// ---------------------------------------------------------------------------
// Circuit evaluation
// ---------------------------------------------------------------------------

double model_amplitude(ChebPoint point, const QcpmParams& params, const Architecture& arch) {
  arch.validate();
  params.validate(arch);
  const auto fu = feature_vector(point.u, arch.n_qubits);
  const auto fv = feature_vector(point.v, arch.n_qubits);
  const std::size_t dim = arch.register_dim();
  std::vector<Amplitude> amps(dim * dim);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t l = 0; l < dim; ++l) amps[k * dim + l] = fu.amplitudes[k] * fv.amplitudes[l];
  }
  StateVector state(2 * arch.n_qubits, std::move(amps));
  const auto z = arch.z_qubits();
  const auto q = arch.q_qubits();
  if (arch.use_correlation) apply_correlation(state, z, q);
  apply_hera(state, params.theta, arch.ansatz(), 0);
  apply_hera(state, params.vartheta, arch.ansatz(), arch.n_qubits);
  return overlap_with_zero(state).real();
}

double model_value(ChebPoint point, const QcpmParams& params, const Architecture& arch) {
  const double a = model_amplitude(point, params, arch);
  return params.alpha * a * a + params.beta;
}

StateVector coefficient_circuit_state(const QcpmParams& params, const Architecture& arch) {
  arch.validate();
  params.validate(arch);
  StateVector state(2 * arch.n_qubits);
  apply_hera(state, params.theta, arch.ansatz(), 0, /*adjoint=*/true);
  apply_hera(state, params.vartheta, arch.ansatz(), arch.n_qubits, /*adjoint=*/true);
  if (arch.use_correlation) {
    apply_correlation(state, arch.z_qubits(), arch.q_qubits(), /*adjoint=*/true);
  }
  return state;
}

CoefficientMatrix extract_coefficients(const QcpmParams& params, const Architecture& arch) {
  const StateVector state = coefficient_circuit_state(params, arch);
  CoefficientMatrix m;
  m.n_qubits = arch.n_qubits;
  m.dim = arch.register_dim();
  m.entries.resize(state.dim());
  // Every gate is real, so the amplitudes are real up to rounding.
  for (std::size_t i = 0; i < state.dim(); ++i) m.entries[i] = state[i].real();
  return m;
}

double oracle_eval(const CoefficientMatrix& coefficients, ChebPoint point) {
  const std::size_t dim = coefficients.dim;
  auto tu = chebyshev_t_all(dim, point.u);
  auto tv = chebyshev_t_all(dim, point.v);
  for (std::size_t k = 0; k < dim; ++k) {
    const double w = feature_weight(k, coefficients.n_qubits);
    tu[k] *= w;
    tv[k] *= w;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    double row = 0.0;
    for (std::size_t l = 0; l < dim; ++l) row += coefficients.at(k, l) * tv[l];
    sum += tu[k] * row;
  }
  return sum;
}

RealStateVector register_state(std::span<const double> angles, const AnsatzSpec& spec) {
  RealStateVector state(spec.n_qubits);
  apply_hera(state, angles, spec, 0, /*adjoint=*/true);
  return state;
}

std::vector<double> coefficients_from_registers(const RealStateVector& z_register,
                                                const RealStateVector& q_register,
                                                const Architecture& arch) {
  RealStateVector joint = tensor(z_register, q_register);
  if (arch.use_correlation) {
    apply_correlation(joint, arch.z_qubits(), arch.q_qubits(), /*adjoint=*/true);
  }
  return {joint.amplitudes().begin(), joint.amplitudes().end()};
}

double coefficient_nonpurity(std::span<const double> coefficients, std::size_t dim) {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> c(
      coefficients.data(), static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const double norm2 = c.squaredNorm();
  const Eigen::MatrixXd rho = (c * c.transpose()) / norm2;
  return std::abs(1.0 - rho.squaredNorm());
}

// ---------------------------------------------------------------------------
// Batched evaluation
// ---------------------------------------------------------------------------

BatchEvaluator::BatchEvaluator(int n_qubits, std::span<const ChebPoint> points)
    : n_qubits_(n_qubits), dim_(std::size_t{1} << n_qubits) {
  std::map<double, std::size_t> us;
  std::map<double, std::size_t> vs;
  u_index_.reserve(points.size());
  v_index_.reserve(points.size());
  for (const auto& p : points) {
    auto [iu, new_u] = us.try_emplace(p.u, us.size());
    auto [iv, new_v] = vs.try_emplace(p.v, vs.size());
    if (new_u) {
      const auto f = feature_vector(p.u, n_qubits);
      u_features_.insert(u_features_.end(), f.amplitudes.begin(), f.amplitudes.end());
    }
    if (new_v) {
      const auto f = feature_vector(p.v, n_qubits);
      v_features_.insert(v_features_.end(), f.amplitudes.begin(), f.amplitudes.end());
    }
    u_index_.push_back(iu->second);
    v_index_.push_back(iv->second);
  }
  n_u_ = us.size();
  n_v_ = vs.size();
}

void BatchEvaluator::amplitudes(std::span<const double> coeffs, std::span<double> out) const {
  // w[j][k] = sum_l coeffs[k][l] tau_l(v_j)
  std::vector<double> w(n_v_ * dim_, 0.0);
  for (std::size_t j = 0; j < n_v_; ++j) {
    const double* fv = v_features_.data() + j * dim_;
    double* wj = w.data() + j * dim_;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double* row = coeffs.data() + k * dim_;
      double acc = 0.0;
      for (std::size_t l = 0; l < dim_; ++l) acc += row[l] * fv[l];
      wj[k] = acc;
    }
  }
  for (std::size_t p = 0; p < u_index_.size(); ++p) {
    const double* fu = u_features_.data() + u_index_[p] * dim_;
    const double* wj = w.data() + v_index_[p] * dim_;
    double acc = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) acc += fu[k] * wj[k];
    out[p] = acc;
  }
}

void BatchEvaluator::accumulate(std::span<const double> weights, std::span<double> out) const {
  std::vector<double> y(n_u_ * n_v_, 0.0);
  for (std::size_t p = 0; p < u_index_.size(); ++p) y[u_index_[p] * n_v_ + v_index_[p]] += weights[p];
  // t[i][l] = sum_j y[i][j] tau_l(v_j)
  std::vector<double> t(n_u_ * dim_, 0.0);
  for (std::size_t i = 0; i < n_u_; ++i) {
    double* ti = t.data() + i * dim_;
    for (std::size_t j = 0; j < n_v_; ++j) {
      const double yij = y[i * n_v_ + j];
      if (yij == 0.0) continue;
      const double* fv = v_features_.data() + j * dim_;
      for (std::size_t l = 0; l < dim_; ++l) ti[l] += yij * fv[l];
    }
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < n_u_; ++i) {
    const double* fu = u_features_.data() + i * dim_;
    const double* ti = t.data() + i * dim_;
    for (std::size_t k = 0; k < dim_; ++k) {
      double* row = out.data() + k * dim_;
      const double f = fu[k];
      for (std::size_t l = 0; l < dim_; ++l) row[l] += f * ti[l];
    }
  }
}

// ---------------------------------------------------------------------------
// Loss and gradient
// ---------------------------------------------------------------------------

namespace {

struct Evaluation {
  RealStateVector z_register{1};
  RealStateVector q_register{1};
  std::vector<double> coefficients;
  std::vector<double> amplitudes;
  std::vector<double> predictions;
  double loss = 0.0;
};

void check_batch(std::span<const ChebPoint> points, std::span<const double> targets) {
  if (points.empty()) throw ValidationError("no training points");
  if (points.size() != targets.size()) {
    throw ValidationError("point/target length mismatch (" + std::to_string(points.size()) +
                          " vs " + std::to_string(targets.size()) + ")");
  }
}

// Least-squares alpha, beta for targets ~ alpha * E + beta.
std::pair<double, double> refit_alpha_beta(std::span<const double> amplitudes,
                                           std::span<const double> targets) {
  const double n = static_cast<double>(targets.size());
  double se = 0.0, see = 0.0, st = 0.0, set = 0.0;
  for (std::size_t p = 0; p < targets.size(); ++p) {
    const double e = amplitudes[p] * amplitudes[p];
    se += e;
    see += e * e;
    st += targets[p];
    set += e * targets[p];
  }
  const double det = n * see - se * se;
  if (std::abs(det) <= 1e-14 * n * see) return {0.0, st / n};
  return {(n * set - se * st) / det, (see * st - se * set) / det};
}

Evaluation evaluate(QcpmParams& params, const Architecture& arch, const BatchEvaluator& batch,
                    std::span<const double> targets, bool refit) {
  Evaluation ev;
  const auto spec = arch.ansatz();
  ev.z_register = register_state(params.theta, spec);
  ev.q_register = register_state(params.vartheta, spec);
  ev.coefficients = coefficients_from_registers(ev.z_register, ev.q_register, arch);
  ev.amplitudes.resize(batch.size());
  batch.amplitudes(ev.coefficients, ev.amplitudes);
  if (refit) std::tie(params.alpha, params.beta) = refit_alpha_beta(ev.amplitudes, targets);
  ev.predictions.resize(batch.size());
  double sum = 0.0;
  for (std::size_t p = 0; p < batch.size(); ++p) {
    const double a = ev.amplitudes[p];
    ev.predictions[p] = params.alpha * a * a + params.beta;
    const double r = ev.predictions[p] - targets[p];
    sum += r * r;
  }
  ev.loss = sum / static_cast<double>(batch.size());
  return ev;
}

// d/d(angle_i) of V^dagger(angles)|0> by the two-term shift rule. Each angle
// enters one R_Y gate, so the state is a cos(x/2) + b sin(x/2) in it and
// [psi(x + pi/2) - psi(x - pi/2)] / (2 sqrt 2) is exact.
std::vector<double> shifted_register_derivative(std::vector<double>& angles, std::size_t i,
                                                const AnsatzSpec& spec) {
  const double saved = angles[i];
  angles[i] = saved + std::numbers::pi / 2;
  const RealStateVector plus = register_state(angles, spec);
  angles[i] = saved - std::numbers::pi / 2;
  const RealStateVector minus = register_state(angles, spec);
  angles[i] = saved;
  const double scale = 1.0 / (2.0 * std::numbers::sqrt2);
  std::vector<double> d(plus.dim());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = scale * (plus[k] - minus[k]);
  return d;
}

std::vector<double> gradient_from(const QcpmParams& params, const Architecture& arch,
                                  const BatchEvaluator& batch, std::span<const double> targets,
                                  const Evaluation& ev) {
  const std::size_t n_points = batch.size();
  const double inv_n = 1.0 / static_cast<double>(n_points);
  std::vector<double> weights(n_points);
  double grad_alpha = 0.0;
  double grad_beta = 0.0;
  for (std::size_t p = 0; p < n_points; ++p) {
    const double r = ev.predictions[p] - targets[p];
    const double a = ev.amplitudes[p];
    weights[p] = 4.0 * params.alpha * r * a * inv_n;
    grad_alpha += 2.0 * r * a * a * inv_n;
    grad_beta += 2.0 * r * inv_n;
  }

  // dL/d(angle) = <C G, dz x q> with G = sum_p weights_p tau(u_p) x tau(v_p):
  // the correlation layer moves to the residual side of the inner product.
  const std::size_t dim = arch.register_dim();
  std::vector<double> g(dim * dim);
  batch.accumulate(weights, g);
  RealStateVector h(2 * arch.n_qubits, std::move(g));
  if (arch.use_correlation) apply_correlation(h, arch.z_qubits(), arch.q_qubits());

  std::vector<double> h_q(dim, 0.0);  // H . q_register
  std::vector<double> z_h(dim, 0.0);  // z_register^T . H
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t l = 0; l < dim; ++l) {
      const double hkl = h[k * dim + l];
      h_q[k] += hkl * ev.q_register[l];
      z_h[l] += ev.z_register[k] * hkl;
    }
  }

  const auto spec = arch.ansatz();
  const std::size_t n_angles = arch.angles_per_register();
  std::vector<double> grad(arch.parameter_count(), 0.0);
  std::vector<double> theta = params.theta;
  std::vector<double> vartheta = params.vartheta;
  for (std::size_t i = 0; i < n_angles; ++i) {
    const auto dz = shifted_register_derivative(theta, i, spec);
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc += dz[k] * h_q[k];
    grad[i] = acc;
  }
  for (std::size_t i = 0; i < n_angles; ++i) {
    const auto dq = shifted_register_derivative(vartheta, i, spec);
    double acc = 0.0;
    for (std::size_t l = 0; l < dim; ++l) acc += z_h[l] * dq[l];
    grad[n_angles + i] = acc;
  }
  grad[2 * n_angles] = grad_alpha;
  grad[2 * n_angles + 1] = grad_beta;
  return grad;
}

}  // namespace

double mse_loss(const QcpmParams& params, const Architecture& arch,
                std::span<const ChebPoint> points, std::span<const double> targets) {
  arch.validate();
  params.validate(arch);
  check_batch(points, targets);
  const BatchEvaluator batch(arch.n_qubits, points);
  QcpmParams p = params;
  return evaluate(p, arch, batch, targets, false).loss;
}

std::vector<double> gradient(const QcpmParams& params, const Architecture& arch,
                             std::span<const ChebPoint> points, std::span<const double> targets) {
  arch.validate();
  params.validate(arch);
  check_batch(points, targets);
  const BatchEvaluator batch(arch.n_qubits, points);
  QcpmParams p = params;
  const Evaluation ev = evaluate(p, arch, batch, targets, false);
  return gradient_from(p, arch, batch, targets, ev);
}

std::vector<double> predict(const QcpmParams& params, const Architecture& arch,
                            std::span<const ChebPoint> points) {
  arch.validate();
  params.validate(arch);
  const BatchEvaluator batch(arch.n_qubits, points);
  const auto spec = arch.ansatz();
  const auto coeffs = coefficients_from_registers(register_state(params.theta, spec),
                                                  register_state(params.vartheta, spec), arch);
  std::vector<double> out(points.size());
  batch.amplitudes(coeffs, out);
  for (double& a : out) a = params.alpha * a * a + params.beta;
  return out;
}

std::optional<double> r_squared(std::span<const double> predictions,
                                std::span<const double> targets) {
  if (predictions.size() != targets.size()) {
    throw ValidationError("r_squared: length mismatch");
  }
  if (targets.size() < 2) throw ValidationError("r_squared: needs at least two points");
  double mean = 0.0;
  for (double t : targets) mean += t;
  mean /= static_cast<double>(targets.size());
  double ss_res = 0.0, ss_tot = 0.0, ss_abs = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double r = targets[i] - predictions[i];
    const double d = targets[i] - mean;
    ss_res += r * r;
    ss_tot += d * d;
    ss_abs += targets[i] * targets[i];
  }
  // Constant targets leave only rounding noise in ss_tot.
  if (ss_tot <= 1e-24 * ss_abs || ss_tot == 0.0) return std::nullopt;
  return 1.0 - ss_res / ss_tot;
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grad,
               double learning_rate, const AdamOptions& options) {
  if (state.m.size() != params.size() || grad.size() != params.size()) {
    throw SizeError("adam_step: moment, parameter and gradient sizes differ");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(options.beta1, t);
  const double c2 = 1.0 - std::pow(options.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = options.beta1 * state.m[i] + (1.0 - options.beta1) * grad[i];
    state.v[i] = options.beta2 * state.v[i] + (1.0 - options.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + options.epsilon);
  }
}

std::string_view to_string(AlphaBetaMode mode) {
  return mode == AlphaBetaMode::kAdam ? "adam" : "refit";
}

AlphaBetaMode parse_alpha_beta_mode(std::string_view text) {
  if (text == "adam") return AlphaBetaMode::kAdam;
  if (text == "refit") return AlphaBetaMode::kRefit;
  throw ValidationError("unknown alpha/beta mode '" + std::string(text) + "'");
}

std::string_view to_string(InitMode mode) {
  return mode == InitMode::kRandom ? "random" : "product";
}

InitMode parse_init_mode(std::string_view text) {
  if (text == "random") return InitMode::kRandom;
  if (text == "product") return InitMode::kProduct;
  throw ValidationError("unknown init mode '" + std::string(text) + "'");
}

std::vector<double> default_learning_rates() {
  std::vector<double> rates;
  for (int i = 1; i <= 10; ++i) rates.push_back(0.1 * i);
  return rates;
}

void TrainConfig::validate() const {
  arch.validate();
  if (epochs < 1) throw ValidationError("epochs must be at least 1");
  if (learning_rates.empty()) throw ValidationError("empty learning-rate sweep");
  for (double lr : learning_rates) {
    if (!(lr > 0.0 && lr <= 1.0)) {
      throw ValidationError("learning rate " + std::to_string(lr) + " outside (0, 1]");
    }
  }
  if (diagnostics_cadence < 0) throw ValidationError("negative diagnostics cadence");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 && adam.beta2 < 1.0 &&
        adam.epsilon > 0.0)) {
    throw ValidationError("invalid ADAM hyperparameters");
  }
}

QcpmParams initial_params(const TrainConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const std::size_t n = config.arch.angles_per_register();
  QcpmParams params;
  params.theta.resize(n);
  params.vartheta.resize(n);
  for (double& a : params.theta) a = angle(rng);
  for (double& a : params.vartheta) a = angle(rng);
  if (config.init == InitMode::kProduct) std::fill(params.vartheta.begin(), params.vartheta.end(), 0.0);
  params.alpha = 1.0;
  params.beta = 0.0;
  return params;
}

bool TrainRecord::has_nonpurity() const {
  return std::any_of(nonpurity.begin(), nonpurity.end(), [](double c) { return !std::isnan(c); });
}

namespace {

struct BranchRun {
  BranchResult result;
  std::vector<double> loss;
  std::vector<double> r2;
  std::vector<double> nonpurity;
  QcpmParams params;
};

BranchRun run_branch(const TrainConfig& config, const QcpmParams& init, double learning_rate,
                     const BatchEvaluator& batch, std::span<const double> targets) {
  const Architecture& arch = config.arch;
  const bool refit = config.alpha_beta == AlphaBetaMode::kRefit;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::size_t n_angles = arch.angles_per_register();

  BranchRun run;
  run.result.learning_rate = learning_rate;
  run.loss.reserve(static_cast<std::size_t>(config.epochs));
  run.r2.reserve(static_cast<std::size_t>(config.epochs));
  run.nonpurity.reserve(static_cast<std::size_t>(config.epochs));

  std::vector<double> flat = init.flatten();
  AdamState adam(flat.size());
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    QcpmParams params = QcpmParams::unflatten(flat, arch);
    const Evaluation ev = evaluate(params, arch, batch, targets, refit);
    if (!std::isfinite(ev.loss)) {
      run.result.ok = false;
      run.result.message = "non-finite loss at epoch " + std::to_string(epoch + 1) +
                           " (learning rate " + std::to_string(learning_rate) + ")";
      return run;
    }
    run.loss.push_back(ev.loss);
    run.r2.push_back(r_squared(ev.predictions, targets).value_or(nan));
    const bool trace = config.diagnostics_cadence > 0 && epoch % config.diagnostics_cadence == 0;
    const double c = !trace                  ? nan
                     : arch.use_correlation ? coefficient_nonpurity(ev.coefficients, arch.register_dim())
                                            : 0.0;
    run.nonpurity.push_back(c);

    std::vector<double> grad = gradient_from(params, arch, batch, targets, ev);
    if (refit) {
      flat[2 * n_angles] = params.alpha;
      flat[2 * n_angles + 1] = params.beta;
      grad[2 * n_angles] = 0.0;
      grad[2 * n_angles + 1] = 0.0;
    }
    adam_step(adam, flat, grad, learning_rate, config.adam);
  }

  run.params = QcpmParams::unflatten(flat, arch);
  const Evaluation final_ev = evaluate(run.params, arch, batch, targets, refit);
  if (!std::isfinite(final_ev.loss)) {
    run.result.ok = false;
    run.result.message = "non-finite final loss (learning rate " + std::to_string(learning_rate) + ")";
    return run;
  }
  run.result.final_loss = final_ev.loss;
  run.result.final_r2 = r_squared(final_ev.predictions, targets);
  return run;
}

}  // namespace

TrainRecord train(const TrainConfig& config, const TargetGrid& data) {
  config.validate();
  if (data.points.empty()) throw ValidationError("train: empty dataset");
  if (data.n_qubits != config.arch.n_qubits) {
    throw ValidationError("train: dataset lattice is for N=" + std::to_string(data.n_qubits) +
                          " but the model has N=" + std::to_string(config.arch.n_qubits));
  }
  const auto points = data.chebyshev_points();
  const auto targets = data.values();
  const BatchEvaluator batch(config.arch.n_qubits, points);
  const QcpmParams init = initial_params(config);

  std::vector<BranchRun> runs(config.learning_rates.size());
  parallel_for(runs.size(), [&](std::size_t i) {
    runs[i] = run_branch(config, init, config.learning_rates[i], batch, targets);
  });

  const bool degenerate = !r_squared(targets, targets).has_value() && targets.size() >= 2;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i].result;
    if (!r.ok) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& b = runs[*best].result;
    const bool better = (degenerate || !r.final_r2 || !b.final_r2)
                            ? r.final_loss < b.final_loss
                            : *r.final_r2 > *b.final_r2;
    if (better) best = i;
  }

  TrainRecord record;
  record.config = config;
  record.label = data.label;
  record.target_scale = data.scale;
  for (const auto& run : runs) record.branches.push_back(run.result);
  if (!best) {
    std::ostringstream msg;
    msg << "train: every learning-rate branch failed";
    for (const auto& run : runs) msg << "; " << run.result.message;
    throw std::runtime_error(msg.str());
  }
  BranchRun& chosen = runs[*best];
  record.loss = std::move(chosen.loss);
  record.r2 = std::move(chosen.r2);
  record.nonpurity = std::move(chosen.nonpurity);
  record.final_params = std::move(chosen.params);
  record.best_learning_rate = chosen.result.learning_rate;
  record.final_loss = chosen.result.final_loss;
  record.final_r2 = chosen.result.final_r2;
  return record;
}

}  // namespace qcpm
