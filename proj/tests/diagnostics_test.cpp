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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qcpm/data_io.hpp"
#include "qcpm/errors.hpp"
#include "qcpm/sampler.hpp"

namespace qcpm {
namespace {

constexpr double kPi = std::numbers::pi;

QcpmParams random_params(std::mt19937_64& rng, const Architecture& arch) {
  return {testing::random_angles(rng, arch.angles_per_register()),
          testing::random_angles(rng, arch.angles_per_register()), 1.0, 0.0};
}

std::vector<std::complex<double>> amplitudes(const StateVector& s) {
  return {s.amplitudes().begin(), s.amplitudes().end()};
}

TEST(SeriesKind, Names) {
  for (auto k : {SeriesKind::kNonpurityVsEpoch, SeriesKind::kEntropyVsFf, SeriesKind::kPurityVsZ,
                 SeriesKind::kMutualInfoVsZ}) {
    EXPECT_EQ(parse_series_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_series_kind("nope"), ValidationError);
}

TEST(ParamsHash, StableAndSensitive) {
  std::mt19937_64 rng(1);
  const Architecture arch;
  QcpmParams p = random_params(rng, arch);
  const std::string h = params_hash(p, arch);
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(h, params_hash(p, arch));
  p.theta[3] = std::nextafter(p.theta[3], 10.0);
  EXPECT_NE(h, params_hash(p, arch));
  Architecture open = arch;
  open.entangler = Entangler::kOpen;
  EXPECT_NE(params_hash(p, open), params_hash(p, arch));
}

TEST(Nonpurity, ZeroWithoutCorrelation) {
  std::mt19937_64 rng(2);
  const Architecture arch{4, 3, false, Entangler::kClosed};
  for (int i = 0; i < 5; ++i) EXPECT_EQ(nonpurity(random_params(rng, arch), arch), 0.0);
}

TEST(Nonpurity, ProductRegistersWithCorrelationNearZero) {
  // vartheta = 0 leaves the Q register in |0>, so CZ does nothing.
  std::mt19937_64 rng(3);
  const Architecture arch;
  QcpmParams p = random_params(rng, arch);
  std::fill(p.vartheta.begin(), p.vartheta.end(), 0.0);
  EXPECT_NEAR(nonpurity(p, arch), 0.0, 1e-12);
}

TEST(Nonpurity, BellPairAcrossRegisters) {
  const Architecture arch{1, 0, true, Entangler::kClosed};
  const QcpmParams p{{-kPi / 2}, {-kPi / 2}, 1.0, 0.0};
  EXPECT_NEAR(nonpurity(p, arch), 0.5, 1e-14);
}

TEST(Nonpurity, PurityIsSymmetricAcrossRegisters) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const StateVector s(8, testing::random_state(rng, 8));
    const double gz = purity(partial_trace(s, qubit_range(0, 4)));
    const double gq = purity(partial_trace(s, qubit_range(4, 4)));
    EXPECT_NEAR(gz, gq, 1e-10);
  }
  const Architecture arch;
  for (int trial = 0; trial < 5; ++trial) {
    const StateVector s = coefficient_state(random_params(rng, arch), arch);
    EXPECT_NEAR(purity(partial_trace(s, arch.z_qubits())), purity(partial_trace(s, arch.q_qubits())),
                1e-10);
  }
}

TEST(Nonpurity, CoefficientShortcutMatchesPartialTrace) {
  std::mt19937_64 rng(5);
  const Architecture arch;
  const QcpmParams p = random_params(rng, arch);
  const auto c = extract_coefficients(p, arch);
  EXPECT_NEAR(coefficient_nonpurity(c.entries, c.dim), nonpurity(p, arch), 1e-12);
}

TEST(MutualInformation, TwiceZEntropyOnRandomStates) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto amps = testing::random_state(rng, 8);
    const StateVector s(8, amps);
    const double independent = testing::schmidt_entropy(amps, 4, 8) + testing::schmidt_entropy_tail(amps, 4, 8);
    EXPECT_NEAR(mutual_information_pure(s, qubit_range(0, 4)), independent, 1e-10);
    EXPECT_NEAR(mutual_information_pure(s, qubit_range(0, 4)),
                2 * von_neumann_entropy(partial_trace(s, qubit_range(4, 4))), 1e-10);
  }
}

TEST(NonpurityTrace, FromRecord) {
  SynthOptions o;
  o.arch = Architecture{2, 1, true, Entangler::kClosed};
  const TargetGrid grid = synth_target(SynthKind::kGaussian2d, o, 0);
  TrainConfig c;
  c.arch = o.arch;
  c.epochs = 100;
  c.learning_rates = {0.2};
  EXPECT_THROW(nonpurity_trace(train(c, grid)), ValidationError);
  c.diagnostics_cadence = 1;
  const DiagnosticSeries s = nonpurity_trace(train(c, grid));
  ASSERT_EQ(s.size(), 100u);
  EXPECT_EQ(s.abscissa.front(), 1.0);
  EXPECT_EQ(s.abscissa.back(), 100.0);
  EXPECT_EQ(s.kind, SeriesKind::kNonpurityVsEpoch);
  EXPECT_TRUE(s.meta("params_hash").has_value());
  c.arch.use_correlation = false;
  const DiagnosticSeries flat = nonpurity_trace(train(c, grid));
  for (double v : flat.ordinate) EXPECT_EQ(v, 0.0);
}

TEST(NonpurityTrace, ProductStartBeginsAtZero) {
  SynthOptions o;
  o.arch = Architecture{2, 1, true, Entangler::kClosed};
  const TargetGrid grid = synth_target(SynthKind::kGaussian2d, o, 0);
  TrainConfig c;
  c.arch = o.arch;
  c.epochs = 20;
  c.learning_rates = {0.1};
  const DiagnosticSeries s = product_start_nonpurity_trace(c, grid);
  ASSERT_EQ(s.size(), 20u);
  EXPECT_NEAR(s.ordinate.front(), 0.0, 1e-12);
}

TEST(Entropy, ZeroAnglesWithoutCorrelation) {
  const Architecture arch{4, 3, false, Entangler::kClosed};
  const QcpmParams p{std::vector<double>(16, 0.0), std::vector<double>(16, 0.0), 1.0, 0.0};
  EXPECT_NEAR(half_register_entropy(p, arch, Register::kZ), 0.0, 1e-12);
  EXPECT_NEAR(half_register_entropy(p, arch, Register::kQ), 0.0, 1e-12);
}

TEST(Entropy, BoundedByHalfRegister) {
  std::mt19937_64 rng(7);
  const Architecture arch;
  for (int trial = 0; trial < 10; ++trial) {
    const QcpmParams p = random_params(rng, arch);
    for (auto reg : {Register::kZ, Register::kQ}) {
      const double s = half_register_entropy(p, arch, reg);
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 2.0 + 1e-12);
    }
  }
  EXPECT_THROW(half_register_entropy(random_params(rng, Architecture{3, 1, true, Entangler::kClosed}),
                                     Architecture{3, 1, true, Entangler::kClosed}, Register::kZ),
               ValidationError);
}

TEST(Entropy, TableRows) {
  std::mt19937_64 rng(8);
  const Architecture cc;
  const Architecture no_cc{4, 3, false, Entangler::kClosed};
  const std::vector<LabeledModel> models = {{"a", random_params(rng, cc), cc},
                                            {"b", random_params(rng, no_cc), no_cc}};
  const DiagnosticSeries s = entropy_table(models, Register::kZ);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.tags[0], "a");
  EXPECT_EQ(s.tags[1], "b");
  EXPECT_NEAR(s.ordinate[1], half_register_entropy(models[1].params, no_cc, Register::kZ), 1e-15);
  EXPECT_TRUE(s.meta("params_hash[1]").has_value());
}

TEST(TrainingStage, FeatureStateThroughCircuit) {
  std::mt19937_64 rng(9);
  const Architecture arch{2, 1, true, Entangler::kClosed};
  const QcpmParams p = random_params(rng, arch);
  const ChebPoint x{0.35, -0.6};
  const StateVector s = training_stage_state(p, arch, x);
  EXPECT_NEAR(s.squared_norm(), 1.0, 1e-12);
  const double a = model_amplitude(x, p, arch);
  const double norm = std::sqrt(feature_vector(x.u, 2).squared_norm() * feature_vector(x.v, 2).squared_norm());
  EXPECT_NEAR(s[0].real(), a / norm, 1e-12);
}

TEST(ZSweep, ShapeAndBounds) {
  std::mt19937_64 rng(10);
  const Architecture arch;
  const QcpmParams p = random_params(rng, arch);
  const DiagnosticSeries s = z_sweep(p, arch, SweepQuantity::kPurity, 0.0, 512);
  ASSERT_EQ(s.size(), 512u + 16u + 15u);
  EXPECT_EQ(s.abscissa.front(), -1.0);
  EXPECT_EQ(s.abscissa[511], 1.0);
  EXPECT_EQ(s.tags[511], "curve");
  EXPECT_EQ(s.tags[512], "node");
  EXPECT_EQ(s.tags.back(), "half_node");
  for (double v : s.ordinate) {
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-12);
  }
  EXPECT_EQ(*s.meta("v_fixed"), "0");
  EXPECT_THROW(z_sweep(p, arch, SweepQuantity::kPurity, 1.5, 10), DomainError);
  EXPECT_THROW(z_sweep(p, arch, SweepQuantity::kPurity, 0.0, 1), ValidationError);
}

TEST(ZSweep, MutualInformationIsTwiceEntropyPointwise) {
  std::mt19937_64 rng(11);
  const Architecture arch;
  const QcpmParams p = random_params(rng, arch);
  const DiagnosticSeries s = z_sweep(p, arch, SweepQuantity::kMutualInformation, 0.3, 16);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto amps = amplitudes(training_stage_state(p, arch, {s.abscissa[i], 0.3}));
    EXPECT_NEAR(s.ordinate[i], 2 * testing::schmidt_entropy(amps, 4, 8), 1e-10);
  }
}

TEST(ZSweep, ZeroWithoutCorrelation) {
  std::mt19937_64 rng(12);
  const Architecture arch{4, 3, false, Entangler::kClosed};
  const QcpmParams p = random_params(rng, arch);
  const DiagnosticSeries s = z_sweep(p, arch, SweepQuantity::kMutualInformation, -0.4, 64);
  for (double v : s.ordinate) EXPECT_EQ(v, 0.0);
}

}  // namespace
}  // namespace qcpm
