# Copyright 2026 The QCPM Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import qcpm


def test_nodes_and_features():
    nodes = qcpm.nodes(3)
    assert len(nodes) == 8
    gram = np.array([qcpm.feature_vector(x, 3) for x in nodes])
    assert np.allclose(gram @ gram.T, np.eye(8), atol=1e-12)
    assert len(qcpm.training_lattice(4)) == 481
    d = qcpm.cheb_transform(4)
    assert np.allclose(d @ d.T, np.eye(16), atol=1e-12)


def test_amplitude_and_coefficients():
    arch = qcpm.Architecture(n_qubits=2, depth=1)
    p = qcpm.teacher_params(arch, 3)
    c = qcpm.coefficients(p, arch)
    assert c.shape == (4, 4)
    assert math.isclose(float((c * c).sum()), 1.0, rel_tol=1e-12)
    u, v = 0.3, -0.2
    tu = [qcpm.chebyshev_t(k, u) for k in range(4)]
    tv = [qcpm.chebyshev_t(k, v) for k in range(4)]
    w = np.array([2 ** -1.0] + [2 ** -0.5] * 3)
    expected = (w * tu) @ c @ (w * tv)
    assert math.isclose(qcpm.model_amplitude(p, arch, u, v), expected, abs_tol=1e-12)


def test_sampling_shapes_and_determinism():
    arch = qcpm.Architecture()
    p = qcpm.teacher_params(arch, 1)
    exact = qcpm.exact_distribution(p, arch, 1)
    assert exact.shape == (32, 32)
    assert math.isclose(float(exact.sum()), 1.0, abs_tol=1e-10)
    a = qcpm.sample(p, arch, 0, 10000, 5)
    b = qcpm.sample(p, arch, 0, 10000, 5)
    assert int(a.sum()) == 10000
    assert np.array_equal(a, b)


def test_training_and_diagnostics():
    arch = qcpm.Architecture(n_qubits=2, depth=1)
    grid = qcpm.synth_target("gaussian_2d", arch, 0, 0.7)
    assert len(grid) == 25
    rec = qcpm.train(grid, arch, epochs=50, learning_rates=[0.1], diagnostics_cadence=1)
    assert len(rec.loss) == 50
    assert rec.final_r2 is not None
    assert 0.0 <= qcpm.nonpurity(rec.final_params, arch) <= 1.0
    no_cc = qcpm.Architecture(n_qubits=2, depth=1, use_correlation=False)
    assert qcpm.nonpurity(rec.final_params, no_cc) == 0.0


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        qcpm.nodes(0)
    with pytest.raises(OSError):
        qcpm.read_grid("/nonexistent/grid.csv")


def test_grid_round_trip(tmp_path):
    grid = qcpm.synth_target("separable_beta", qcpm.Architecture(n_qubits=2), 0, 0.0)
    path = str(tmp_path / "g.csv")
    qcpm.write_grid(grid, path)
    back = qcpm.read_grid(path)
    assert np.allclose(back.values, grid.values, atol=1e-15)


def test_cli_entry_point():
    code, out, _ = qcpm.run_cli(["--help"])
    assert code == 0
    assert "train" in out
    code, _, err = qcpm.run_cli(["train", "--bogus"])
    assert code == 2
