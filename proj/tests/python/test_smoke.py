# Copyright 2026 The HybridShape Authors.
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

import numpy as np
import pytest

import hybridshape as hs


def sphere_cloud(n, radius=0.3, seed=0):
    rng = np.random.default_rng(seed)
    d = rng.normal(size=(n, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return 0.5 + radius * d, d


def test_version():
    assert hs.__version__.count(".") == 2


def test_sphere_roundtrip():
    p, n = sphere_cloud(4096)
    chi = hs.dpsr(p, n, 32)
    assert chi.shape == (32, 32, 32)
    assert chi[16, 16, 16] > 0 > chi[0, 0, 0]
    v, f = hs.marching_cubes(chi)
    assert v.shape[1] == 3 and f.shape[1] == 3
    assert hs.euler_characteristic(v, f) == 2
    assert hs.self_intersection_ratio(v, f) == 0.0
    radii = np.linalg.norm(v - 0.5, axis=1)
    assert np.abs(radii - 0.3).max() < 2 / 32


def test_evaluate_self_is_zero():
    p, n = sphere_cloud(2048)
    v, f = hs.marching_cubes(hs.dpsr(p, n, 24))
    r = hs.evaluate(v, f, v, f, samples=5000)
    assert r["assd"] == 0.0 and r["hd90"] == 0.0
    assert r["nc"] == pytest.approx(1.0)


def test_gradients_match_finite_differences():
    p, n = sphere_cloud(16, seed=1)
    target = hs.dpsr(*sphere_cloud(512, radius=0.25, seed=2), 16)
    loss, gp, gn = hs.dpsr_loss_gradients(p, n, target, edge_weighting=False)
    h = 1e-6
    for idx in [(0, 0), (3, 2), (7, 1)]:
        a, b = p.copy(), p.copy()
        a[idx] += h
        b[idx] -= h
        fd = (hs.dpsr_loss_gradients(a, n, target, edge_weighting=False)[0]
              - hs.dpsr_loss_gradients(b, n, target, edge_weighting=False)[0]) / (2 * h)
        assert fd == pytest.approx(gp[idx], rel=1e-4, abs=1e-8)
    assert gn.shape == n.shape and np.isfinite(loss)


def test_optimize_reduces_loss_and_keeps_unit_normals():
    target = hs.dpsr(*sphere_cloud(4096, radius=0.3), 24)
    p, n = sphere_cloud(500, radius=0.22, seed=3)
    out = hs.optimize_oriented_points(target, p, n, iterations=40)
    assert len(out["losses"]) == 40
    assert out["final_loss"] < out["losses"][0]
    assert np.abs(np.linalg.norm(out["normals"], axis=1) - 1).max() < 1e-9


def test_contours():
    poly = hs.make_polygon_target(40, seed=0)
    assert len(poly) == 1 and poly[0].shape == (40, 2)
    r = np.linalg.norm(poly[0] - 0.5, axis=1)
    assert r.min() >= 0.15 and r.max() <= 0.4
    circ = hs.make_circle(200, 0.25)[0]
    assert np.abs(np.linalg.norm(circ - 0.5, axis=1) - 0.25).max() < 1e-12
    x = (np.arange(64) + 0.5) / 64
    grid = 0.25 - np.hypot(*np.meshgrid(x - 0.5, x - 0.5, indexing="ij"))
    loops = hs.marching_squares(grid)
    assert len(loops) == 1


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        hs.make_circle(2)
    with pytest.raises(ValueError):
        hs.dpsr(np.zeros((4, 4)), np.ones((4, 4)), 16)
    x = (np.arange(32) + 0.5) / 32
    X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
    torus = 0.1 - np.hypot(np.hypot(X - 0.5, Y - 0.5) - 0.25, Z - 0.5)
    v, f = hs.marching_cubes(torus)
    with pytest.raises(hs.TopologyError):
        hs.correct_topology(torus, v, f, reg_iters=1)
    assert issubclass(hs.TopologyError, hs.HybridShapeError)
