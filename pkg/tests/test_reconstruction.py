import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from actiflux.grid import BoundaryRule, Field1D, Field2D, Grid1D, Grid2D
from actiflux.reconstruction import (global_eval_1d, global_eval_2d, recon1d_eval,
                                     recon1d_midpoint, recon2d_center, recon2d_eval)

G3_NODES, G3_WEIGHTS = np.polynomial.legendre.leggauss(3)
PLACES = [(-0.5, 0.0), (0.5, 0.0), (0.0, -0.5), (0.0, 0.5),
          (-0.5, -0.5), (0.5, -0.5), (-0.5, 0.5), (0.5, 0.5)]
BIQUAD = [(i, j) for i in range(3) for j in range(3)]


def _mono_mean(k):
    return 0.0 if k % 2 else 0.5 ** k / (k + 1)


def biquadratic_fit(dofs):
    """Independent oracle: solve the 9x9 interpolation problem directly."""
    rows = [[_mono_mean(i) * _mono_mean(j) for i, j in BIQUAD]]
    rows += [[x ** i * y ** j for i, j in BIQUAD] for x, y in PLACES]
    coef = np.linalg.solve(np.array(rows), np.asarray(dofs, float))
    return lambda x, y: sum(c * x ** i * y ** j for c, (i, j) in zip(coef, BIQUAD))


finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_recon1d_constant():
    for xi in (-0.5, -0.1, 0.0, 0.3, 0.5):
        assert recon1d_eval(2.5, 2.5, 2.5, xi) == pytest.approx(2.5, abs=1e-15)


def test_recon1d_examples():
    assert recon1d_eval(1.0, 0.0, 0.0, 0.0) == 1.5
    assert recon1d_midpoint(1.0, 0.0, 0.0) == 1.5
    assert recon1d_midpoint(0.0, 1.0, 1.0) == -0.5
    assert recon1d_midpoint(3.0, 3.0, 3.0) == 3.0


@given(finite, finite, finite)
def test_recon1d_interpolates_and_keeps_mean(a, l, r):
    assert recon1d_eval(a, l, r, -0.5) == pytest.approx(l, abs=1e-9)
    assert recon1d_eval(a, l, r, 0.5) == pytest.approx(r, abs=1e-9)
    mean = 0.5 * np.sum(G3_WEIGHTS * recon1d_eval(a, l, r, 0.5 * G3_NODES))
    assert mean == pytest.approx(a, abs=1e-12 * (1 + abs(a) + abs(l) + abs(r)))
    assert recon1d_midpoint(a, l, r) == pytest.approx(recon1d_eval(a, l, r, 0.0), abs=1e-9)


def test_recon1d_matches_brute_force_quadratic_fit():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a, l, r = rng.normal(size=3)
        # unknowns c0 + c1 xi + c2 xi^2 with the three constraints
        M = np.array([[1, -0.5, 0.25], [1, 0.5, 0.25], [1, 0, 1 / 12]])
        c = np.linalg.solve(M, [l, r, a])
        xi = rng.uniform(-0.5, 0.5)
        assert recon1d_eval(a, l, r, xi) == pytest.approx(c[0] + c[1] * xi + c[2] * xi ** 2)


def test_recon2d_constant_and_node():
    for xi, eta in [(0.1, -0.3), (0.5, 0.5), (0.0, 0.0)]:
        assert recon2d_eval([4.0] * 9, xi, eta) == pytest.approx(4.0, abs=1e-14)
    assert recon2d_eval([0] * 8 + [1], 0.5, 0.5) == pytest.approx(1.0)


def test_recon2d_reproduces_x():
    dofs = [0.0, -0.5, 0.5, 0.0, 0.0, -0.5, 0.5, -0.5, 0.5]
    for xi in np.linspace(-0.5, 0.5, 5):
        for eta in np.linspace(-0.5, 0.5, 5):
            assert recon2d_eval(dofs, xi, eta) == pytest.approx(xi, abs=1e-14)


def test_recon2d_matches_linear_solve_oracle():
    rng = np.random.default_rng(4)
    for _ in range(20):
        dofs = rng.normal(size=9)
        oracle = biquadratic_fit(dofs)
        for xi, eta in rng.uniform(-0.5, 0.5, size=(5, 2)):
            assert recon2d_eval(dofs, xi, eta) == pytest.approx(oracle(xi, eta), abs=1e-12)
        assert recon2d_center(dofs) == pytest.approx(oracle(0.0, 0.0), abs=1e-12)


@settings(max_examples=50)
@given(st.lists(finite, min_size=9, max_size=9))
def test_recon2d_interpolates_and_keeps_mean(dofs):
    scale = 1 + max(abs(d) for d in dofs)
    for value, (x, y) in zip(dofs[1:], PLACES):
        assert recon2d_eval(dofs, x, y) == pytest.approx(value, abs=1e-12 * scale)
    X = 0.5 * G3_NODES[:, None]
    Y = 0.5 * G3_NODES[None, :]
    W = np.outer(G3_WEIGHTS, G3_WEIGHTS) / 4
    assert np.sum(W * recon2d_eval(dofs, X, Y)) == pytest.approx(dofs[0], abs=1e-12 * scale)


def test_recon2d_needs_nine_dofs():
    with pytest.raises(ValueError):
        recon2d_eval([1.0] * 8, 0, 0)


def _random_field_1d(n=8, seed=0):
    rng = np.random.default_rng(seed)
    return Grid1D(0.0, 1.0, n), Field1D(rng.normal(size=(1, n)), rng.normal(size=(1, n + 1)))


def test_global_1d_interface_values_and_continuity():
    g, f = _random_field_1d()
    rule = BoundaryRule("copy")
    for k, x in enumerate(g.interfaces):
        assert global_eval_1d(g, f, rule, 0, x) == pytest.approx(f.points[0, k], abs=1e-13)
    for x in g.interfaces[1:-1]:
        left = global_eval_1d(g, f, rule, 0, np.nextafter(x, -np.inf))
        right = global_eval_1d(g, f, rule, 0, np.nextafter(x, np.inf))
        assert left == pytest.approx(right, rel=1e-13, abs=1e-13)


def test_global_1d_constant_and_range():
    g = Grid1D(0.0, 1.0, 5)
    f = Field1D(np.full((1, 5), 3.0), np.full((1, 6), 3.0))
    xs = np.linspace(-0.2, 1.2, 17)
    assert np.allclose(global_eval_1d(g, f, BoundaryRule("periodic"), 0, xs), 3.0)
    with pytest.raises(ValueError):
        global_eval_1d(g, f, BoundaryRule("copy"), 0, 2.0)


def _random_field_2d(n=5, seed=1):
    rng = np.random.default_rng(seed)
    g = Grid2D(0.0, 1.0, 0.0, 2.0, n, n)
    f = Field2D(rng.normal(size=(n, n)), rng.normal(size=(n + 1, n + 1)),
                rng.normal(size=(n + 1, n)), rng.normal(size=(n, n + 1)))
    return g, f


def test_global_2d_nodes_and_edge_continuity():
    g, f = _random_field_2d()
    rule = BoundaryRule("copy")
    for i, x in enumerate(g.x_interfaces):
        for j, y in enumerate(g.y_interfaces):
            assert global_eval_2d(g, f, rule, x, y) == pytest.approx(f.nodes[i, j], abs=1e-12)
    x = g.x_interfaces[2]
    for y in np.linspace(0.05, 1.95, 9):
        a = global_eval_2d(g, f, rule, np.nextafter(x, -np.inf), y)
        b = global_eval_2d(g, f, rule, np.nextafter(x, np.inf), y)
        assert a == pytest.approx(b, abs=1e-12)


def test_global_2d_constant():
    g = Grid2D(0.0, 1.0, 0.0, 1.0, 4, 4)
    f = Field2D(np.full((4, 4), 2.0), np.full((5, 5), 2.0), np.full((5, 4), 2.0),
                np.full((4, 5), 2.0))
    assert global_eval_2d(g, f, BoundaryRule("periodic"), 0.33, 0.71) == pytest.approx(2.0)
