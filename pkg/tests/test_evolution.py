import numpy as np
import pytest

from actiflux.equations import (AcousticsParams, Advection2DSpec, BlowUpError,
                                ParameterError, ScalarSource, make_acoustics_gravity,
                                make_advection_1d)
from actiflux.evolution import (CflError, Rk2Options, advect_exact, evolve_point_1d,
                                evolve_point_2d, evolve_points_1d, evolve_points_2d,
                                rk2_point_update, wb_correction)
from actiflux.grid import BoundaryRule, Field1D, Field2D, Grid1D, Grid2D
from actiflux.harness import field_from_function_2d
from actiflux.oracles import VelocityData, acoustics_green_solution
from actiflux.wellbalance import init_parabola


def one(*xs):
    return np.ones_like(np.asarray(xs[0], dtype=float))


def test_advect_exact_examples():
    assert advect_exact(one, 1.0, ScalarSource("linear", 7.0), 0.1, 0.3) == \
        pytest.approx(np.exp(0.7), rel=1e-14)
    t = 0.5 / 14
    assert advect_exact(one, 1.0, ScalarSource("power", 7.0, 3.0), t, 0.3) == \
        pytest.approx(np.sqrt(2.0), rel=1e-14)
    assert advect_exact(np.sin, 2.0, ScalarSource("linear", 3.0), 0.0, 0.4) == np.sin(0.4)
    assert advect_exact(np.sin, 2.0, ScalarSource(), 0.25, 0.4) == pytest.approx(np.sin(-0.1))


def test_advect_exact_2d_and_errors():
    q0 = lambda x, y: x + 10 * y
    assert advect_exact(q0, (1.0, 0.1), ScalarSource(), 0.5, (0.2, 0.3)) == \
        pytest.approx(-0.3 + 10 * 0.25)
    with pytest.raises(ParameterError):
        advect_exact(q0, (1.0, 0.1), ScalarSource(), 0.5, 0.2)
    with pytest.raises(ParameterError):
        advect_exact(one, 1.0, ScalarSource(), -0.1, 0.2)
    with pytest.raises(BlowUpError):
        advect_exact(one, 1.0, ScalarSource("power", 7.0, 3.0), 0.1, 0.0)


@pytest.mark.parametrize("alpha", [0.5, 0.25, 0.9])
def test_rk2_linear_scalar_expansion(alpha):
    sys_ = make_advection_1d(1.0, ScalarSource("linear", 1.0))
    x = np.linspace(0, 1, 7)
    t = 0.3
    out = rk2_point_update(sys_, [np.cos], Rk2Options(alpha=alpha), t, x)
    assert np.allclose(out[0], np.cos(x - t) * (1 + t + t * t / 2), atol=1e-14)


def test_rk2_without_source_is_pure_shift():
    sys_ = make_acoustics_gravity(AcousticsParams(1.3, 0.0))
    Q0 = [np.sin, np.cos, np.exp]
    x = np.linspace(-1, 1, 9)
    t = 0.2
    out = rk2_point_update(sys_, Q0, Rk2Options(), t, x)
    for k, lam in enumerate(sys_.speeds):
        assert np.array_equal(out[k], Q0[k](x - lam * t))


def test_rk2_constant_acoustics_state():
    g, c, rho0, p0 = -9.81, 1.5, 2.0, 3.0
    sys_ = make_acoustics_gravity(AcousticsParams(c, g))
    Qc = sys_.char_of(np.array([rho0, 0.0, p0]))
    Q0 = [lambda x, v=v: np.full_like(np.asarray(x, dtype=float), v) for v in Qc]
    t = 0.05
    q = sys_.conserved_of(rk2_point_update(sys_, Q0, Rk2Options(), t, np.array([0.1])))
    assert q[:, 0] == pytest.approx([rho0, rho0 * g * t, p0], abs=1e-14)


def test_rk2_third_order_local_error():
    c, g = 1.0, -2.0
    sys_ = make_acoustics_gravity(AcousticsParams(c, g))
    data = VelocityData(np.sin)
    # velocity-only data in characteristic form
    Q0 = [lambda x: 0.5 * c * np.sin(x), lambda x: -0.5 * c * np.sin(x),
          lambda x: 0.0 * np.asarray(x)]
    x = 0.3
    errs = []
    for t in (0.04, 0.02, 0.01):
        q = sys_.conserved_of(rk2_point_update(sys_, Q0, Rk2Options(), t, np.array([x])))[:, 0]
        exact = np.array(acoustics_green_solution(data, c, g, t, x, tol=1e-14))
        errs.append(np.max(np.abs(q - exact)))
    assert 6 <= errs[0] / errs[1] <= 10 and 6 <= errs[1] / errs[2] <= 10


def test_wb_correction_examples():
    assert wb_correction(0.5, -1.0, 0.01, 1.02, 1.0, 0.005) == pytest.approx(3.125e-8, rel=1e-12)
    assert wb_correction(0.5, -1.0, 0.01, 1.0, 1.0, 0.005) == 0.0
    assert wb_correction(0.5, 0.0, 0.01, 1.02, 1.0, 0.005) == 0.0


def _parabola_setup(n=400):
    grid = Grid1D(-1.5, 2.5, n)
    g = -1.0
    field = init_parabola(grid, 17.0, -3.0, 1.0, g)
    ghost = init_parabola(grid.extended(), 17.0, -3.0, 1.0, g)
    return grid, field, BoundaryRule.static(ghost), make_acoustics_gravity(AcousticsParams(1.0, g))


def test_parabola_stationary_with_fix():
    grid, field, rule, sys_ = _parabola_setup()
    dt = 0.9 * grid.dx
    for t in (0.5 * dt, dt):
        out = evolve_points_1d(grid, field, rule, sys_, Rk2Options(well_balanced=True), t)
        assert np.max(np.abs(out - field.points)) <= 1e-13


def test_parabola_drift_without_fix():
    grid, field, rule, sys_ = _parabola_setup()
    dt = 0.9 * grid.dx
    out = evolve_points_1d(grid, field, rule, sys_, Rk2Options(), dt)
    rho = field.points[0]
    drift = -(0.5 * 1.0 / 4) * (rho[1:] - rho[:-1]) / grid.dx * dt ** 3
    assert np.allclose(out[1, 1:], drift, rtol=1e-6, atol=1e-15)
    assert np.max(np.abs(out[[0, 2]] - field.points[[0, 2]])) <= 1e-13


def test_evolve_point_1d_constant_state():
    grid = Grid1D(0.0, 1.0, 10)
    sys_ = make_advection_1d(1.0)
    f = Field1D(np.full((1, 10), 2.0), np.full((1, 11), 2.0))
    assert evolve_point_1d(grid, f, BoundaryRule("periodic"), sys_, 4, Rk2Options(), 0.05)[0] \
        == pytest.approx(2.0, abs=1e-15)


def test_evolve_1d_cfl_error():
    grid = Grid1D(0.0, 1.0, 10)
    f = Field1D(np.ones((1, 10)), np.ones((1, 11)))
    with pytest.raises(CflError):
        evolve_points_1d(grid, f, BoundaryRule("copy"), make_advection_1d(2.0),
                         Rk2Options(), 0.06)


def test_exact_mode_needs_scalar_closed_form():
    grid = Grid1D(0.0, 1.0, 10)
    f = Field1D(np.ones((3, 10)), np.ones((3, 11)))
    with pytest.raises(ParameterError):
        evolve_points_1d(grid, f, BoundaryRule("copy"),
                         make_acoustics_gravity(AcousticsParams(1.0, 1.0)),
                         Rk2Options(mode="exact"), 0.01)


def test_rk2_options_validation():
    for a in (0.0, 1.0, -0.2):
        with pytest.raises(ParameterError):
            Rk2Options(alpha=a)
    with pytest.raises(ParameterError):
        Rk2Options(mode="rk4")


def _smooth_field_2d(n=12):
    grid = Grid2D(0.0, 1.0, 0.0, 1.0, n, n)
    f = lambda x, y: np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y) + 2
    return grid, field_from_function_2d(grid, f), f


def test_2d_zero_velocity_no_source_unchanged():
    grid, field, _ = _smooth_field_2d()
    spec = Advection2DSpec((0.0, 0.0))
    nodes, ev, eh = evolve_points_2d(grid, field, BoundaryRule("periodic"), spec,
                                     Rk2Options(), 0.01)
    assert np.allclose(nodes, field.nodes, atol=1e-14)
    assert np.allclose(ev, field.edges_v, atol=1e-14)
    assert np.allclose(eh, field.edges_h, atol=1e-14)


def test_2d_constant_field_exact_source():
    grid = Grid2D(0.0, 1.0, 0.0, 1.0, 6, 6)
    field = Field2D(np.full((6, 6), 1.5), np.full((7, 7), 1.5), np.full((7, 6), 1.5),
                    np.full((6, 7), 1.5))
    spec = Advection2DSpec((1.0, 0.1), ScalarSource("linear", 7.0))
    for kind, i, j in (("node", 3, 2), ("edge_v", 0, 5), ("edge_h", 5, 6)):
        val = evolve_point_2d(grid, field, BoundaryRule("copy"), spec, (kind, i, j),
                              Rk2Options(mode="exact"), 0.05)
        assert val == pytest.approx(1.5 * np.exp(0.35), rel=1e-14)


def test_2d_rk2_local_order():
    grid, field, _ = _smooth_field_2d()
    spec = Advection2DSpec((1.0, 0.5), ScalarSource("power", 1.0, 2.0))
    rule = BoundaryRule("periodic")
    diffs = []
    for t in (0.02, 0.01, 0.005):
        rk = evolve_points_2d(grid, field, rule, spec, Rk2Options(), t)
        ex = evolve_points_2d(grid, field, rule, spec, Rk2Options(mode="exact"), t)
        diffs.append(max(np.max(np.abs(a - b)) for a, b in zip(rk, ex)))
    assert 6 <= diffs[0] / diffs[1] <= 10 and 6 <= diffs[1] / diffs[2] <= 10


def test_2d_cfl_error():
    grid, field, _ = _smooth_field_2d(10)
    with pytest.raises(CflError):
        evolve_points_2d(grid, field, BoundaryRule("periodic"), Advection2DSpec((1.0, 0.0)),
                         Rk2Options(), 0.06)
