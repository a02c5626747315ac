import numpy as np
import pytest

from actiflux.equations import (AcousticsParams, Advection2DSpec, BlowUpError,
                                ParameterError, ScalarSource, make_acoustics_gravity,
                                make_advection_1d)


@pytest.mark.parametrize("c,g", [(1.0, -1.0), (2.5, 9.81), (0.3, 0.0)])
def test_acoustics_eigenstructure(c, g):
    sys_ = make_acoustics_gravity(AcousticsParams(c, g))
    R, L, A = sys_.from_char, sys_.to_char, sys_.flux_matrix
    assert np.allclose(R @ L, np.eye(3), atol=1e-14)
    assert np.allclose(L @ A @ R, np.diag(sys_.speeds), atol=1e-13)
    assert sys_.max_speed == c
    assert sys_.names == ("rho", "v", "p")


def test_acoustics_source_consistency():
    sys_ = make_acoustics_gravity(AcousticsParams(1.7, -3.0))
    q = np.random.default_rng(0).normal(size=(3, 11))
    lhs = sys_.source_char(sys_.char_of(q))
    rhs = sys_.char_of(sys_.source_conserved(q))
    assert np.allclose(lhs, rhs, atol=1e-13)


def test_acoustics_unit_density_example():
    g = 2.0
    sys_ = make_acoustics_gravity(AcousticsParams(1.0, g))
    Q = sys_.char_of(np.array([1.0, 0.0, 0.0]))
    assert np.allclose(Q, [0.0, 0.0, 1.0])
    assert np.allclose(sys_.source_char(Q), [g / 2, -g / 2, 0.0])


def test_acoustics_zero_gravity_has_no_source():
    sys_ = make_acoustics_gravity(AcousticsParams(1.0, 0.0))
    q = np.random.default_rng(1).normal(size=(3, 4))
    assert np.all(sys_.source_conserved(q) == 0)
    assert np.all(sys_.source_char(sys_.char_of(q)) == 0)


@pytest.mark.parametrize("c", [0.0, -1.0])
def test_acoustics_needs_positive_c(c):
    with pytest.raises(ParameterError):
        AcousticsParams(c, 1.0)


def test_advection_flux_and_sources():
    adv = make_advection_1d(1.0, ScalarSource("linear", 7.0))
    assert float(adv.flux_conserved(np.array([3.0]))[0]) == 3.0
    assert float(adv.source_char(np.array([2.0]))[0]) == 14.0
    power = make_advection_1d(1.0, ScalarSource("power", 7.0, 3.0))
    assert float(power.source_char(np.array([2.0]))[0]) == 56.0
    assert make_advection_1d(-2.0).max_speed == 2.0


def test_scalar_source_validation():
    with pytest.raises(ParameterError):
        ScalarSource("cubic")
    with pytest.raises(ParameterError):
        ScalarSource("custom")
    with pytest.raises(ParameterError):
        ScalarSource("power", 1.0, 1.0)
    with pytest.raises(ParameterError):
        Advection2DSpec((np.nan, 0.0))


def test_custom_source():
    s = ScalarSource("custom", func=np.sin)
    assert s(0.5) == pytest.approx(np.sin(0.5))
    assert not s.has_exact_flow
    with pytest.raises(ParameterError):
        s.exact_flow(1.0, 0.1)


def _rk4(f, q, t, n=2000):
    h = t / n
    for _ in range(n):
        k1 = f(q)
        k2 = f(q + h / 2 * k1)
        k3 = f(q + h / 2 * k2)
        k4 = f(q + h * k3)
        q = q + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return q


@pytest.mark.parametrize("src,q0,t", [(ScalarSource("linear", 7.0), 1.0, 0.1),
                                      (ScalarSource("power", 7.0, 3.0), 1.0, 0.5 / 14),
                                      (ScalarSource("power", -2.0, 2.0), 0.7, 0.3),
                                      (ScalarSource("power", 1.5, 0.5), 2.0, 0.4)])
def test_exact_flow_matches_rk4(src, q0, t):
    assert src.exact_flow(q0, t) == pytest.approx(_rk4(src, q0, t), rel=1e-10)


def test_exact_flow_blow_up():
    with pytest.raises(BlowUpError):
        ScalarSource("power", 7.0, 3.0).exact_flow(1.0, 1.0 / 14)
    with pytest.raises(BlowUpError):
        ScalarSource("power", 7.0, 3.0).exact_flow(1.0, 0.2)
