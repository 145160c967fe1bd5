import numpy as np
import pytest

from app.core.errors import CausalClassError, NonFiniteError
from app.geometry.lorentz import (
    causal_class,
    future,
    is_future_directed,
    lorentz_cross,
    lorentz_norm,
    minkowski_inner,
    mixed_angle,
    timelike_angle,
    unit,
)
from app.schema.vector import CausalClass, LVector3


def test_minkowski_inner():
    assert minkowski_inner((1, 2, 2), (1, 2, 2)) == pytest.approx(1.0)
    assert minkowski_inner(LVector3(x1=0, x2=0, x3=1), (0, 0, 1)) == pytest.approx(-1.0)


def test_minkowski_inner_broadcasts():
    a = np.array([[1.0, 0, 0], [0, 0, 2.0]])
    assert np.allclose(minkowski_inner(a, a), [1.0, -4.0])


def test_causal_class():
    assert causal_class((1, 0, 2)) == CausalClass.TIMELIKE
    assert causal_class((1, 0, 1)) == CausalClass.LIGHTLIKE
    assert causal_class((1, 1, 0)) == CausalClass.SPACELIKE
    assert causal_class((0, 0, 0)) == CausalClass.SPACELIKE


def test_lorentz_cross_basis():
    assert np.allclose(lorentz_cross((1, 0, 0), (0, 1, 0)), (0, 0, -1))
    assert np.allclose(lorentz_cross((0, 1, 0), (0, 0, 1)), (1, 0, 0))


def test_lorentz_cross_matches_determinant():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        a, b, w = rng.normal(size=(3, 3))
        det = np.linalg.det(np.stack([a, b, w]))
        assert minkowski_inner(lorentz_cross(a, b), w) == pytest.approx(det, abs=1e-9)


def test_is_future_directed():
    assert is_future_directed((0, 0, 1))
    assert not is_future_directed((0.5, 0, -1))
    with pytest.raises(CausalClassError):
        is_future_directed((1, 0, 0))


def test_timelike_angle():
    assert timelike_angle((0, 0, 1), (np.sinh(1), 0, np.cosh(1))) == pytest.approx(1.0)
    assert timelike_angle((0, 0, 2), (0, 0, 5)) == pytest.approx(0.0)


def test_timelike_angle_rejects_past_or_spacelike():
    with pytest.raises(CausalClassError):
        timelike_angle((0, 0, -1), (0, 0, 1))
    with pytest.raises(CausalClassError):
        timelike_angle((1, 0, 0), (0, 0, 1))


def test_mixed_angle():
    assert mixed_angle((np.cosh(1), 0, np.sinh(1)), (0, 0, 1)) == pytest.approx(1.0)
    assert mixed_angle((1, 0, 0), (0, 0, 1)) == pytest.approx(0.0)
    with pytest.raises(CausalClassError):
        mixed_angle((0, 0, 0), (0, 0, 1))


def test_non_finite_components():
    with pytest.raises(NonFiniteError):
        minkowski_inner((np.nan, 0, 0), (1, 0, 0))


def test_unit_and_future():
    v = unit((0, 0, -3))
    assert lorentz_norm(v) == pytest.approx(1.0)
    assert np.allclose(future(v), (0, 0, 1))
    with pytest.raises(CausalClassError):
        unit((1, 0, 1))
