import math

import numpy as np
import pytest

from app.core.errors import (
    CausalDegeneracyError,
    DomainError,
    ImmersionDegeneracyError,
    NonIsothermalError,
)
from app.model.domain import RectangleDomain
from app.model.patch import DerivativeMode, ParametricPatch
from app.services.catalog import CatalogService
from app.services.geometry import GeometryService


def _graph(*components):
    def position(u, v):
        return np.stack(np.broadcast_arrays(*(c(u, v) for c in components)), axis=-1)

    return ParametricPatch(RectangleDomain(u0=0, u1=1, v0=0, v1=1), position)


def test_evaluate_derivatives_plane():
    patch = CatalogService.build("planar-disk").patch
    X, X_u, X_v, X_uu, X_uv, X_vv = GeometryService.evaluate_derivatives(patch, 0.5, 0.25)
    assert X.to_array() == pytest.approx([0.5, 0.25, 0.0])
    assert X_u.to_array() == pytest.approx([1.0, 0.0, 0.0])
    assert X_v.to_array() == pytest.approx([0.0, 1.0, 0.0])
    assert X_uu.to_array() == pytest.approx([0.0, 0.0, 0.0])


def test_evaluate_outside_domain():
    patch = CatalogService.build("planar-disk").patch
    with pytest.raises(DomainError):
        GeometryService.evaluate_derivatives(patch, 2.0, 0.0)


def test_plane_is_umbilic_and_flat():
    patch = CatalogService.build("planar-disk").patch
    data = GeometryService.fundamental_data(patch, 0.1, -0.2)
    assert (data.E, data.F, data.G) == pytest.approx((1.0, 0.0, 1.0))
    assert (data.e, data.f, data.g) == pytest.approx((0.0, 0.0, 0.0))
    assert data.normal.to_array() == pytest.approx([0.0, 0.0, 1.0])
    assert data.H == pytest.approx(0.0)
    assert data.umbilic
    assert data.lambda2 == pytest.approx(1.0)


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
def test_hyperbolic_cap_curvatures(c):
    patch = CatalogService.build("hyperbolic-cap", c=c).patch
    for u, v in ((0.0, 0.0), (0.2, -0.1), (-0.3, 0.25)):
        data = GeometryService.fundamental_data(patch, u, v)
        X = GeometryService.evaluate_derivatives(patch, u, v)[0].to_array()
        assert data.kappa1 == pytest.approx(1 / c, abs=1e-6)
        assert data.kappa2 == pytest.approx(1 / c, abs=1e-6)
        assert abs(data.kappa1 - data.kappa2) < 1e-8
        assert data.H == pytest.approx(1 / c, abs=1e-6)
        assert data.normal.to_array() == pytest.approx(X / c, abs=1e-9)


def test_catenoid_is_maximal():
    patch = CatalogService.build("lorentzian-catenoid").patch
    data = GeometryService.fundamental_data(patch, 1.0, 0.0)
    assert data.H == pytest.approx(0.0, abs=1e-12)
    assert data.kappa1 == pytest.approx(-data.kappa2)
    assert data.kappa1 > 0
    expected = np.array([1.0, 0.0, math.cosh(1.0)]) / math.sinh(1.0)
    assert data.normal.to_array() == pytest.approx(expected)
    assert not data.umbilic


def test_finite_differences_match_analytic():
    patch = CatalogService.build("lorentzian-catenoid").patch
    fd = patch.with_finite_differences()
    assert fd.mode == DerivativeMode.FINITE_DIFFERENCE
    for u, v in ((1.0, 0.3), (0.5, 0.0), (1.5, 6.0)):
        exact = GeometryService.fundamental_data(patch, u, v)
        approx = GeometryService.fundamental_data(fd, u, v)
        assert approx.H == pytest.approx(exact.H, abs=1e-5)
        assert approx.kappa1 == pytest.approx(exact.kappa1, rel=1e-4)
        assert approx.normal.to_array() == pytest.approx(exact.normal.to_array(), abs=1e-5)


def test_spacelike_check_fails_for_timelike_graph():
    patch = _graph(lambda u, v: u, lambda u, v: v, lambda u, v: 2 * u)
    report = GeometryService.spacelike_check(patch, grid=9)
    assert not report.passed
    assert report.min_metric_det == pytest.approx(-3.0)
    with pytest.raises(CausalDegeneracyError):
        GeometryService.fundamental_data(patch, 0.5, 0.5)


def test_spacelike_check_passes_on_catalog_surfaces():
    for name in ("planar-disk", "hyperbolic-cap", "truncated-catenoid"):
        report = GeometryService.spacelike_check(CatalogService.build(name).patch, grid=17)
        assert report.passed
        assert report.min_metric_det > 0


def test_degenerate_immersion():
    patch = _graph(lambda u, v: u + v, lambda u, v: u + v, lambda u, v: 0 * u)
    with pytest.raises(ImmersionDegeneracyError):
        GeometryService.fundamental_data(patch, 0.5, 0.5)


def test_isothermal_residual():
    stretched = _graph(lambda u, v: 2 * u, lambda u, v: v, lambda u, v: 0 * u)
    assert GeometryService.isothermal_residual(stretched, grid=9) == pytest.approx(0.75)
    assert not GeometryService.is_isothermal(stretched)
    with pytest.raises(NonIsothermalError):
        GeometryService.require_isothermal(stretched)
    cap = CatalogService.build("hyperbolic-cap").patch
    assert GeometryService.isothermal_residual(cap, grid=33) < 1e-9
    assert GeometryService.is_isothermal(cap)


def test_catenoid_mean_curvature_at_random_points():
    rng = np.random.default_rng(2024)
    u = rng.uniform(0.5, 1.5, 100)
    v = rng.uniform(0.0, 2 * math.pi, 100)
    patch = CatalogService.build("lorentzian-catenoid").patch
    H = GeometryService.fundamental_field(patch, u, v).H
    assert H.shape == (100,)
    assert np.max(np.abs(H)) < 1e-6
