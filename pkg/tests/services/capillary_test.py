import math

import numpy as np
import pytest

from app.core.errors import CausalClassError, FrameInconsistencyError, OffSurfaceError, VertexError
from app.geometry.lorentz import minkowski_inner, mixed_angle, timelike_angle
from app.model.support import DeSitter, HyperbolicPlane, SpacelikePlane, TimelikePlane
from app.schema.capillary import Verdict
from app.schema.vector import CausalClass
from app.services.capillary import BoundaryComponent, CapillaryService
from app.services.catalog import CatalogService


def _lorentz_transform(rng):
    """A random proper orthochronous Lorentz transformation."""

    def rotation(phi):
        c, s = math.cos(phi), math.sin(phi)
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])

    a = rng.uniform(-1.5, 1.5)
    boost = np.array([[math.cosh(a), 0.0, math.sinh(a)], [0.0, 1.0, 0.0], [math.sinh(a), 0.0, math.cosh(a)]])
    return rotation(rng.uniform(0, 2 * math.pi)) @ boost @ rotation(rng.uniform(0, 2 * math.pi))


def test_support_normal():
    n = CapillaryService.support_normal(SpacelikePlane.horizontal(1.0), (3.0, 4.0, 1.0))
    assert n.to_array() == pytest.approx([0.0, 0.0, 1.0])
    n = CapillaryService.support_normal(HyperbolicPlane(c=1.0), (0.0, 0.0, 1.0))
    assert n.to_array() == pytest.approx([0.0, 0.0, 1.0])
    n = CapillaryService.support_normal(DeSitter(c=1.0), (1.0, 0.0, 0.0))
    assert n.to_array() == pytest.approx([1.0, 0.0, 0.0])
    n = CapillaryService.support_normal(TimelikePlane(normal=(0.0, 2.0, 0.0)), (5.0, 0.0, 3.0))
    assert n.to_array() == pytest.approx([0.0, 1.0, 0.0])


def test_support_normal_off_surface():
    with pytest.raises(OffSurfaceError):
        CapillaryService.support_normal(SpacelikePlane.horizontal(1.0), (0.0, 0.0, 2.0))


def test_planar_disk_frame():
    patch = CatalogService.build("planar-disk").patch
    frame = CapillaryService.boundary_frame(patch, (1.0, 0.0))
    assert frame.tau.to_array() == pytest.approx([0.0, 1.0, 0.0])
    assert frame.normal.to_array() == pytest.approx([0.0, 0.0, 1.0])
    assert frame.conormal.to_array() == pytest.approx([-1.0, 0.0, 0.0])
    assert CapillaryService.boundary_frame(patch, (1.0, 0.0), orientation=1) == frame
    with pytest.raises(FrameInconsistencyError):
        CapillaryService.boundary_frame(patch, (1.0, 0.0), orientation=-1)


def test_frame_at_vertex_needs_an_edge():
    patch = CatalogService.build("truncated-catenoid").patch
    with pytest.raises(VertexError):
        CapillaryService.boundary_frame(patch, (0.5, 0.0))
    frame = CapillaryService.boundary_frame(patch, (0.5, 0.0), edge="theta-start")
    assert minkowski_inner(frame.conormal.to_array(), frame.conormal.to_array()) == pytest.approx(1.0)


def test_contact_angle_at_a_cap_boundary_point():
    entry = CatalogService.build("hyperbolic-cap", t_max=0.8)
    r = math.tanh(0.4)
    x = entry.patch.position(r, 0.0)
    frame = CapillaryService.boundary_frame(entry.patch, (r, 0.0))
    beta = CapillaryService.contact_angle(frame, entry.supports["circle"], x)
    assert beta == pytest.approx(0.8, abs=1e-8)


def test_hyperbolic_cap_contact_angle():
    t_max = 1.0
    patch = CatalogService.build("hyperbolic-cap", t_max=t_max).patch
    component = BoundaryComponent("circle", SpacelikePlane.horizontal(math.cosh(t_max)), samples=32)
    report = CapillaryService.capillary_constancy_check(patch, component)
    assert report.verdict == Verdict.CAPILLARY
    assert report.beta_mean == pytest.approx(t_max, abs=1e-6)
    assert report.beta_spread < 1e-8
    assert len(report.beta_profile) == 32


def test_de_sitter_disk_meets_orthogonally():
    entry = CatalogService.build("de-sitter-disk")
    component = BoundaryComponent("circle", entry.supports["circle"], samples=32)
    report = CapillaryService.capillary_constancy_check(entry.patch, component)
    assert report.verdict == Verdict.CAPILLARY
    assert report.beta_mean == pytest.approx(0.0, abs=1e-9)


def test_de_sitter_shifted_cap():
    entry = CatalogService.build("de-sitter-shifted-cap")
    component = BoundaryComponent("circle", entry.supports["circle"], samples=32)
    report = CapillaryService.capillary_constancy_check(entry.patch, component)
    assert report.verdict == Verdict.CAPILLARY
    assert report.beta_mean == pytest.approx(math.asinh(0.125), abs=1e-6)


def test_truncated_catenoid_edges_are_capillary():
    entry = CatalogService.build("truncated-catenoid")
    expected = {
        "theta-start": 0.0,
        "outer": math.acosh(1 / math.tanh(1.5)),
        "theta-end": 0.0,
        "inner": math.acosh(1 / math.tanh(0.5)),
    }
    for edge, beta in expected.items():
        component = BoundaryComponent(edge, entry.supports[edge], samples=32)
        report = CapillaryService.capillary_constancy_check(entry.patch, component)
        assert report.verdict == Verdict.CAPILLARY, edge
        assert report.beta_mean == pytest.approx(beta, abs=1e-6), edge
        assert CapillaryService.joachimsthal_check(entry.patch, component) <= 1e-6


def test_tilted_cut_is_not_capillary():
    entry = CatalogService.build("tilted-cut-negative")
    component = BoundaryComponent("left", entry.supports["left"], samples=32)
    report = CapillaryService.capillary_constancy_check(entry.patch, component)
    assert report.verdict == Verdict.NOT_CONSTANT_ANGLE
    assert report.beta_spread > 1e-3
    assert report.joachimsthal_max >= 1e-3


def test_edge_off_the_support():
    patch = CatalogService.build("hyperbolic-cap").patch
    with pytest.raises(OffSurfaceError):
        CapillaryService.capillary_constancy_check(patch, BoundaryComponent("circle", SpacelikePlane.horizontal(5.0)))
    with pytest.raises(ValueError):
        CapillaryService.capillary_constancy_check(
            patch, BoundaryComponent("circle", SpacelikePlane.horizontal(math.cosh(1.0)), samples=8)
        )


def test_trihedra_spacelike_support():
    rng = np.random.default_rng(11)
    for _ in range(200):
        L = _lorentz_transform(rng)
        tau, n_sigma = L @ np.array([1.0, 0.0, 0.0]), L @ np.array([0.0, 0.0, 1.0])
        beta = rng.uniform(0.05, 3.0)
        nu, N = CapillaryService.trihedra_roundtrip(beta, tau, n_sigma, CausalClass.SPACELIKE)
        assert minkowski_inner(nu, nu) == pytest.approx(1.0)
        assert minkowski_inner(N, N) == pytest.approx(-1.0)
        assert minkowski_inner(nu, N) == pytest.approx(0.0, abs=1e-9)
        assert minkowski_inner(N, n_sigma) == pytest.approx(-math.cosh(beta))
        assert timelike_angle(N, n_sigma) == pytest.approx(beta, abs=1e-6)


def test_trihedra_timelike_support():
    rng = np.random.default_rng(12)
    for _ in range(200):
        L = _lorentz_transform(rng)
        tau, n_sigma = L @ np.array([0.0, 1.0, 0.0]), L @ np.array([1.0, 0.0, 0.0])
        beta = rng.uniform(0.0, 3.0)
        nu, N = CapillaryService.trihedra_roundtrip(beta, tau, n_sigma, CausalClass.TIMELIKE)
        assert minkowski_inner(nu, nu) == pytest.approx(1.0)
        assert minkowski_inner(N, N) == pytest.approx(-1.0)
        assert N[2] > 0
        assert mixed_angle(n_sigma, N) == pytest.approx(beta, abs=1e-9)


def test_trihedra_rejects_bad_input():
    with pytest.raises(ValueError):
        CapillaryService.trihedra_roundtrip(-0.1, (1, 0, 0), (0, 0, 1), CausalClass.SPACELIKE)
    with pytest.raises(CausalClassError):
        CapillaryService.trihedra_roundtrip(0.5, (1, 0, 0), (0, 1, 0), CausalClass.SPACELIKE)
    with pytest.raises(CausalClassError):
        CapillaryService.trihedra_roundtrip(0.5, (1, 0, 0), (0, 0, 1), CausalClass.TIMELIKE)
    with pytest.raises(CausalClassError):
        CapillaryService.trihedra_roundtrip(0.5, (1, 0, 0), (0, 1, 1), CausalClass.LIGHTLIKE)
