import math

import numpy as np
import pytest

from app.core.errors import DomainError, EverywhereUmbilicError, UmbilicPointError
from app.geometry.forms import forms_from_coefficients, fundamental_field
from app.schema.trace import Family, StopReason, TraceConfig
from app.services.catalog import CatalogService
from app.services.curvature_lines import CurvatureLineService


def test_principal_directions_from_coefficients():
    fld = forms_from_coefficients(E=1.0, F=0.0, G=1.0, e=1.0, f=0.0, g=-1.0)
    d1, d2 = fld.principal_directions()
    assert np.allclose(d1, (0.0, 1.0))
    assert np.allclose(d2, (1.0, 0.0))
    assert float(fld.kappa1) == pytest.approx(1.0)
    assert float(fld.kappa2) == pytest.approx(-1.0)


def test_umbilic_coefficients_have_no_directions():
    fld = forms_from_coefficients(E=2.0, F=0.0, G=2.0, e=1.0, f=0.0, g=1.0)
    d1, d2 = fld.principal_directions()
    assert np.isnan(d1).all() and np.isnan(d2).all()


def test_line_field_is_orthogonal():
    patch = CatalogService.build("umbilic-test-graph").patch
    d1, d2 = CurvatureLineService.line_field(patch, 0.2, 0.1)
    fld = fundamental_field(patch, 0.2, 0.1)
    assert float(fld.first_form(d1, d2)) == pytest.approx(0.0, abs=1e-12)
    assert float(fld.first_form(d1, d1)) == pytest.approx(1.0)


def test_line_field_at_umbilic():
    patch = CatalogService.build("umbilic-test-graph").patch
    with pytest.raises(UmbilicPointError):
        CurvatureLineService.line_field(patch, 0.0, 0.0)


def test_catenoid_meridian():
    patch = CatalogService.build("lorentzian-catenoid").patch
    trace = CurvatureLineService.trace_curvature_line(patch, (1.0, 0.3), Family.SECOND)
    assert trace.stop_reason == StopReason.BOUNDARY
    us = np.array([p[0] for p in trace.points_param])
    vs = np.array([p[1] for p in trace.points_param])
    assert np.all(np.diff(us) > 0)
    assert us[-1] == pytest.approx(1.5, abs=1e-6)
    assert np.allclose(vs, 0.3, atol=1e-9)
    assert trace.residual < 1e-8


def test_catenoid_meridian_backwards():
    patch = CatalogService.build("lorentzian-catenoid").patch
    config = TraceConfig(direction=-1)
    trace = CurvatureLineService.trace_curvature_line(patch, (1.0, 0.3), Family.SECOND, config)
    assert trace.stop_reason == StopReason.BOUNDARY
    assert trace.points_param[-1][0] == pytest.approx(0.5, abs=1e-6)


def test_catenoid_circle():
    patch = CatalogService.build("lorentzian-catenoid").patch
    config = TraceConfig(max_steps=100)
    trace = CurvatureLineService.trace_curvature_line(patch, (1.0, 0.3), Family.FIRST, config)
    assert trace.stop_reason == StopReason.MAX_STEPS
    assert trace.steps == 100
    assert np.allclose([p[0] for p in trace.points_param], 1.0, atol=1e-9)
    assert np.allclose([x.x3 for x in trace.points_ambient], 1.0, atol=1e-9)


def test_totally_umbilic_surface():
    patch = CatalogService.build("planar-disk").patch
    with pytest.raises(EverywhereUmbilicError):
        CurvatureLineService.trace_curvature_line(patch, (0.0, 0.0), Family.FIRST)


def test_umbilic_start():
    patch = CatalogService.build("umbilic-test-graph").patch
    with pytest.raises(UmbilicPointError):
        CurvatureLineService.trace_curvature_line(patch, (0.0, 0.0), Family.FIRST)


def test_start_outside_domain():
    patch = CatalogService.build("lorentzian-catenoid").patch
    with pytest.raises(DomainError):
        CurvatureLineService.trace_curvature_line(patch, (2.0, 0.0), Family.FIRST)


def test_catenoid_trace_reverses_to_its_seed():
    patch = CatalogService.build("lorentzian-catenoid").patch
    seed = (0.8, 1.0)
    forward = CurvatureLineService.trace_curvature_line(patch, seed, Family.SECOND)
    assert forward.stop_reason == StopReason.BOUNDARY
    assert forward.points_param[-1][0] == pytest.approx(1.5, abs=1e-6)

    back = CurvatureLineService.trace_curvature_line(
        patch, forward.points_param[-1], Family.SECOND, TraceConfig(direction=-1)
    )
    us = np.array([p[0] for p in back.points_param])
    vs = np.array([p[1] for p in back.points_param])
    assert back.stop_reason == StopReason.BOUNDARY
    assert np.all(np.diff(us) < 0)
    assert np.allclose(vs, seed[1], atol=1e-9)
    # the reversed trace runs back through the seed before leaving the domain
    assert np.min(np.abs(us - seed[0])) <= 0.5 * TraceConfig().step + 1e-9
    assert us[-1] == pytest.approx(0.5, abs=1e-6)


def test_catenoid_foliation():
    patch = CatalogService.build("lorentzian-catenoid").patch
    seeds = [(0.6 + 0.04 * k, 0.5 + 0.1 * k) for k in range(20)]
    traces = [CurvatureLineService.trace_curvature_line(patch, s, Family.SECOND) for s in seeds]
    traces += [
        CurvatureLineService.trace_curvature_line(patch, s, Family.FIRST, TraceConfig(max_steps=40))
        for s in seeds
    ]
    assert len(traces) == 40

    for trace in traces:
        params = np.array(trace.points_param)
        lam2 = fundamental_field(patch, params[:, 0], params[:, 1]).lambda2
        assert trace.residual <= 1e-6 * float(np.min(lam2))

        other = 1 if trace.family == Family.FIRST else 0
        for p, q in zip(params[:-1], params[1:]):
            m = 0.5 * (p + q)
            chord = q - p
            d = CurvatureLineService.line_field(patch, m[0], m[1])[other]
            fld = fundamental_field(patch, m[0], m[1])
            cos = abs(float(fld.first_form(chord, d))) / math.sqrt(
                float(fld.first_form(chord, chord)) * float(fld.first_form(d, d))
            )
            assert cos <= 1e-4
