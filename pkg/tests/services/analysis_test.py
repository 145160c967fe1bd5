import numpy as np
import pytest

from app.core.config import settings
from app.core.errors import CausalDegeneracyError, SpecFormatError, UnknownSurfaceError
from app.model.catalog import CatalogEntry
from app.model.domain import DiskDomain, RectangleDomain
from app.model.patch import DerivativeMode, ParametricPatch
from app.schema.report import Expectation, Provenance
from app.schema.trace import Family, StopReason, TraceConfig
from app.services.analysis import AnalysisService
from app.services.catalog import CatalogService

SPEC = """
# cap with a steeper rim
name = hyperbolic-cap
params.c = 2
domain.t_max = 1.5   # rim height 2 cosh(1.5)
grid = 33
fd_step = 1e-3
supports.circle = skip
tol.capillary-spread = 1e-3
"""


def test_parse_spec():
    spec = AnalysisService.parse_spec(SPEC)
    assert spec.name == "hyperbolic-cap"
    assert spec.params == {"c": 2.0, "t_max": 1.5}
    assert spec.grid == 33
    assert spec.fd_step == pytest.approx(1e-3)
    assert spec.skip_supports == ["circle"]
    assert spec.tolerances == {"capillary-spread": 1e-3}


def test_parse_spec_keeps_text_values():
    spec = AnalysisService.parse_spec("name=de-sitter-disk\nparams.variant=shifted-cap\n")
    assert spec.params == {"variant": "shifted-cap"}


@pytest.mark.parametrize(
    "text",
    [
        "name hyperbolic-cap",
        "name=a\nname=b",
        "name=a\ncolor=red",
        "name=a\ntol.speed=1",
        "name=a\ngrid=many",
        "name=a\nsupports.circle=keep",
        "name=a\nparams.c=1\ndomain.c=2",
        "params.c=1",
        "name=",
    ],
)
def test_parse_spec_errors(text):
    with pytest.raises(SpecFormatError):
        AnalysisService.parse_spec(text)


def test_resolve(tmp_path):
    path = tmp_path / "cap.spec"
    path.write_text(SPEC, encoding="utf-8")
    assert AnalysisService.resolve(str(path)).grid == 33
    assert AnalysisService.resolve("planar-disk").name == "planar-disk"


def test_settings_for():
    spec = AnalysisService.parse_spec(SPEC)
    config = AnalysisService.settings_for(spec)
    assert config.GRID == 33
    assert config.FD_STEP == pytest.approx(1e-3)
    assert config.CAPILLARY_SPREAD_TOL == pytest.approx(1e-3)
    assert settings.GRID == 129

    config = AnalysisService.settings_for(spec, grid=17, tolerances={"capillary-spread": 1e-2, "cr": None})
    assert config.GRID == 17
    assert config.CAPILLARY_SPREAD_TOL == pytest.approx(1e-2)
    assert config.CR_TOL == settings.CR_TOL

    with pytest.raises(SpecFormatError):
        AnalysisService.settings_for(spec, grid=3)


def test_entry_for():
    spec = AnalysisService.parse_spec(SPEC)
    entry, config = AnalysisService.prepare(spec)
    assert entry.params["c"] == 2.0
    assert entry.supports == {}
    assert entry.patch.mode == DerivativeMode.FINITE_DIFFERENCE
    assert entry.patch.fd_step == pytest.approx(1e-3)
    assert config.GRID == 33


def test_entry_for_errors():
    with pytest.raises(SpecFormatError):
        AnalysisService.entry_for(AnalysisService.parse_spec("name=planar-disk\nparams.c=1"))
    with pytest.raises(SpecFormatError):
        AnalysisService.entry_for(AnalysisService.parse_spec("name=planar-disk\nsupports.circle=skip"))
    with pytest.raises(UnknownSurfaceError):
        AnalysisService.entry_for(AnalysisService.parse_spec("name=torus"))


def test_default_starts():
    starts = AnalysisService.default_starts(DiskDomain(radius=1.0), count=10)
    assert len(starts) == 10
    assert starts[0] == pytest.approx((-0.6, -0.6))
    assert all(np.hypot(*p) < 1 for p in starts)


def test_trace_catenoid():
    entry = CatalogService.build("lorentzian-catenoid")
    traces = AnalysisService.trace(entry, [Family.SECOND], [(1.0, 0.3), (0.8, 2.0)], TraceConfig())
    assert len(traces) == 2
    assert all(t.stop_reason == StopReason.BOUNDARY for t in traces)


def test_analyze_planar_disk():
    entry, config = AnalysisService.prepare(AnalysisService.resolve("planar-disk"), grid=17)
    report = AnalysisService.analyze(entry, config)
    assert report.spacelike
    assert report.isothermal
    assert report.cr_residual == 0.0
    assert report.everywhere_umbilic
    assert report.index_sum is None
    assert report.capillary == []
    assert report.passed
    assert set(report.timings) == {"geometry", "hopf", "index", "capillary", "expectations"}


def test_analyze_hyperbolic_cap():
    entry, config = AnalysisService.prepare(AnalysisService.resolve("hyperbolic-cap"), grid=33)
    report = AnalysisService.analyze(entry, config)
    assert report.everywhere_umbilic
    assert [c.edge for c in report.capillary] == ["circle"]
    failed = [c.name for c in report.expectations if not c.passed]
    assert failed == []
    beta = next(c for c in report.expectations if c.metric == "beta:circle")
    assert beta.actual == pytest.approx(1.0, abs=1e-6)


def test_analyze_rejects_timelike_surface():
    def position(u, v):
        return np.stack(np.broadcast_arrays(u, v, 2 * u), axis=-1)

    patch = ParametricPatch(RectangleDomain(u0=0, u1=1, v0=0, v1=1), position, name="steep")
    with pytest.raises(CausalDegeneracyError):
        AnalysisService.analyze(CatalogEntry(name="steep", patch=patch), settings.with_overrides(GRID=9))


def _expectation(expected, comparison="eq", tolerance=0.0, metric="index_sum"):
    return Expectation(
        name="x",
        metric=metric,
        expected=expected,
        tolerance=tolerance,
        provenance=Provenance.DERIVED,
        comparison=comparison,
    )


def test_compare():
    compare = AnalysisService._compare
    assert compare(_expectation(1.0, tolerance=0.05), 0.97)
    assert not compare(_expectation(1.0, tolerance=0.05), 0.9)
    assert compare(_expectation(1e-6, "le"), 1e-7)
    assert not compare(_expectation(1e-3, "ge"), 1e-4)
    assert compare(_expectation(True), True)
    assert not compare(_expectation("Capillary"), "NotConstantAngle")
    assert compare(_expectation(0), 0)


def test_unknown_metric():
    entry, config = AnalysisService.prepare(AnalysisService.resolve("planar-disk"), grid=17)
    report = AnalysisService.analyze(entry, config)
    with pytest.raises(SpecFormatError):
        AnalysisService.check_expectation(_expectation(1.0, metric="volume"), entry, report)
