import logging
import math
import time
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError

from app.core.config import Settings, settings
from app.core.errors import CausalDegeneracyError, SpecFormatError
from app.geometry.forms import fundamental_field
from app.model.catalog import CatalogEntry
from app.model.domain import PatchDomain
from app.schema.capillary import CapillaryReport
from app.schema.report import AnalysisReport, Expectation, ExpectationCheck
from app.schema.surface_spec import SurfaceSpec
from app.schema.trace import CurvatureTrace, Family, TraceConfig
from app.schema.umbilic import IndexReport, UmbilicKind, UmbilicScan
from app.services.capillary import BoundaryComponent, CapillaryService
from app.services.catalog import CatalogService
from app.services.curvature_lines import CurvatureLineService
from app.services.geometry import GeometryService
from app.services.hopf import HopfService

logger = logging.getLogger(__name__)

# short tolerance names used by spec files (tol.<name>) and CLI flags (--tol-<name>)
TOLERANCES = {
    "isothermal": "ISOTHERMAL_TOL",
    "cr": "CR_TOL",
    "umbilic": "UMBILIC_TOL",
    "index": "INDEX_TOL",
    "edge-alignment": "EDGE_ALIGNMENT_TOL",
    "capillary-spread": "CAPILLARY_SPREAD_TOL",
    "joachimsthal": "JOACHIMSTHAL_TOL",
    "umbilic-stop": "UMBILIC_STOP_TOL",
}

_VERTEX_KINDS = (UmbilicKind.VERTEX_ACUTE, UmbilicKind.VERTEX_REFLEX)


def _value(text: str) -> Union[float, str]:
    try:
        return float(text)
    except ValueError:
        return text


class _AnalysisService:
    def parse_spec(self, text: str) -> SurfaceSpec:
        """
        Parse a flat ``key=value`` surface spec; ``#`` starts a comment.

        Keys: name, params.<p>, domain.<p>, grid, fd_step, supports.<edge>=skip,
        tol.<name>.

        Raises:
            SpecFormatError: On malformed lines, duplicate or unknown keys.
        """
        fields: dict = {"params": {}, "skip_supports": [], "tolerances": {}}
        seen = set()
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = (part.strip() for part in line.partition("="))
            if not sep or not key or not value:
                raise SpecFormatError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
            if key in seen:
                raise SpecFormatError(f"line {lineno}: duplicate key {key!r}")
            seen.add(key)
            prefix, _, rest = key.partition(".")
            try:
                if key == "name":
                    fields["name"] = value
                elif key == "grid":
                    fields["grid"] = int(value)
                elif key == "fd_step":
                    fields["fd_step"] = float(value)
                elif prefix in ("params", "domain") and rest:
                    if rest in fields["params"]:
                        raise SpecFormatError(f"line {lineno}: {rest!r} given twice")
                    fields["params"][rest] = _value(value)
                elif prefix == "supports" and rest:
                    if value != "skip":
                        raise SpecFormatError(f"line {lineno}: supports.{rest} only accepts 'skip'")
                    fields["skip_supports"].append(rest)
                elif prefix == "tol" and rest:
                    if rest not in TOLERANCES:
                        raise SpecFormatError(f"line {lineno}: unknown tolerance {rest!r}")
                    fields["tolerances"][rest] = float(value)
                else:
                    raise SpecFormatError(f"line {lineno}: unknown key {key!r}")
            except SpecFormatError:
                raise
            except ValueError as e:
                raise SpecFormatError(f"line {lineno}: bad value for {key}: {value!r}") from e
        if "name" not in fields:
            raise SpecFormatError("spec has no name")
        return SurfaceSpec(**fields)

    def resolve(self, target: str) -> SurfaceSpec:
        """A spec file path, or a bare catalog name with default parameters."""
        path = Path(target)
        if path.is_file():
            return self.parse_spec(path.read_text(encoding="utf-8"))
        return SurfaceSpec(name=target)

    def settings_for(
        self,
        spec: SurfaceSpec,
        base: Optional[Settings] = None,
        grid: Optional[int] = None,
        fd_step: Optional[float] = None,
        tolerances: Optional[dict[str, float]] = None,
    ) -> Settings:
        """Spec values over ``base``, explicit arguments (CLI flags) over both."""
        base = base or settings
        overrides = {"GRID": spec.grid, "FD_STEP": spec.fd_step}
        overrides.update({TOLERANCES[k]: v for k, v in spec.tolerances.items()})
        explicit = {TOLERANCES[k]: v for k, v in (tolerances or {}).items() if v is not None}
        explicit.update({"GRID": grid, "FD_STEP": fd_step})
        overrides.update({k: v for k, v in explicit.items() if v is not None})
        try:
            return base.with_overrides(**overrides)
        except ValidationError as e:
            raise SpecFormatError(f"invalid configuration: {e.errors()[0]['msg']}") from e

    def entry_for(self, spec: SurfaceSpec, config: Optional[Settings] = None) -> CatalogEntry:
        cfg = config or settings
        entry = CatalogService.build(spec.name, **spec.params)
        missing = set(spec.skip_supports) - set(entry.supports)
        if missing:
            raise SpecFormatError(f"{spec.name} has no support on {', '.join(sorted(missing))}")
        patch = entry.patch
        if cfg.FD_STEP is not None:
            patch = patch.with_finite_differences(cfg.FD_STEP)
        supports = {k: s for k, s in entry.supports.items() if k not in spec.skip_supports}
        return replace(entry, patch=patch, supports=supports)

    def prepare(
        self,
        spec: SurfaceSpec,
        grid: Optional[int] = None,
        fd_step: Optional[float] = None,
        tolerances: Optional[dict[str, float]] = None,
    ) -> tuple[CatalogEntry, Settings]:
        config = self.settings_for(spec, grid=grid, fd_step=fd_step, tolerances=tolerances)
        return self.entry_for(spec, config), config

    def umbilics(self, entry: CatalogEntry, config: Optional[Settings] = None) -> UmbilicScan:
        cfg = config or settings
        src = HopfService.source(entry.patch, cfg)
        cell = cfg.cell_size(src.domain.extent)
        return HopfService.find_umbilics(src, cfg.GRID, cfg.MERGE_RADIUS_CELLS * cell, cfg.UMBILIC_TOL)

    def index(self, entry: CatalogEntry, config: Optional[Settings] = None) -> IndexReport:
        return HopfService.index_report(entry.patch, config or settings)

    def capillary(self, entry: CatalogEntry, config: Optional[Settings] = None) -> list[CapillaryReport]:
        cfg = config or settings
        return [
            CapillaryService.capillary_constancy_check(
                entry.patch,
                BoundaryComponent(edge=edge, support=support, samples=cfg.CAPILLARY_SAMPLES),
                cfg,
            )
            for edge, support in entry.supports.items()
        ]

    @staticmethod
    def default_starts(domain: PatchDomain, count: int = 10) -> list[tuple[float, float]]:
        """Starts spread along the bounding-box diagonal, kept well inside the domain."""
        u0, u1, v0, v1 = domain.bounding_box()
        margin = 1e-3 * domain.extent
        starts = []
        for t in np.linspace(0.2, 0.8, count):
            p = (u0 + t * (u1 - u0), v0 + t * (v1 - v0))
            if bool(domain.contains(*p)) and domain.boundary_distance(p) > margin:
                starts.append((float(p[0]), float(p[1])))
        return starts

    def trace(
        self,
        entry: CatalogEntry,
        families: Sequence[Family] = (Family.FIRST, Family.SECOND),
        starts: Optional[Iterable[tuple[float, float]]] = None,
        config: Optional[TraceConfig] = None,
        count: int = 10,
    ) -> list[CurvatureTrace]:
        """One trace per (family, start); starts default to ``count`` diagonal points."""
        starts = list(starts) if starts is not None else self.default_starts(entry.patch.domain, count)
        return [
            CurvatureLineService.trace_curvature_line(entry.patch, start, family, config)
            for family in families
            for start in starts
        ]

    def analyze(self, entry: CatalogEntry, config: Optional[Settings] = None) -> AnalysisReport:
        """
        Run every check on a catalog surface and evaluate its expected values.

        Raises:
            CausalDegeneracyError: If the surface is not spacelike on the grid.
        """
        cfg = config or settings
        patch = entry.patch
        timings: dict[str, float] = {}

        @contextmanager
        def stage(name):
            start = time.perf_counter()
            yield
            timings[name] = time.perf_counter() - start
            logger.info("%s: %s done in %.2fs", entry.name, name, timings[name])

        with stage("geometry"):
            spacelike = GeometryService.spacelike_check(patch, cfg.GRID)
            if not spacelike.passed:
                raise CausalDegeneracyError(
                    f"{entry.name} is not spacelike at ({spacelike.worst_u:.6g}, {spacelike.worst_v:.6g})"
                )
            iso = GeometryService.isothermal_residual(patch, cfg.GRID)
            isothermal = GeometryService.is_isothermal(patch, cfg.ISOTHERMAL_TOL)
        with stage("hopf"):
            cr = HopfService.cr_residual(patch, cfg.GRID) if isothermal else None
        with stage("index"):
            index = self.index(entry, cfg)
        with stage("capillary"):
            capillary = self.capillary(entry, cfg)

        report = AnalysisReport(
            surface=entry.name,
            params=entry.params,
            grid=cfg.GRID,
            derivative_mode=patch.mode.value,
            spacelike_min=spacelike.min_metric_det,
            spacelike=spacelike.passed,
            isothermal_residual=iso,
            isothermal=isothermal,
            cr_residual=cr,
            everywhere_umbilic=index.everywhere_umbilic,
            umbilics=index.records,
            index_sum=None if index.everywhere_umbilic else index.index_sum,
            euler_char=index.euler_characteristic,
            index_consistent=index.consistent,
            skipped=index.skipped,
            capillary=capillary,
        )
        with stage("expectations"):
            checks = [self.check_expectation(x, entry, report) for x in entry.expectations]
        report = report.model_copy(update={"expectations": checks, "timings": timings})
        failed = [c.name for c in checks if not c.passed]
        if failed:
            logger.warning("%s: failed expectations: %s", entry.name, ", ".join(failed))
        return report

    def check_expectation(self, expectation: Expectation, entry: CatalogEntry, report: AnalysisReport) -> ExpectationCheck:
        actual = self._measure(expectation, entry, report)
        return ExpectationCheck(
            **expectation.model_dump(),
            actual=actual,
            passed=actual is not None and self._compare(expectation, actual),
        )

    @staticmethod
    def _compare(expectation: Expectation, actual) -> bool:
        expected = expectation.expected
        if isinstance(expected, (bool, str)):
            return actual == expected
        if expectation.comparison == "le":
            return actual <= expected
        if expectation.comparison == "ge":
            return actual >= expected
        return abs(actual - expected) <= expectation.tolerance

    @staticmethod
    def _worst(values, expectation: Expectation):
        values = [float(x) for x in values]
        if not values:
            return None
        if expectation.comparison == "le":
            return max(values)
        if expectation.comparison == "ge":
            return min(values)
        return max(values, key=lambda x: abs(x - float(expectation.expected)))

    def _measure(self, expectation: Expectation, entry: CatalogEntry, report: AnalysisReport):
        metric = expectation.metric
        if ":" in metric:
            kind, edge = metric.split(":", 1)
            found = next((c for c in report.capillary if c.edge == edge), None)
            if found is None:
                return None
            return {"beta": found.beta_mean, "verdict": found.verdict.value, "joachimsthal": found.joachimsthal_max}[kind]
        if metric in ("mean_curvature", "kappa"):
            U, V, mask = entry.patch.domain.grid(min(report.grid, 65))
            fld = fundamental_field(entry.patch, U[mask], V[mask])
            samples = [fld.H] if metric == "mean_curvature" else [fld.kappa1, fld.kappa2]
            values = np.concatenate(samples)
            return self._worst(values[np.isfinite(values)], expectation)
        if metric == "everywhere_umbilic":
            return report.everywhere_umbilic
        if metric == "isothermal_residual":
            return report.isothermal_residual
        if metric == "index_sum":
            return report.index_sum
        interior = [r for r in report.umbilics if r.kind == UmbilicKind.INTERIOR]
        vertices = [r for r in report.umbilics if r.kind in _VERTEX_KINDS]
        if metric == "umbilic_count":
            return len(interior)
        if metric == "umbilic_distance":
            return self._worst([math.hypot(r.u, r.v) for r in interior], expectation)
        if metric == "interior_index":
            return self._worst([r.index for r in interior], expectation)
        if metric == "vertex_count":
            return len(vertices)
        if metric == "vertex_angle":
            return self._worst([r.angle for r in vertices], expectation)
        if metric == "vertex_index":
            return self._worst([r.index for r in vertices], expectation)
        raise SpecFormatError(f"unknown expectation metric {metric!r}")


AnalysisService = _AnalysisService()
