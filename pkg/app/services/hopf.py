import logging
import math
from typing import Optional, Sequence, Union

import numpy as np
from scipy import optimize

from app.core.config import Settings, settings
from app.core.errors import (
    DegenerateCornerError,
    DomainError,
    LineOfCurvatureError,
    SamplingDensityError,
    SingularityError,
    VertexError,
)
from app.geometry.forms import fundamental_field
from app.model.domain import PatchDomain
from app.model.field import LineFieldSource, PatchLineField
from app.model.patch import ParametricPatch
from app.schema.surface import HopfSample
from app.schema.trace import Family
from app.schema.umbilic import (
    IndexMethod,
    IndexReport,
    LocationKind,
    SkippedSingularity,
    UmbilicKind,
    UmbilicPoint,
    UmbilicRecord,
    UmbilicScan,
)
from app.services.geometry import GeometryService

logger = logging.getLogger(__name__)

Source = Union[ParametricPatch, LineFieldSource]

# |Phi| (or the umbilic gap) dipping below this fraction of its loop maximum means
# the loop runs through another singularity
_DIP_RATIO = 1e-3


def _wrap(d):
    return (d + np.pi) % (2 * np.pi) - np.pi


def _variation(angles: np.ndarray, closed: bool) -> tuple[float, float]:
    """Unwrapped total change of an angle sequence and its largest single step."""
    a = np.asarray(angles, dtype=float)
    if closed:
        a = np.append(a, a[0])
    steps = _wrap(np.diff(a))
    return float(steps.sum()), float(np.max(np.abs(steps)))


def _check_dip(magnitude: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(magnitude)):
        raise SingularityError(f"{what} is undefined on the sampling path")
    top = float(np.max(magnitude))
    if top == 0 or float(np.min(magnitude)) <= _DIP_RATIO * top:
        raise SingularityError(f"{what} nearly vanishes on the sampling path")


class _HopfService:
    def source(self, obj: Source, config: Optional[Settings] = None) -> LineFieldSource:
        if isinstance(obj, ParametricPatch):
            cfg = config or settings
            return PatchLineField(obj, GeometryService.is_isothermal(obj, cfg.ISOTHERMAL_TOL))
        return obj

    def _adaptive_total(self, sample, closed: bool, config: Settings) -> float:
        n = config.LOOP_SAMPLES
        while True:
            total, jump = _variation(sample(n), closed)
            if jump < np.pi / 2:
                return total
            if 2 * n > config.MAX_LOOP_SAMPLES:
                raise SamplingDensityError(
                    f"argument jumps by {jump:.3f} rad even at {n} samples"
                )
            logger.debug("resampling: jump %.3f rad at %d samples", jump, n)
            n *= 2

    def hopf_function(self, patch: Source, u: float, v: float) -> HopfSample:
        """
        Phi = e - g - 2 i f at a point of an isothermal chart.

        Raises:
            NonIsothermalError: If the chart's isothermal residual exceeds the gate.
        """
        if isinstance(patch, ParametricPatch):
            GeometryService.require_isothermal(patch)
            fld = fundamental_field(patch, float(u), float(v))
            return HopfSample.from_complex(complex(u, v), complex(fld.hopf), float(fld.E))
        phi = complex(patch.hopf(float(u), float(v)))
        return HopfSample.from_complex(complex(u, v), phi, 1.0)

    def hopf_loop(self, source: Source, center, radius: float, samples: int) -> list[HopfSample]:
        """Counterclockwise samples of Phi on a circle."""
        src = self.source(source)
        t = 2 * np.pi * np.arange(samples) / samples
        u = center[0] + radius * np.cos(t)
        v = center[1] + radius * np.sin(t)
        phi = src.hopf(u, v)
        return [
            HopfSample.from_complex(complex(a, b), complex(p), 1.0)
            for a, b, p in zip(u, v, phi)
        ]

    def cr_residual(self, patch: ParametricPatch, grid: int, check_isothermal: bool = True) -> float:
        """
        Normalized max |dPhi/dz-bar| over the interior grid, by centered differences.

        A chart is certified CMC when this is below the CR tolerance and it
        decreases under grid refinement.

        Raises:
            NonIsothermalError: If the chart is not isothermal and the check is on.
            SamplingDensityError: With fewer than 4 interior points per axis.
        """
        if check_isothermal:
            GeometryService.require_isothermal(patch)
        U, V, mask = patch.domain.grid(grid)
        inner = np.zeros_like(mask)
        inner[1:-1, 1:-1] = (
            mask[1:-1, 1:-1] & mask[2:, 1:-1] & mask[:-2, 1:-1] & mask[1:-1, 2:] & mask[1:-1, :-2]
        )
        if inner.any(axis=1).sum() < 4 or inner.any(axis=0).sum() < 4:
            raise SamplingDensityError("grid too coarse: fewer than 4 interior points per axis")
        fld = fundamental_field(patch, U[mask], V[mask])
        phi = np.full(U.shape, np.nan, dtype=complex)
        phi[mask] = fld.hopf
        hu = U[1, 0] - U[0, 0]
        hv = V[0, 1] - V[0, 0]
        dzbar = 0.5 * (
            (phi[2:, 1:-1] - phi[:-2, 1:-1]) / (2 * hu)
            + 1j * (phi[1:-1, 2:] - phi[1:-1, :-2]) / (2 * hv)
        )
        dzbar = np.abs(dzbar[inner[1:-1, 1:-1]])
        size = np.abs(fld.e) + np.abs(fld.f) + np.abs(fld.g)
        noise = 1e-8 * float(np.max(size)) + 1e-300
        residual = float(np.max(dzbar)) / (float(np.max(np.abs(fld.hopf))) + noise)
        logger.debug("%s: CR residual %.3e at grid %d", patch.name, residual, grid)
        return residual

    def find_umbilics(
        self,
        source: Source,
        grid: int,
        merge_radius: Optional[float] = None,
        tol: Optional[float] = None,
    ) -> UmbilicScan:
        """
        Locate umbilics as grid minima of |kappa1 - kappa2| refined by Nelder-Mead.

        Args:
            source: A patch or a line-field source.
            grid (int): Samples per axis.
            merge_radius (float): Hits closer than this are merged (default 3 cells).
            tol (float): Relative umbilic threshold, scaled by 1 + |H|.

        Returns:
            UmbilicScan: Classified points, or the everywhere-umbilic flag.
        """
        src = self.source(source)
        dom = src.domain
        tol = settings.UMBILIC_TOL if tol is None else tol
        cell = dom.extent / (grid - 1)
        merge_radius = settings.MERGE_RADIUS_CELLS * cell if merge_radius is None else merge_radius

        U, V, mask = dom.grid(grid)
        H = np.full(U.shape, np.nan)
        gap = np.full(U.shape, np.nan)
        H[mask], gap[mask] = src.curvature_gap(U[mask], V[mask])
        valid = mask & np.isfinite(gap)
        threshold = tol * (1 + np.abs(H))
        if valid.any() and np.all(gap[valid] <= threshold[valid]):
            logger.info("%s: everywhere umbilic", src.name)
            return UmbilicScan(surface=src.name, everywhere_umbilic=True)

        candidates = self._grid_minima(gap, valid, threshold, periodic=dom.v_period is not None)
        logger.debug("%s: %d umbilic candidates", src.name, len(candidates))

        hits = []
        for i, j in candidates:
            p, g, h = self._refine(src, np.array([U[i, j], V[i, j]]), cell)
            if g < tol * (1 + abs(h)):
                hits.append((g, float(p[0]), float(p[1])))

        points: list[UmbilicPoint] = []
        for g, u, v in sorted(hits):
            if dom.v_period is not None:
                v = dom.theta0 + (v - dom.theta0) % dom.v_period
            if any(math.hypot(u - q.u, v - q.v) <= merge_radius for q in points):
                continue
            loc = dom.locate((u, v), tol=0.5 * cell)
            points.append(
                UmbilicPoint(
                    u=u,
                    v=v,
                    location=LocationKind(loc.kind),
                    edge=loc.edge.name if loc.edge is not None else None,
                    vertex=loc.vertex,
                    gap=g,
                )
            )
        logger.info("%s: %d isolated umbilics", src.name, len(points))
        return UmbilicScan(surface=src.name, points=points)

    @staticmethod
    def _grid_minima(gap, valid, threshold, periodic: bool) -> list[tuple[int, int]]:
        big = np.where(valid, gap, np.inf)
        padded = np.pad(big, 1, constant_values=np.inf)
        if periodic:
            padded[1:-1, 0] = big[:, -1]
            padded[1:-1, -1] = big[:, 0]
        is_min = valid.copy()
        max_diff = np.zeros_like(gap)
        n, m = gap.shape
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == 0 and dj == 0:
                    continue
                nb = padded[1 + di : 1 + di + n, 1 + dj : 1 + dj + m]
                is_min &= big <= nb
                finite = np.isfinite(nb) & valid
                diff = np.abs(np.where(finite, nb, 0.0) - np.where(valid, gap, 0.0))
                max_diff = np.where(finite, np.maximum(max_diff, diff), max_diff)
        candidates = is_min & (big <= 2 * max_diff + threshold)
        return [tuple(ij) for ij in np.argwhere(candidates)]

    @staticmethod
    def _refine(src: LineFieldSource, x0: np.ndarray, cell: float):
        dom = src.domain

        def gap_at(p):
            if not bool(dom.contains(p[0], p[1])):
                return np.inf, 0.0
            h, g = src.curvature_gap(p[0], p[1])
            g = float(g)
            return (g if np.isfinite(g) else np.inf), float(h)

        g0, h0 = gap_at(x0)
        if g0 == 0:
            return x0, g0, h0
        simplex = x0 + 0.5 * cell * np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        res = optimize.minimize(
            lambda p: gap_at(p)[0],
            x0,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "xatol": 1e-12 * dom.extent,
                "fatol": 1e-15,
                "maxiter": 600,
            },
        )
        g1, h1 = gap_at(res.x)
        if g1 < g0:
            return res.x, g1, h1
        return x0, g0, h0

    def winding_of_phi(self, samples: Sequence[HopfSample]) -> int:
        """
        Zero order enclosed by a closed loop of Phi samples (argument principle).

        Raises:
            SamplingDensityError: If consecutive arguments jump by pi/2 or more.
            SingularityError: If |Phi| falls to the noise floor on the loop.
        """
        if len(samples) < 3:
            raise SamplingDensityError("a loop needs at least 3 samples")
        phi = np.array([s.phi for s in samples])
        mag = np.abs(phi)
        if float(np.max(mag)) == 0 or float(np.min(mag)) <= 1e-12 * float(np.max(mag)):
            raise SingularityError("|Phi| is below the noise floor on the loop")
        total, jump = _variation(np.angle(phi), closed=True)
        if jump >= np.pi / 2:
            raise SamplingDensityError(f"argument jump of {jump:.3f} rad between samples")
        return int(round(total / (2 * np.pi)))

    def rotation_index_interior(
        self,
        source: Source,
        point,
        loop_radius: Optional[float] = None,
        method: IndexMethod = IndexMethod.ARGUMENT_PRINCIPLE,
        config: Optional[Settings] = None,
    ) -> float:
        """
        Rotation index of the curvature-line field at an isolated interior singularity.

        ArgumentPrinciple uses -(1/4 pi) delta(arg Phi); DirectionWinding
        unwraps the doubled principal-direction angle and halves its winding.

        Raises:
            DomainError: If the loop leaves the domain interior.
            SingularityError: If the loop passes near another singularity.
            SamplingDensityError: If the loop cannot be resolved within the sample cap.
        """
        cfg = config or settings
        src = self.source(source, cfg)
        dom = src.domain
        center = np.asarray(point, dtype=float)
        radius = loop_radius or cfg.INTERIOR_LOOP_CELLS * cfg.cell_size(dom.extent)
        if not bool(dom.contains(center[0], center[1])) or dom.boundary_distance(center) <= radius:
            raise DomainError(f"loop of radius {radius:.3g} around {tuple(center)} leaves the interior")

        def loop(n):
            t = 2 * np.pi * np.arange(n) / n
            return center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)

        if method == IndexMethod.ARGUMENT_PRINCIPLE:

            def sample(n):
                phi = src.hopf(*loop(n))
                _check_dip(np.abs(phi), "Phi")
                return np.angle(phi)

            return -self._adaptive_total(sample, True, cfg) / (4 * np.pi)

        if method == IndexMethod.DIRECTION_WINDING:

            def sample(n):
                u, v = loop(n)
                _check_dip(src.curvature_gap(u, v)[1], "the umbilic gap")
                return 2 * src.direction_angle(u, v)

            return self._adaptive_total(sample, True, cfg) / (4 * np.pi)

        raise ValueError(f"{method.value} is not an interior index method")

    def _aligned_family(self, src, apex, alpha1, alpha, radius, config) -> Family:
        """The principal family tangent to both edges at the ends of the corner arc."""
        k = np.pi / alpha
        ends = np.array([0.0, alpha])
        zeta = radius * np.exp(1j * ends)
        z = apex[0] + apex[1] * 1j + np.exp(1j * alpha1) * zeta
        worst = {}
        for family in (Family.FIRST, Family.SECOND):
            theta = src.direction_angle(z.real, z.imag, family) - alpha1
            theta_w = theta + (k - 1) * ends
            worst[family] = float(np.max(np.abs(np.sin(2 * theta_w))))
            if worst[family] < config.EDGE_ALIGNMENT_TOL:
                return family
        raise LineOfCurvatureError(
            f"edges at ({apex[0]:.6g}, {apex[1]:.6g}) are not lines of curvature "
            f"(misalignment {min(worst.values()):.3e})"
        )

    def _arc(self, src, apex, alpha1, alpha, radius, n):
        """n + 1 points on the interior arc |zeta| = radius, arg zeta in [0, alpha]."""
        psi = np.linspace(0.0, alpha, n + 1)
        z = apex[0] + apex[1] * 1j + radius * np.exp(1j * (alpha1 + psi))
        tol = 1e-9 * src.domain.diameter
        if not np.all(src.domain.contains(z.real, z.imag, tol=tol)):
            raise DomainError(f"arc of radius {radius:.3g} leaves the domain")
        return psi, z

    def rotation_index_corner(
        self,
        source: Source,
        apex,
        alpha1: float,
        alpha: float,
        arc_radius: float,
        config: Optional[Settings] = None,
    ) -> float:
        """
        Index at a boundary corner of parameter opening ``alpha`` whose first edge
        leaves ``apex`` at angle ``alpha1``.

        The corner is straightened by w = zeta^(pi/alpha) in the local chart
        zeta = e^{-i alpha1} (z - apex); directions turn by (pi/alpha - 1) arg zeta.
        The straightened field is reflected across the real axis and the
        doubled-angle winding of the full loop is halved twice (reflection and
        line field). alpha = pi is an ordinary smooth boundary point.
        """
        cfg = config or settings
        src = self.source(source, cfg)
        apex = np.asarray(apex, dtype=float)
        k = np.pi / alpha
        family = self._aligned_family(src, apex, alpha1, alpha, arc_radius, cfg)

        def sample(n):
            psi, z = self._arc(src, apex, alpha1, alpha, arc_radius, n)
            _check_dip(src.curvature_gap(z.real, z.imag)[1], "the umbilic gap")
            theta = src.direction_angle(z.real, z.imag, family) - alpha1
            doubled = 2 * (theta + (k - 1) * psi)
            return np.concatenate([doubled, -doubled[-2:0:-1]])

        return self._adaptive_total(sample, True, cfg) / (8 * np.pi)

    def rotation_index_boundary(
        self,
        source: Source,
        boundary_point,
        arc_radius: Optional[float] = None,
        config: Optional[Settings] = None,
    ) -> float:
        """
        Index at a smooth boundary point whose edge is a line of curvature,
        by reflecting the line field through the edge.

        Raises:
            VertexError: If the point is a vertex.
            LineOfCurvatureError: If the edge is not a line of curvature there.
        """
        cfg = config or settings
        src = self.source(source, cfg)
        apex, tangent = self._boundary_tangent(src.domain, boundary_point)
        radius = arc_radius or self._boundary_arc_radius(src.domain, apex, cfg)
        alpha1 = math.atan2(tangent[1], tangent[0])
        return self.rotation_index_corner(src, apex, alpha1, np.pi, radius, cfg)

    @staticmethod
    def _boundary_tangent(dom: PatchDomain, point):
        p = np.asarray(point, dtype=float)
        loc = dom.locate(p, tol=1e-6 * dom.extent)
        if loc.kind == "vertex":
            raise VertexError(f"{tuple(p)} is a vertex; use the vertex index")
        if loc.kind == "interior":
            raise DomainError(f"{tuple(p)} is not on the boundary")
        return loc.edge.point(loc.s), loc.edge.tangent(loc.s)

    @staticmethod
    def _boundary_arc_radius(dom: PatchDomain, apex, config: Settings) -> float:
        radius = config.BOUNDARY_ARC_CELLS * config.cell_size(dom.extent)
        for q in dom.vertices:
            radius = min(radius, 0.5 * float(np.linalg.norm(apex - q)))
        return radius

    def vertex_angle(self, source: Source, vertex: int) -> float:
        """
        Interior angle at a vertex in the induced first form, in (0, 2 pi).

        Raises:
            DegenerateCornerError: If a one-sided tangent has zero length.
        """
        src = self.source(source)
        dom = src.domain
        t1, t2, alpha = dom.vertex_tangents(vertex)
        p = dom.vertices[vertex]
        E, F, G = (float(x) for x in src.metric(p[0], p[1]))

        def first(a, b):
            return E * a[0] * b[0] + F * (a[0] * b[1] + a[1] * b[0]) + G * a[1] * b[1]

        n1, n2 = first(t1, t1), first(t2, t2)
        if n1 <= 0 or n2 <= 0:
            raise DegenerateCornerError(f"zero-length one-sided tangent at vertex {vertex}")
        angle = math.acos(max(-1.0, min(1.0, first(t1, t2) / math.sqrt(n1 * n2))))
        return 2 * math.pi - angle if alpha > math.pi else angle

    def _corner(self, dom: PatchDomain, vertex: int):
        t1, _, alpha = dom.vertex_tangents(vertex)
        return dom.vertices[vertex], math.atan2(t1[1], t1[0]), alpha

    def rotation_index_vertex(
        self,
        source: Source,
        vertex: int,
        xi: Optional[float] = None,
        arc_radius: Optional[float] = None,
        config: Optional[Settings] = None,
    ) -> float:
        """
        Index at a vertex by corner straightening plus reflection.

        The straightening uses the parameter-plane opening of the corner, which
        equals the induced angle ``xi`` on conformal charts.

        Raises:
            DegenerateCornerError: If xi is within 0.05 rad of 0 or 2 pi.
        """
        cfg = config or settings
        src = self.source(source, cfg)
        xi = self.vertex_angle(src, vertex) if xi is None else xi
        if xi < 0.05 or xi > 2 * np.pi - 0.05:
            raise DegenerateCornerError(f"vertex {vertex} has a degenerate angle {xi:.4f}")
        apex, alpha1, alpha = self._corner(src.domain, vertex)
        radius = arc_radius or self._vertex_arc_radius(src.domain, vertex, cfg)
        return self.rotation_index_corner(src, apex, alpha1, alpha, radius, cfg)

    @staticmethod
    def _vertex_arc_radius(dom: PatchDomain, vertex: int, config: Settings) -> float:
        radius = config.BOUNDARY_ARC_CELLS * config.cell_size(dom.extent)
        apex = dom.vertices[vertex]
        for i, q in enumerate(dom.vertices):
            if i != vertex:
                radius = min(radius, 0.5 * float(np.linalg.norm(apex - q)))
        return radius

    def vertex_index_direct(
        self,
        source: Source,
        vertex: int,
        arc_radius: Optional[float] = None,
        config: Optional[Settings] = None,
    ) -> float:
        """I = (delta theta + pi - alpha) / (2 pi) from the field's turn along the corner arc."""
        cfg = config or settings
        src = self.source(source, cfg)
        apex, alpha1, alpha = self._corner(src.domain, vertex)
        radius = arc_radius or self._vertex_arc_radius(src.domain, vertex, cfg)
        return self.corner_index_direct(src, apex, alpha1, alpha, radius, cfg)

    def corner_index_direct(self, source, apex, alpha1, alpha, arc_radius, config=None) -> float:
        cfg = config or settings
        src = self.source(source, cfg)
        apex = np.asarray(apex, dtype=float)
        family = self._aligned_family(src, apex, alpha1, alpha, arc_radius, cfg)

        def sample(n):
            _, z = self._arc(src, apex, alpha1, alpha, arc_radius, n)
            _check_dip(src.curvature_gap(z.real, z.imag)[1], "the umbilic gap")
            return 2 * src.direction_angle(z.real, z.imag, family)

        turn = self._adaptive_total(sample, False, cfg) / 2
        return (turn + np.pi - alpha) / (2 * np.pi)

    def corner_order(self, source: Source, apex, alpha1: float, alpha: float, arc_radius: float) -> int:
        """
        Zero order of the straightened Hopf function at a corner (-1 for a simple pole),
        from the log-slope of |Phi_w| along the bisector ray.
        """
        src = self.source(source)
        apex = np.asarray(apex, dtype=float)
        k = np.pi / alpha
        r = arc_radius * 2.0 ** -np.arange(4)
        z = apex[0] + apex[1] * 1j + r * np.exp(1j * (alpha1 + alpha / 2))
        # |Phi| and the umbilic gap differ by the smooth factor lambda^2
        magnitude = src.curvature_gap(z.real, z.imag)[1]
        if np.any(magnitude <= 0) or not np.all(np.isfinite(magnitude)):
            raise SingularityError("the umbilic gap vanishes on the bisector ray")
        log_w = k * np.log(r)
        log_phi_w = np.log(magnitude) + 2 * (1 - k) * np.log(r) - 2 * np.log(k)
        slope = np.polyfit(log_w, log_phi_w, 1)[0]
        return int(round(slope))

    def umbilic_record(self, source: Source, point: UmbilicPoint, config: Optional[Settings] = None) -> UmbilicRecord:
        cfg = config or settings
        src = self.source(source, cfg)
        dom = src.domain
        p = np.array([point.u, point.v])
        if point.location == LocationKind.INTERIOR:
            radius = min(
                cfg.INTERIOR_LOOP_CELLS * cfg.cell_size(dom.extent),
                0.5 * dom.boundary_distance(p),
            )
            if src.isothermal:
                index = self.rotation_index_interior(src, p, radius, IndexMethod.ARGUMENT_PRINCIPLE, cfg)
                cross = self.rotation_index_interior(src, p, radius, IndexMethod.DIRECTION_WINDING, cfg)
                order = self.winding_of_phi(self.hopf_loop(src, p, radius, cfg.MAX_LOOP_SAMPLES // 4))
                method = IndexMethod.ARGUMENT_PRINCIPLE
            else:
                index = self.rotation_index_interior(src, p, radius, IndexMethod.DIRECTION_WINDING, cfg)
                cross, order, method = None, int(round(-2 * index)), IndexMethod.DIRECTION_WINDING
            kind = UmbilicKind.INTERIOR
        elif point.location == LocationKind.BOUNDARY:
            apex, tangent = self._boundary_tangent(dom, p)
            radius = self._boundary_arc_radius(dom, apex, cfg)
            alpha1 = math.atan2(tangent[1], tangent[0])
            index = self.rotation_index_corner(src, apex, alpha1, np.pi, radius, cfg)
            cross = self.corner_index_direct(src, apex, alpha1, np.pi, radius, cfg)
            order = self.corner_order(src, apex, alpha1, np.pi, radius)
            kind, method = UmbilicKind.BOUNDARY_REGULAR, IndexMethod.REFLECTION
        else:
            return self.vertex_record(src, point.vertex, cfg)
        logger.info("%s: %s singularity at (%.6g, %.6g) index %.4f", src.name, kind.value, p[0], p[1], index)
        return UmbilicRecord(
            u=float(p[0]), v=float(p[1]), kind=kind, order=order, index=index, method=method, cross_check=cross
        )

    def vertex_record(self, source: Source, vertex: int, config: Optional[Settings] = None) -> UmbilicRecord:
        cfg = config or settings
        src = self.source(source, cfg)
        xi = self.vertex_angle(src, vertex)
        radius = self._vertex_arc_radius(src.domain, vertex, cfg)
        index = self.rotation_index_vertex(src, vertex, xi, radius, cfg)
        apex, alpha1, alpha = self._corner(src.domain, vertex)
        cross = self.corner_index_direct(src, apex, alpha1, alpha, radius, cfg)
        order = self.corner_order(src, apex, alpha1, alpha, radius)
        kind = UmbilicKind.VERTEX_ACUTE if xi < np.pi else UmbilicKind.VERTEX_REFLEX
        logger.info("%s: vertex %d angle %.4f index %.4f order %d", src.name, vertex, xi, index, order)
        return UmbilicRecord(
            u=float(apex[0]),
            v=float(apex[1]),
            kind=kind,
            order=order,
            index=index,
            method=IndexMethod.CORNER_STRAIGHTENING,
            cross_check=cross,
            angle=xi,
        )

    def poincare_hopf_report(
        self,
        records: Sequence[UmbilicRecord],
        domain: PatchDomain,
        surface: str = "",
        everywhere_umbilic: bool = False,
        skipped: Sequence[SkippedSingularity] = (),
        index_tol: Optional[float] = None,
    ) -> IndexReport:
        """
        Sum the indices against the Euler characteristic and evaluate the
        acute-vertex accounting: the sum cannot exceed (#acute vertices) / 4.
        """
        chi = domain.euler_characteristic
        if everywhere_umbilic:
            return IndexReport(surface=surface, euler_characteristic=chi, everywhere_umbilic=True)
        tol = settings.INDEX_TOL if index_tol is None else index_tol
        total = float(sum(r.index for r in records))
        residual = abs(total - chi)
        acute = sum(1 for r in records if r.kind == UmbilicKind.VERTEX_ACUTE)
        violations = [msg for msg in (self._bound_violation(r, tol) for r in records) if msg]
        report = IndexReport(
            surface=surface,
            records=list(records),
            index_sum=total,
            euler_characteristic=chi,
            residual=residual,
            acute_vertices=acute,
            index_bound=acute / 4,
            contradiction_regime=bool(domain.vertices) and acute <= 3,
            bound_violations=violations,
            skipped=list(skipped),
            consistent=residual <= tol and not skipped,
        )
        if not report.consistent:
            logger.warning("%s: index sum %.4f against Euler characteristic %d", surface, total, chi)
        return report

    @staticmethod
    def _bound_violation(record: UmbilicRecord, tol: float) -> Optional[str]:
        where = f"{record.kind.value} at ({record.u:.6g}, {record.v:.6g})"
        if record.kind == UmbilicKind.INTERIOR:
            if abs(record.index + record.order / 2) > tol:
                return f"{where}: index {record.index:.4f} disagrees with order {record.order}"
            if record.cross_check is not None and abs(record.index - record.cross_check) > tol:
                return f"{where}: index methods disagree ({record.index:.4f} vs {record.cross_check:.4f})"
            return None
        bound = 0.25 if record.kind == UmbilicKind.VERTEX_ACUTE else -0.25
        if record.index > bound + tol:
            return f"{where}: index {record.index:.4f} exceeds {bound}"
        return None

    def index_report(self, source: Source, config: Optional[Settings] = None) -> IndexReport:
        """Umbilic scan, per-singularity indices and Poincare-Hopf accounting."""
        cfg = config or settings
        src = self.source(source, cfg)
        dom = src.domain
        cell = cfg.cell_size(dom.extent)
        scan = self.find_umbilics(src, cfg.GRID, cfg.MERGE_RADIUS_CELLS * cell, cfg.UMBILIC_TOL)
        if scan.everywhere_umbilic:
            return self.poincare_hopf_report([], dom, src.name, everywhere_umbilic=True)

        records, skipped = [], []
        recoverable = (LineOfCurvatureError, SingularityError, SamplingDensityError, DomainError)
        # umbilics sitting on a vertex are accounted for by the vertex records
        for point in (p for p in scan.points if p.location != LocationKind.VERTEX):
            try:
                records.append(self.umbilic_record(src, point, cfg))
            except recoverable as e:
                logger.warning("%s: skipping singularity at (%.6g, %.6g): %s", src.name, point.u, point.v, e)
                skipped.append(SkippedSingularity(u=point.u, v=point.v, reason=str(e)))
        for i, q in enumerate(dom.vertices):
            try:
                records.append(self.vertex_record(src, i, cfg))
            except recoverable + (DegenerateCornerError,) as e:
                logger.warning("%s: skipping vertex %d: %s", src.name, i, e)
                skipped.append(SkippedSingularity(u=float(q[0]), v=float(q[1]), reason=str(e)))
        return self.poincare_hopf_report(records, dom, src.name, skipped=skipped, index_tol=cfg.INDEX_TOL)


HopfService = _HopfService()
