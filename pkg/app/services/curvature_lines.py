import logging
import math
from typing import Optional

import numpy as np

from app.core.errors import DomainError, EverywhereUmbilicError, UmbilicPointError
from app.geometry.forms import fundamental_field
from app.model.patch import ParametricPatch
from app.schema.trace import CurvatureTrace, Family, StopReason, TraceConfig
from app.schema.vector import LVector3

logger = logging.getLogger(__name__)

# a turn of more than 45 degrees between consecutive steps
_MAX_TURN_COS = math.cos(math.pi / 4)
_LANDING_TOL = 1e-9


class _Stop(Exception):
    def __init__(self, reason: StopReason):
        self.reason = reason


class _CurvatureLineService:
    def line_field(self, patch: ParametricPatch, u: float, v: float) -> tuple[np.ndarray, np.ndarray]:
        """
        The two principal directions at (u, v), each defined up to sign.

        Returns:
            tuple: (d1, d2), first-form unit representatives for kappa1 and kappa2.

        Raises:
            UmbilicPointError: If the point is umbilic.
        """
        fld = fundamental_field(patch, float(u), float(v))
        d1, d2 = fld.principal_directions()
        if np.isnan(d1).any():
            raise UmbilicPointError(f"{patch.name}: ({u}, {v}) is umbilic")
        return d1, d2

    def _direction(self, patch, p, family: Family, previous: Optional[np.ndarray], tol: float):
        """Unit parameter-plane direction of ``family`` continuing ``previous``."""
        if not bool(patch.domain.contains(p[0], p[1], tol=1e-9 * patch.domain.diameter)):
            raise _Stop(StopReason.BOUNDARY)
        fld = fundamental_field(patch, p[0], p[1])
        if float(fld.gap) < tol:
            raise _Stop(StopReason.UMBILIC)
        d1, d2 = fld.principal_directions()
        d = d1 if family == Family.FIRST else d2
        if np.isnan(d).any():
            raise _Stop(StopReason.UMBILIC)
        if previous is not None and float(fld.first_form(d, previous)) < 0:
            d = -d
        return d / np.linalg.norm(d)

    def _rk4(self, patch, p, h, family, previous, tol):
        k1 = self._direction(patch, p, family, previous, tol)
        k2 = self._direction(patch, p + 0.5 * h * k1, family, k1, tol)
        k3 = self._direction(patch, p + 0.5 * h * k2, family, k2, tol)
        k4 = self._direction(patch, p + h * k3, family, k3, tol)
        q = p + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not bool(patch.domain.contains(q[0], q[1])):
            raise _Stop(StopReason.BOUNDARY)
        return q

    def _land(self, patch, p, h, family, previous, tol):
        """Bisect the step length until the step ends within the landing tolerance of the boundary."""
        lo, hi = 0.0, h
        best = p
        while hi - lo > _LANDING_TOL:
            mid = 0.5 * (lo + hi)
            try:
                best = self._rk4(patch, p, mid, family, previous, tol)
                lo = mid
            except _Stop as stop:
                if stop.reason != StopReason.BOUNDARY:
                    raise
                hi = mid
        return best

    def trace_curvature_line(
        self,
        patch: ParametricPatch,
        start,
        family: Family,
        config: Optional[TraceConfig] = None,
    ) -> CurvatureTrace:
        """
        Integrate a line of curvature with 4th-order Runge-Kutta in parameter arclength.

        Each evaluation picks the root direction with positive first-form inner
        product against the previous one. The first step follows the
        deterministic representative times ``config.direction``.

        Raises:
            DomainError: If the start lies outside the domain.
            UmbilicPointError: If the start is umbilic.
            EverywhereUmbilicError: If the surface is totally umbilic.
        """
        config = config or TraceConfig()
        family = Family(family)
        p = np.asarray(start, dtype=float)
        if not bool(patch.domain.contains(p[0], p[1])):
            raise DomainError(f"{patch.name}: start {tuple(p)} lies outside the domain")
        self._reject_umbilic_start(patch, p)

        d0 = self.line_field(patch, p[0], p[1])[0 if family == Family.FIRST else 1]
        previous = config.direction * d0 / np.linalg.norm(d0)
        points = [p]
        reason = StopReason.MAX_STEPS
        for _ in range(config.max_steps):
            try:
                q = self._rk4(patch, p, config.step, family, previous, config.umbilic_stop_tol)
            except _Stop as stop:
                reason = stop.reason
                if reason == StopReason.BOUNDARY and config.boundary_stop:
                    try:
                        q = self._land(patch, p, config.step, family, previous, config.umbilic_stop_tol)
                    except _Stop:
                        q = p
                    if np.linalg.norm(q - p) > 0:
                        points.append(q)
                break
            chord = (q - p) / np.linalg.norm(q - p)
            if float(np.dot(chord, previous)) < _MAX_TURN_COS:
                reason = StopReason.FIELD_DEGENERATE
                break
            points.append(q)
            previous, p = chord, q
            if float(fundamental_field(patch, q[0], q[1]).gap) < config.umbilic_stop_tol:
                reason = StopReason.UMBILIC
                break

        params = np.array(points)
        ambient = patch.jet(params[:, 0], params[:, 1]).X
        trace = CurvatureTrace(
            family=family,
            points_param=[(float(a), float(b)) for a, b in params],
            points_ambient=[LVector3.from_array(x) for x in ambient],
            stop_reason=reason,
            residual=self.trace_residual(patch, params),
        )
        logger.debug(
            "%s: %s trace of %d steps stopped by %s", patch.name, family.value, trace.steps, reason.value
        )
        return trace

    def _reject_umbilic_start(self, patch: ParametricPatch, p: np.ndarray) -> None:
        if not bool(fundamental_field(patch, p[0], p[1]).umbilic()):
            return
        U, V, mask = patch.domain.grid(17)
        if bool(np.all(fundamental_field(patch, U[mask], V[mask]).umbilic())):
            raise EverywhereUmbilicError(f"{patch.name} is totally umbilic; every direction is principal")
        raise UmbilicPointError(f"{patch.name}: trace starts at an umbilic point {tuple(p)}")

    def trace_residual(self, patch: ParametricPatch, params: np.ndarray) -> float:
        """Max of the line-of-curvature quadratic over the chords, evaluated at chord midpoints."""
        if len(params) < 2:
            return 0.0
        mids = 0.5 * (params[1:] + params[:-1])
        chords = params[1:] - params[:-1]
        keep = patch.domain.contains(mids[:, 0], mids[:, 1], tol=1e-9 * patch.domain.diameter)
        keep &= np.linalg.norm(chords, axis=1) > 0
        if not np.any(keep):
            return 0.0
        fld = fundamental_field(patch, mids[keep, 0], mids[keep, 1])
        return float(np.max(fld.quadratic_residual(chords[keep])))


CurvatureLineService = _CurvatureLineService()
