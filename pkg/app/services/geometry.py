import logging

import numpy as np

from app.core.config import settings
from app.core.errors import (
    CausalDegeneracyError,
    ImmersionDegeneracyError,
    NonIsothermalError,
)
from app.geometry.forms import FundamentalField, fundamental_field
from app.geometry.lorentz import minkowski_inner
from app.model.patch import ParametricPatch
from app.schema.surface import FundamentalData, SpacelikeReport
from app.schema.vector import LVector3

logger = logging.getLogger(__name__)


def _first_form(patch: ParametricPatch, grid: int):
    U, V, mask = patch.domain.grid(grid)
    jet = patch.jet(U[mask], V[mask])
    E = minkowski_inner(jet.X_u, jet.X_u)
    F = minkowski_inner(jet.X_u, jet.X_v)
    G = minkowski_inner(jet.X_v, jet.X_v)
    return U[mask], V[mask], E, F, G


class _GeometryService:
    def evaluate_derivatives(self, patch: ParametricPatch, u: float, v: float):
        """
        Position and partial derivatives at a parameter point.

        Args:
            patch (ParametricPatch): The immersion.
            u (float): First parameter.
            v (float): Second parameter.

        Returns:
            tuple[LVector3, ...]: (X, X_u, X_v, X_uu, X_uv, X_vv).

        Raises:
            DomainError: If (u, v) lies outside the closed domain.
            NonFiniteError: If the position map returns NaN or Inf.
        """
        jet = patch.jet(float(u), float(v))
        return tuple(
            LVector3.from_array(a)
            for a in (jet.X, jet.X_u, jet.X_v, jet.X_uu, jet.X_uv, jet.X_vv)
        )

    def fundamental_field(self, patch: ParametricPatch, u, v) -> FundamentalField:
        return fundamental_field(patch, u, v)

    def fundamental_data(self, patch: ParametricPatch, u: float, v: float) -> FundamentalData:
        """
        First and second fundamental forms, normal and curvatures at (u, v).

        Raises:
            ImmersionDegeneracyError: If X_u ^ X_v vanishes.
            CausalDegeneracyError: If the tangent plane is not spacelike.
        """
        fld = fundamental_field(patch, float(u), float(v))
        if bool(fld.degenerate):
            raise ImmersionDegeneracyError(f"{patch.name}: X_u and X_v are dependent at ({u}, {v})")
        if not float(fld.W) > 0:
            raise CausalDegeneracyError(
                f"{patch.name}: tangent plane at ({u}, {v}) is not spacelike "
                f"(EG - F^2 = {float(fld.W):.3e})"
            )
        d1, d2 = fld.principal_directions()
        return FundamentalData(
            u=float(u),
            v=float(v),
            E=float(fld.E),
            F=float(fld.F),
            G=float(fld.G),
            e=float(fld.e),
            f=float(fld.f),
            g=float(fld.g),
            normal=LVector3.from_array(fld.normal),
            H=float(fld.H),
            K=float(fld.K),
            kappa1=float(fld.kappa1),
            kappa2=float(fld.kappa2),
            dir1=None if np.isnan(d1).any() else (float(d1[0]), float(d1[1])),
            dir2=None if np.isnan(d2).any() else (float(d2[0]), float(d2[1])),
            lambda2=float(fld.E) if self.is_isothermal(patch) else float(fld.lambda2),
        )

    def spacelike_check(self, patch: ParametricPatch, grid: int) -> SpacelikeReport:
        """
        Sample EG - F^2 over the grid.

        Args:
            patch (ParametricPatch): The immersion.
            grid (int): Number of samples per axis.

        Returns:
            SpacelikeReport: Pass when the minimum is positive, with the worst point.
        """
        if grid < 2:
            raise ValueError("grid resolution must be at least 2")
        u, v, E, F, G = _first_form(patch, grid)
        W = E * G - F**2
        worst = int(np.argmin(W))
        report = SpacelikeReport(
            passed=bool(W[worst] > 0),
            min_metric_det=float(W[worst]),
            worst_u=float(u[worst]),
            worst_v=float(v[worst]),
            samples=int(W.size),
        )
        logger.debug("%s: spacelike check %s", patch.name, report)
        return report

    def isothermal_residual(self, patch: ParametricPatch, grid: int) -> float:
        """max over the grid of (|E - G| + |F|) / max(E, G)."""
        _, _, E, F, G = _first_form(patch, grid)
        return float(np.max((np.abs(E - G) + np.abs(F)) / np.maximum(E, G)))

    def is_isothermal(self, patch: ParametricPatch, tol: float = None) -> bool:
        tol = settings.ISOTHERMAL_TOL if tol is None else tol
        key = ("isothermal", tol)
        if key not in patch.cache:
            patch.cache[key] = self.isothermal_residual(patch, grid=33) < tol
        return patch.cache[key]

    def require_isothermal(self, patch: ParametricPatch, tol: float = None) -> None:
        if not self.is_isothermal(patch, tol):
            raise NonIsothermalError(f"{patch.name}: chart is not isothermal")


GeometryService = _GeometryService()
