from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional

import numpy as np

from app.core.errors import DomainError, NonFiniteError
from app.model.domain import PatchDomain

PositionMap = Callable[[np.ndarray, np.ndarray], np.ndarray]
DerivativeMap = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, ...]]


class DerivativeMode(str, Enum):
    ANALYTIC = "Analytic"
    FINITE_DIFFERENCE = "FiniteDifference"


# (offsets, weights) per stencil kind: 0 centered, +1 forward, -1 backward
_FIRST = {
    0: ((-1, 1), (-0.5, 0.5)),
    1: ((0, 1, 2), (-1.5, 2.0, -0.5)),
    -1: ((0, -1, -2), (1.5, -2.0, 0.5)),
}
_SECOND = {
    0: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    1: ((0, 1, 2, 3), (2.0, -5.0, 4.0, -1.0)),
    -1: ((0, -1, -2, -3), (2.0, -5.0, 4.0, -1.0)),
}


@dataclass(frozen=True)
class SurfaceJet:
    """Position and first/second partial derivatives, each of shape (..., 3)."""

    X: np.ndarray
    X_u: np.ndarray
    X_v: np.ndarray
    X_uu: np.ndarray
    X_uv: np.ndarray
    X_vv: np.ndarray


@dataclass(frozen=True, eq=False)
class ParametricPatch:
    """
    An immersion X(u, v) of a parameter domain into L^3.

    ``position`` (and ``derivatives`` when given) must accept numpy arrays of
    parameters and broadcast, returning arrays with a trailing axis of 3.
    Without ``derivatives`` the patch differentiates by finite differences
    with step ``fd_step`` (default 1e-4 times the domain diameter).
    """

    domain: PatchDomain
    position: PositionMap
    derivatives: Optional[DerivativeMap] = None
    fd_step: Optional[float] = None
    name: str = "patch"
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def mode(self) -> DerivativeMode:
        if self.derivatives is None:
            return DerivativeMode.FINITE_DIFFERENCE
        return DerivativeMode.ANALYTIC

    @property
    def step(self) -> float:
        return self.fd_step if self.fd_step is not None else 1e-4 * self.domain.diameter

    def with_finite_differences(self, h: Optional[float] = None) -> "ParametricPatch":
        return replace(self, derivatives=None, fd_step=h, cache={})

    def _position(self, u, v) -> np.ndarray:
        X = np.asarray(self.position(u, v), dtype=float)
        if not np.all(np.isfinite(X)):
            raise NonFiniteError(f"{self.name}: position map returned non-finite values")
        return X

    def jet(self, u, v) -> SurfaceJet:
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        tol = 1e-9 * self.domain.diameter
        if not np.all(self.domain.contains(u, v, tol=tol)):
            raise DomainError(f"{self.name}: evaluation outside the parameter domain")
        if self.mode == DerivativeMode.ANALYTIC:
            parts = [np.asarray(p, dtype=float) for p in self.derivatives(u, v)]
            X = self._position(u, v)
            if not all(np.all(np.isfinite(p)) for p in parts):
                raise NonFiniteError(f"{self.name}: derivative map returned non-finite values")
            shape = X.shape
            return SurfaceJet(X, *(np.broadcast_to(p, shape) for p in parts))
        return self._finite_difference_jet(u, v)

    def _stencil_kinds(self, u, v, h, axis: int) -> np.ndarray:
        du, dv = (h, 0.0) if axis == 0 else (0.0, h)
        contains = self.domain.contains
        centered = contains(u - du, v - dv) & contains(u + du, v + dv)
        forward = contains(u + 3 * du, v + 3 * dv)
        return np.where(centered, 0, np.where(forward, 1, -1))

    def _finite_difference_jet(self, u, v) -> SurfaceJet:
        h = self.step
        shape = np.broadcast(u, v).shape
        u = np.broadcast_to(u, shape).ravel()
        v = np.broadcast_to(v, shape).ravel()
        ku = self._stencil_kinds(u, v, h, 0)
        kv = self._stencil_kinds(u, v, h, 1)

        n = u.size
        out = {name: np.empty((n, 3)) for name in ("X_u", "X_v", "X_uu", "X_uv", "X_vv")}
        X = self._position(u, v).reshape(n, 3)
        for a in (-1, 0, 1):
            for b in (-1, 0, 1):
                sel = (ku == a) & (kv == b)
                if not np.any(sel):
                    continue
                us, vs = u[sel], v[sel]

                def at(i, j):
                    return self._position(us + i * h, vs + j * h)

                offs, ws = _FIRST[a]
                out["X_u"][sel] = sum(w * at(o, 0) for o, w in zip(offs, ws)) / h
                offs, ws = _FIRST[b]
                out["X_v"][sel] = sum(w * at(0, o) for o, w in zip(offs, ws)) / h
                offs, ws = _SECOND[a]
                out["X_uu"][sel] = sum(w * at(o, 0) for o, w in zip(offs, ws)) / h**2
                offs, ws = _SECOND[b]
                out["X_vv"][sel] = sum(w * at(0, o) for o, w in zip(offs, ws)) / h**2
                # tensor product of the one-sided or centered first-derivative stencils
                (ou, wu), (ov, wv) = _FIRST[a], _FIRST[b]
                out["X_uv"][sel] = (
                    sum(wi * wj * at(oi, oj) for oi, wi in zip(ou, wu) for oj, wj in zip(ov, wv))
                    / h**2
                )
        return SurfaceJet(
            X.reshape(shape + (3,)),
            *(out[k].reshape(shape + (3,)) for k in ("X_u", "X_v", "X_uu", "X_uv", "X_vv")),
        )
