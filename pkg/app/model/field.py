"""
Sources of curvature-line fields for the index machinery.

A source exposes the Hopf function (isothermal charts only), the
parameter-plane angle of each principal family, the umbilic gap
|kappa1 - kappa2| and the first form. ``PatchLineField`` reads all of it off
an immersion; ``SyntheticHopfField`` is a flat isothermal chart (lambda = 1)
carrying a prescribed Phi, so that the line field is arg dz = -arg(Phi)/2 mod pi/2.
"""

from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np

from app.core.errors import NonIsothermalError
from app.geometry.forms import fundamental_field
from app.model.domain import PatchDomain
from app.model.patch import ParametricPatch
from app.schema.trace import Family


class LineFieldSource(Protocol):
    name: str
    domain: PatchDomain
    isothermal: bool

    def hopf(self, u, v) -> np.ndarray: ...

    def direction_angle(self, u, v, family: Family = Family.FIRST) -> np.ndarray: ...

    def curvature_gap(self, u, v) -> tuple[np.ndarray, np.ndarray]: ...

    def metric(self, u, v) -> tuple[np.ndarray, np.ndarray, np.ndarray]: ...


@dataclass(frozen=True, eq=False)
class PatchLineField:
    patch: ParametricPatch
    isothermal: bool

    @property
    def name(self) -> str:
        return self.patch.name

    @property
    def domain(self) -> PatchDomain:
        return self.patch.domain

    def hopf(self, u, v):
        if not self.isothermal:
            raise NonIsothermalError(f"{self.name}: the Hopf function needs an isothermal chart")
        return fundamental_field(self.patch, u, v).hopf

    def direction_angle(self, u, v, family: Family = Family.FIRST):
        d1, d2 = fundamental_field(self.patch, u, v).principal_directions()
        d = d1 if family == Family.FIRST else d2
        return np.arctan2(d[..., 1], d[..., 0])

    def curvature_gap(self, u, v):
        fld = fundamental_field(self.patch, u, v)
        return fld.H, fld.gap

    def metric(self, u, v):
        fld = fundamental_field(self.patch, u, v)
        return fld.E, fld.F, fld.G


@dataclass(frozen=True, eq=False)
class SyntheticHopfField:
    phi: Callable[[np.ndarray], np.ndarray]
    domain: PatchDomain
    name: str = "synthetic"
    isothermal: bool = True

    def hopf(self, u, v):
        z = np.asarray(u, dtype=float) + 1j * np.asarray(v, dtype=float)
        return np.asarray(self.phi(z), dtype=complex)

    def direction_angle(self, u, v, family: Family = Family.FIRST):
        phi = self.hopf(u, v)
        theta = -0.5 * np.angle(phi)
        if family == Family.SECOND:
            theta = theta + np.pi / 2
        return np.where(phi == 0, np.nan, theta)

    def curvature_gap(self, u, v):
        gap = np.abs(self.hopf(u, v))
        return np.zeros_like(gap), gap

    def metric(self, u, v):
        shape = np.broadcast(np.asarray(u), np.asarray(v)).shape
        return np.ones(shape), np.zeros(shape), np.ones(shape)
