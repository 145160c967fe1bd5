"""
Totally umbilic support surfaces of L^3: planes, hyperbolic planes and de Sitter surfaces.

A plane with unit normal n and offset d is {x : <n, x> = <n, n> d}, i.e. it
passes through d n. Membership residuals are scale-normalized so that one
tolerance works for every kind.
"""

from dataclasses import dataclass, field
from typing import ClassVar, Union

import numpy as np

from app.core.errors import CausalClassError, LightlikeSupportError
from app.geometry.lorentz import VectorLike, as_array, causal_class, minkowski_inner, unit
from app.schema.vector import CausalClass

_E3 = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class _Plane:
    normal: tuple[float, float, float]
    offset: float = 0.0
    kind: ClassVar[str]
    causal: ClassVar[CausalClass]

    def __post_init__(self):
        n = as_array(self.normal)
        cls = causal_class(n)
        if cls == CausalClass.LIGHTLIKE:
            raise LightlikeSupportError("lightlike planes are not admissible supports")
        if not np.any(n) or (cls == CausalClass.TIMELIKE) != (self.causal == CausalClass.SPACELIKE):
            raise CausalClassError(f"{self.kind} needs a {self._normal_kind} normal")
        n = unit(n)
        if self.causal == CausalClass.SPACELIKE and n[2] < 0:
            n = -n
        object.__setattr__(self, "normal", tuple(float(x) for x in n))

    @property
    def _normal_kind(self) -> str:
        return "timelike" if self.causal == CausalClass.SPACELIKE else "spacelike"

    def _n(self) -> np.ndarray:
        return np.array(self.normal)

    def residual(self, x: VectorLike):
        n = self._n()
        return np.abs(minkowski_inner(n, x) - minkowski_inner(n, n) * self.offset)

    def normal_at(self, x: VectorLike) -> np.ndarray:
        x = as_array(x)
        return np.broadcast_to(self._n(), x.shape).copy()


@dataclass(frozen=True)
class SpacelikePlane(_Plane):
    normal: tuple[float, float, float] = (0.0, 0.0, 1.0)
    kind: ClassVar[str] = "SpacelikePlane"
    causal: ClassVar[CausalClass] = CausalClass.SPACELIKE

    @classmethod
    def horizontal(cls, height: float) -> "SpacelikePlane":
        """The plane x3 = height."""
        return cls(normal=(0.0, 0.0, 1.0), offset=height)


@dataclass(frozen=True)
class TimelikePlane(_Plane):
    normal: tuple[float, float, float] = (1.0, 0.0, 0.0)
    kind: ClassVar[str] = "TimelikePlane"
    causal: ClassVar[CausalClass] = CausalClass.TIMELIKE


@dataclass(frozen=True)
class HyperbolicPlane:
    """<x - s, x - s> = -c^2 with x3 - s3 > 0, where s = (0, 0, shift)."""

    c: float
    shift: float = 0.0
    kind: ClassVar[str] = "HyperbolicPlane"
    causal: ClassVar[CausalClass] = CausalClass.SPACELIKE
    _apex: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("hyperbolic plane radius must be positive")
        object.__setattr__(self, "_apex", self.shift * _E3)

    def residual(self, x: VectorLike):
        y = as_array(x) - self._apex
        wrong_sheet = y[..., 2] <= 0
        r = np.abs(minkowski_inner(y, y) + self.c**2) / (2 * self.c)
        return np.where(wrong_sheet, np.inf, r)

    def normal_at(self, x: VectorLike) -> np.ndarray:
        return (as_array(x) - self._apex) / self.c


@dataclass(frozen=True)
class DeSitter:
    """<x, x> = c^2."""

    c: float
    kind: ClassVar[str] = "DeSitter"
    causal: ClassVar[CausalClass] = CausalClass.TIMELIKE

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("de Sitter radius must be positive")

    def residual(self, x: VectorLike):
        x = as_array(x)
        return np.abs(minkowski_inner(x, x) - self.c**2) / (2 * self.c)

    def normal_at(self, x: VectorLike) -> np.ndarray:
        return as_array(x) / self.c


SupportSurface = Union[SpacelikePlane, TimelikePlane, HyperbolicPlane, DeSitter]


def describe(support: SupportSurface) -> str:
    if isinstance(support, _Plane):
        n = ", ".join(f"{x:.6g}" for x in support.normal)
        return f"{support.kind}(normal=({n}), offset={support.offset:.6g})"
    if isinstance(support, HyperbolicPlane):
        return f"HyperbolicPlane(c={support.c:.6g}, shift={support.shift:.6g})"
    return f"DeSitter(c={support.c:.6g})"
