import math
from dataclasses import dataclass
from functools import cached_property
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.errors import DomainError


def rot90(t: np.ndarray) -> np.ndarray:
    return np.array([-t[1], t[0]])


class Edge:
    """A smooth boundary arc parametrized by parameter-plane arclength s in [0, length]."""

    name: str
    closed: bool = False
    straight: bool = True
    length: float

    def point(self, s):
        raise NotImplementedError

    def tangent(self, s):
        raise NotImplementedError

    def project(self, p: np.ndarray) -> tuple[float, float]:
        """Return (s, distance) of the closest edge point to ``p``."""
        raise NotImplementedError

    def inward_normal(self, s) -> np.ndarray:
        # boundaries are oriented counterclockwise, the interior lies on the left
        return rot90(self.tangent(s))


class LineEdge(Edge):
    def __init__(self, name: str, a, b, closed: bool = False):
        self.name = name
        self.a = np.asarray(a, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.closed = closed
        self.length = float(np.linalg.norm(self.b - self.a))
        self._t = (self.b - self.a) / self.length

    def point(self, s):
        s = np.asarray(s, dtype=float)
        return self.a + np.multiply.outer(s, self._t)

    def tangent(self, s):
        s = np.asarray(s, dtype=float)
        return np.broadcast_to(self._t, s.shape + (2,)).copy()

    def project(self, p):
        s = float(np.clip(np.dot(np.asarray(p) - self.a, self._t), 0.0, self.length))
        return s, float(np.linalg.norm(np.asarray(p) - self.point(s)))


class ArcEdge(Edge):
    straight = False

    def __init__(self, name: str, radius: float, phi0: float, phi1: float):
        self.name = name
        self.radius = radius
        self.phi0 = phi0
        self.phi1 = phi1
        self.closed = math.isclose(phi1 - phi0, 2 * math.pi)
        self.length = radius * (phi1 - phi0)

    def point(self, s):
        phi = self.phi0 + np.asarray(s, dtype=float) / self.radius
        return self.radius * np.stack([np.cos(phi), np.sin(phi)], axis=-1)

    def tangent(self, s):
        phi = self.phi0 + np.asarray(s, dtype=float) / self.radius
        return np.stack([-np.sin(phi), np.cos(phi)], axis=-1)

    def project(self, p):
        p = np.asarray(p, dtype=float)
        offset = (math.atan2(p[1], p[0]) - self.phi0) % (2 * math.pi)
        span = self.phi1 - self.phi0
        if not self.closed and offset > span:
            offset = span if offset - span < 2 * math.pi - offset else 0.0
        s = offset * self.radius
        return s, float(np.linalg.norm(p - self.point(s)))


@dataclass(frozen=True)
class BoundaryLocation:
    kind: Literal["interior", "boundary", "vertex"]
    edge: Optional[Edge] = None
    s: Optional[float] = None
    vertex: Optional[int] = None


class _DomainBase(BaseModel):
    model_config = ConfigDict(frozen=True)

    def bounding_box(self) -> tuple[float, float, float, float]:
        raise NotImplementedError

    def contains(self, u, v, tol: float = 0.0):
        raise NotImplementedError

    def _edges(self) -> list[Edge]:
        raise NotImplementedError

    @property
    def vertices(self) -> list[np.ndarray]:
        return []

    @property
    def euler_characteristic(self) -> int:
        return 1

    @property
    def v_period(self) -> Optional[float]:
        return None

    @cached_property
    def edges(self) -> list[Edge]:
        return self._edges()

    @property
    def extent(self) -> float:
        u0, u1, v0, v1 = self.bounding_box()
        return max(u1 - u0, v1 - v0)

    @property
    def diameter(self) -> float:
        u0, u1, v0, v1 = self.bounding_box()
        return math.hypot(u1 - u0, v1 - v0)

    def edge(self, name: str) -> Edge:
        for e in self.edges:
            if e.name == name:
                return e
        raise DomainError(f"domain has no edge named {name!r}")

    def grid(self, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """An n x n sample grid over the bounding box and its closed-domain mask."""
        u0, u1, v0, v1 = self.bounding_box()
        us = np.linspace(u0, u1, n)
        vs = np.linspace(v0, v1, n, endpoint=self.v_period is None)
        U, V = np.meshgrid(us, vs, indexing="ij")
        return U, V, self.contains(U, V, tol=1e-12 * self.diameter)

    def boundary_distance(self, p) -> float:
        return min(e.project(p)[1] for e in self.edges)

    def locate(self, p, tol: float) -> BoundaryLocation:
        p = np.asarray(p, dtype=float)
        if not self.contains(p[0], p[1], tol=tol):
            raise DomainError(f"point {tuple(p)} lies outside the domain")
        for i, vertex in enumerate(self.vertices):
            if np.linalg.norm(p - vertex) <= tol:
                return BoundaryLocation(kind="vertex", vertex=i)
        best = min(((e,) + e.project(p) for e in self.edges), key=lambda t: t[2])
        if best[2] <= tol:
            return BoundaryLocation(kind="boundary", edge=best[0], s=best[1])
        return BoundaryLocation(kind="interior")

    def vertex_tangents(self, index: int) -> tuple[np.ndarray, np.ndarray, float]:
        """
        One-sided edge tangents at a vertex, pointing away from it.

        Returns (t1, t2, alpha): the interior is swept counterclockwise from
        t1 to t2 and alpha in (0, 2 pi) is the parameter-plane opening.
        """
        outgoing = self.edges[index]
        incoming = self.edges[index - 1]
        t1 = outgoing.tangent(0.0)
        t2 = -incoming.tangent(incoming.length)
        alpha = (math.atan2(t2[1], t2[0]) - math.atan2(t1[1], t1[0])) % (2 * math.pi)
        return t1, t2, alpha


class RectangleDomain(_DomainBase):
    kind: Literal["rectangle"] = "rectangle"
    u0: float
    u1: float
    v0: float
    v1: float

    @model_validator(mode="after")
    def validate_bounds(self):
        if not (self.u1 > self.u0 and self.v1 > self.v0):
            raise ValueError("rectangle must have a nonempty interior")
        return self

    def bounding_box(self):
        return self.u0, self.u1, self.v0, self.v1

    def contains(self, u, v, tol: float = 0.0):
        return (
            (u >= self.u0 - tol)
            & (u <= self.u1 + tol)
            & (v >= self.v0 - tol)
            & (v <= self.v1 + tol)
        )

    @property
    def vertices(self):
        return [
            np.array(p, dtype=float)
            for p in ((self.u0, self.v0), (self.u1, self.v0), (self.u1, self.v1), (self.u0, self.v1))
        ]

    def _edges(self):
        names = self._edge_names()
        corners = self.vertices
        return [LineEdge(names[i], corners[i], corners[(i + 1) % 4]) for i in range(4)]

    @staticmethod
    def _edge_names() -> tuple[str, str, str, str]:
        return "bottom", "right", "top", "left"


class HalfDiskDomain(_DomainBase):
    """Upper half disk {u^2 + v^2 <= R^2, v >= 0} with its diameter on v = 0."""

    kind: Literal["half_disk"] = "half_disk"
    radius: float = Field(gt=0)

    def bounding_box(self):
        return -self.radius, self.radius, 0.0, self.radius

    def contains(self, u, v, tol: float = 0.0):
        return (u * u + v * v <= (self.radius + tol) ** 2) & (v >= -tol)

    @property
    def vertices(self):
        return [np.array([-self.radius, 0.0]), np.array([self.radius, 0.0])]

    def _edges(self):
        r = self.radius
        return [LineEdge("diameter", (-r, 0.0), (r, 0.0)), ArcEdge("arc", r, 0.0, math.pi)]


class DiskDomain(_DomainBase):
    kind: Literal["disk"] = "disk"
    radius: float = Field(gt=0)

    def bounding_box(self):
        return -self.radius, self.radius, -self.radius, self.radius

    def contains(self, u, v, tol: float = 0.0):
        return u * u + v * v <= (self.radius + tol) ** 2

    def _edges(self):
        return [ArcEdge("circle", self.radius, 0.0, 2 * math.pi)]


class AnnularSectorDomain(_DomainBase):
    """
    Sector r in [r0, r1], theta in [theta0, theta1] in polar parameters (u, v) = (r, theta).

    With theta1 - theta0 >= 2 pi the sector is a full annulus: v is periodic,
    there are no vertices and the two circles are closed edges.
    """

    kind: Literal["annular_sector"] = "annular_sector"
    r0: float
    r1: float
    theta0: float
    theta1: float

    @model_validator(mode="after")
    def validate_bounds(self):
        if not (self.r1 > self.r0 and self.theta1 > self.theta0):
            raise ValueError("annular sector must have a nonempty interior")
        if self.theta1 - self.theta0 > 2 * math.pi + 1e-12:
            raise ValueError("annular sector opening exceeds 2 pi")
        return self

    @property
    def full(self) -> bool:
        return self.theta1 - self.theta0 >= 2 * math.pi - 1e-12

    @property
    def v_period(self):
        return 2 * math.pi if self.full else None

    @property
    def euler_characteristic(self) -> int:
        return 0 if self.full else 1

    def bounding_box(self):
        return self.r0, self.r1, self.theta0, self.theta1

    def contains(self, u, v, tol: float = 0.0):
        inside = (u >= self.r0 - tol) & (u <= self.r1 + tol)
        if self.full:
            return inside & np.isfinite(v)
        return inside & (v >= self.theta0 - tol) & (v <= self.theta1 + tol)

    @property
    def vertices(self):
        if self.full:
            return []
        return [
            np.array(p, dtype=float)
            for p in (
                (self.r0, self.theta0),
                (self.r1, self.theta0),
                (self.r1, self.theta1),
                (self.r0, self.theta1),
            )
        ]

    def _edges(self):
        if self.full:
            return [
                LineEdge("outer", (self.r1, self.theta0), (self.r1, self.theta1), closed=True),
                LineEdge("inner", (self.r0, self.theta1), (self.r0, self.theta0), closed=True),
            ]
        names = ("theta-start", "outer", "theta-end", "inner")
        corners = self.vertices
        return [LineEdge(names[i], corners[i], corners[(i + 1) % 4]) for i in range(4)]


PatchDomain = Annotated[
    Union[RectangleDomain, HalfDiskDomain, DiskDomain, AnnularSectorDomain],
    Field(discriminator="kind"),
]
