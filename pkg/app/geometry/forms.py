"""
Vectorized first and second fundamental forms of a spacelike patch.

Sign convention: the shape operator is S = -I^{-1} II with the future unit
normal, so kappa1 >= kappa2 are its eigenvalues and
H = -(eG - 2fF + gE) / (2(EG - F^2)). The hyperbolic plane of radius c then
has kappa1 = kappa2 = H = 1/c.
"""

from dataclasses import dataclass

import numpy as np

from app.geometry.lorentz import future, lorentz_cross, minkowski_inner
from app.model.patch import ParametricPatch, SurfaceJet

# |kappa1 - kappa2| below this (times 1 + |H|) means principal directions are absent
DIRECTION_DEGENERACY = 1e-8


@dataclass(frozen=True)
class FundamentalField:
    """Fundamental forms and curvatures sampled at an array of parameter points."""

    u: np.ndarray
    v: np.ndarray
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    e: np.ndarray
    f: np.ndarray
    g: np.ndarray
    normal: np.ndarray
    degenerate: np.ndarray
    jet: SurfaceJet = None

    @property
    def W(self):
        return self.E * self.G - self.F**2

    @property
    def H(self):
        return -(self.e * self.G - 2 * self.f * self.F + self.g * self.E) / (2 * self.W)

    @property
    def K(self):
        return (self.e * self.g - self.f**2) / self.W

    @property
    def discriminant(self):
        return np.maximum(self.H**2 - self.K, 0.0)

    @property
    def kappa1(self):
        return self.H + np.sqrt(self.discriminant)

    @property
    def kappa2(self):
        return self.H - np.sqrt(self.discriminant)

    @property
    def gap(self):
        """|kappa1 - kappa2|; equals |Phi| / lambda^2 on isothermal charts."""
        return 2 * np.sqrt(self.discriminant)

    @property
    def hopf(self):
        return self.e - self.g - 2j * self.f

    @property
    def lambda2(self):
        return np.sqrt(self.W)

    def first_form(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (
            self.E * a[..., 0] * b[..., 0]
            + self.F * (a[..., 0] * b[..., 1] + a[..., 1] * b[..., 0])
            + self.G * a[..., 1] * b[..., 1]
        )

    def second_form(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (
            self.e * a[..., 0] * b[..., 0]
            + self.f * (a[..., 0] * b[..., 1] + a[..., 1] * b[..., 0])
            + self.g * a[..., 1] * b[..., 1]
        )

    def normal_curvature(self, d: np.ndarray) -> np.ndarray:
        return -self.second_form(d, d) / self.first_form(d, d)

    def shape_operator(self, d: np.ndarray) -> np.ndarray:
        """S d = -I^{-1} II d in parameter coordinates."""
        IId = np.stack(
            [self.e * d[..., 0] + self.f * d[..., 1], self.f * d[..., 0] + self.g * d[..., 1]],
            axis=-1,
        )
        inv = np.stack(
            [self.G * IId[..., 0] - self.F * IId[..., 1], -self.F * IId[..., 0] + self.E * IId[..., 1]],
            axis=-1,
        )
        return -inv / self.W[..., None]

    def curvature_quadratic(self):
        """Coefficients (A, B, C) of A du^2 + B du dv + C dv^2 = 0 for lines of curvature."""
        A = self.E * self.f - self.F * self.e
        B = self.E * self.g - self.G * self.e
        C = self.F * self.g - self.G * self.f
        return A, B, C

    def quadratic_residual(self, d: np.ndarray) -> np.ndarray:
        """|A du^2 + B du dv + C dv^2| / sqrt(EG - F^2) for first-form unit directions d."""
        A, B, C = self.curvature_quadratic()
        d = d / np.sqrt(np.abs(self.first_form(d, d)))[..., None]
        q = A * d[..., 0] ** 2 + B * d[..., 0] * d[..., 1] + C * d[..., 1] ** 2
        return np.abs(q) / self.lambda2

    def umbilic(self) -> np.ndarray:
        return self.gap < DIRECTION_DEGENERACY * (1 + np.abs(self.H))

    def principal_directions(self) -> tuple[np.ndarray, np.ndarray]:
        """
        First-form unit principal directions (d1 for kappa1, d2 for kappa2).

        Each is the deterministic representative with nonnegative first
        component (ties broken by the second); NaN where the point is umbilic.
        """
        A, B, C = self.curvature_quadratic()
        R = np.hypot(A - C, B)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.clip(-(A + C) / R, -1.0, 1.0)
        delta = np.arctan2(B, A - C)
        spread = np.arccos(np.nan_to_num(ratio))
        roots = []
        for phi in ((delta + spread) / 2, (delta - spread) / 2):
            d = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
            d = d / np.sqrt(np.abs(self.first_form(d, d)))[..., None]
            roots.append(canonical_direction(d))
        first_larger = self.normal_curvature(roots[0]) >= self.normal_curvature(roots[1])
        d1 = np.where(first_larger[..., None], roots[0], roots[1])
        d2 = np.where(first_larger[..., None], roots[1], roots[0])
        umbilic = self.umbilic()
        d1 = np.where(umbilic[..., None], np.nan, d1)
        d2 = np.where(umbilic[..., None], np.nan, d2)
        return d1, d2


def canonical_direction(d: np.ndarray) -> np.ndarray:
    """Pick the sign of a line-field direction: d_u >= 0, ties broken by d_v >= 0."""
    scale = np.linalg.norm(d, axis=-1)
    du = np.where(np.abs(d[..., 0]) <= 1e-12 * scale, 0.0, d[..., 0])
    flip = (du < 0) | ((du == 0) & (d[..., 1] < 0))
    d = np.stack([du, d[..., 1]], axis=-1)
    return np.where(flip[..., None], -d, d)


def forms_from_coefficients(E, F, G, e, f, g) -> FundamentalField:
    """A field built from given coefficients, without an immersion behind it."""
    arrays = [np.asarray(x, dtype=float) for x in (E, F, G, e, f, g)]
    shape = np.broadcast(*arrays).shape
    E, F, G, e, f, g = (np.broadcast_to(x, shape) for x in arrays)
    normal = np.broadcast_to(np.array([0.0, 0.0, 1.0]), shape + (3,))
    zeros = np.zeros(shape)
    return FundamentalField(zeros, zeros, E, F, G, e, f, g, normal, zeros.astype(bool))


def fundamental_field(patch: ParametricPatch, u, v) -> FundamentalField:
    """Fundamental forms at parameter arrays; non-spacelike or degenerate points carry NaN."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    jet = patch.jet(u, v)
    E = minkowski_inner(jet.X_u, jet.X_u)
    F = minkowski_inner(jet.X_u, jet.X_v)
    G = minkowski_inner(jet.X_v, jet.X_v)
    W = E * G - F**2
    cross = lorentz_cross(jet.X_u, jet.X_v)
    scale = np.linalg.norm(jet.X_u, axis=-1) * np.linalg.norm(jet.X_v, axis=-1)
    degenerate = np.linalg.norm(cross, axis=-1) <= 1e-14 * scale
    with np.errstate(invalid="ignore", divide="ignore"):
        # <X_u ^ X_v, X_u ^ X_v> = -(EG - F^2)
        normal = cross / np.sqrt(np.where(W > 0, W, np.nan))[..., None]
    normal = future(np.nan_to_num(normal, nan=0.0))
    normal = np.where(((W > 0) & ~degenerate)[..., None], normal, np.nan)
    e = np.sum(normal * jet.X_uu * np.array([1.0, 1.0, -1.0]), axis=-1)
    f = np.sum(normal * jet.X_uv * np.array([1.0, 1.0, -1.0]), axis=-1)
    g = np.sum(normal * jet.X_vv * np.array([1.0, 1.0, -1.0]), axis=-1)
    return FundamentalField(u, v, E, F, G, e, f, g, normal, degenerate, jet)
