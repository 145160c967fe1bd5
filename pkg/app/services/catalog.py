import inspect
import logging
import math
from dataclasses import replace

import numpy as np
from scipy import optimize

from app.core.errors import DomainError, SpecFormatError, UnknownSurfaceError
from app.model.catalog import CatalogEntry
from app.model.domain import AnnularSectorDomain, DiskDomain, RectangleDomain
from app.model.patch import ParametricPatch
from app.model.support import DeSitter, SpacelikePlane, TimelikePlane, describe
from app.repository.catalog import CatalogRepository
from app.schema.report import CatalogSummary, Expectation, Provenance

logger = logging.getLogger(__name__)

PUBLISHED, TRIVIAL, DERIVED = Provenance.PUBLISHED, Provenance.TRIVIAL, Provenance.DERIVED


def _stack(*components):
    return np.stack(np.broadcast_arrays(*components), axis=-1)


def _positive(**values):
    for name, value in values.items():
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value}")


def _expect(name, metric, expected, provenance, tolerance=0.0, comparison="eq") -> Expectation:
    return Expectation(
        name=name,
        metric=metric,
        expected=expected,
        tolerance=tolerance,
        provenance=provenance,
        comparison=comparison,
    )


def _capillary_edge(edge: str, beta: float, provenance=DERIVED) -> list[Expectation]:
    return [
        _expect(f"contact angle on {edge}", f"beta:{edge}", beta, provenance, 1e-6),
        _expect(f"{edge} is capillary", f"verdict:{edge}", "Capillary", DERIVED),
        _expect(f"{edge} is a line of curvature", f"joachimsthal:{edge}", 1e-6, PUBLISHED, comparison="le"),
    ]


def _hyperbolic_chart(c: float, shift: float):
    """Disk-model chart c (2u, 2v, 1 + q) / (1 - q) of H^2(-c), raised by ``shift``."""

    def position(u, v):
        s = 1 / (1 - u * u - v * v)
        return _stack(2 * c * u * s, 2 * c * v * s, c * (2 * s - 1) + shift)

    def derivatives(u, v):
        s = 1 / (1 - u * u - v * v)
        s_u, s_v = 2 * u * s**2, 2 * v * s**2
        s_uu = 2 * s**2 + 8 * u * u * s**3
        s_uv = 8 * u * v * s**3
        s_vv = 2 * s**2 + 8 * v * v * s**3
        return (
            c * _stack(2 * s + 2 * u * s_u, 2 * v * s_u, 2 * s_u),
            c * _stack(2 * u * s_v, 2 * s + 2 * v * s_v, 2 * s_v),
            c * _stack(4 * s_u + 2 * u * s_uu, 2 * v * s_uu, 2 * s_uu),
            c * _stack(2 * s_v + 2 * u * s_uv, 2 * s_u + 2 * v * s_uv, 2 * s_uv),
            c * _stack(2 * u * s_vv, 4 * s_v + 2 * v * s_vv, 2 * s_vv),
        )

    return position, derivatives


def _catenoid_chart(a: float):
    """X(sigma, theta) = a (sinh sigma cos theta, sinh sigma sin theta, sigma)."""

    def position(u, v):
        return a * _stack(np.sinh(u) * np.cos(v), np.sinh(u) * np.sin(v), u)

    def derivatives(u, v):
        ch, sh, c, s = np.cosh(u), np.sinh(u), np.cos(v), np.sin(v)
        zero = np.zeros(np.broadcast(u, v).shape)
        return (
            a * _stack(ch * c, ch * s, 1.0 + zero),
            a * _stack(-sh * s, sh * c, zero),
            a * _stack(sh * c, sh * s, zero),
            a * _stack(-ch * s, ch * c, zero),
            a * _stack(-sh * c, -sh * s, zero),
        )

    return position, derivatives


def _check_catenoid(a: float, sigma0: float, sigma1: float) -> None:
    _positive(a=a)
    if not sigma0 > 0:
        # the catenoid degenerates to a lightlike cone point on the axis
        raise DomainError("sigma range must stay away from 0")
    if not sigma1 > sigma0:
        raise DomainError("sigma1 must exceed sigma0")


class _CatalogService:
    def __init__(self):
        self.repository = CatalogRepository

    def names(self) -> list[str]:
        return self.repository.names()

    def build(self, name: str, **params) -> CatalogEntry:
        """
        Build a catalog surface with its defaults overridden by ``params``.

        Raises:
            UnknownSurfaceError: If no catalog surface has that name.
            SpecFormatError: If a parameter is not one the builder takes.
            DomainError: If a parameter is out of range.
        """
        record = self.repository.get(name=name)
        if record is None:
            raise UnknownSurfaceError(f"unknown surface {name!r}; try one of {', '.join(self.names())}")
        builder = getattr(self, record.builder)
        accepted = set(inspect.signature(builder).parameters)
        unknown = set(params) - accepted
        if unknown:
            raise SpecFormatError(f"{name} takes no parameter {', '.join(sorted(unknown))}")
        kwargs = {**record.defaults, **params}
        entry = builder(**kwargs)
        logger.info("built %s with %s", name, kwargs)
        return CatalogEntry(
            name=record.name,
            patch=replace(entry.patch, name=record.name),
            supports=entry.supports,
            expectations=entry.expectations,
            description=record.description,
            params=kwargs,
        )

    def parameters(self, name: str) -> set[str]:
        record = self.repository.get(name=name)
        if record is None:
            raise UnknownSurfaceError(f"unknown surface {name!r}")
        return set(inspect.signature(getattr(self, record.builder)).parameters)

    def summaries(self) -> list[CatalogSummary]:
        """Summaries of every catalog surface at its default parameters."""
        return [self.summary(self.build(name)) for name in self.names()]

    def summary(self, entry: CatalogEntry) -> CatalogSummary:
        dom = entry.patch.domain
        return CatalogSummary(
            name=entry.name,
            description=entry.description,
            params=entry.params,
            domain=dom.kind,
            edges=[e.name for e in dom.edges],
            supports={edge: describe(s) for edge, s in entry.supports.items()},
            derivative_mode=entry.patch.mode.value,
            expectations=entry.expectations,
        )

    def build_planar_disk(self, radius: float = 1.0) -> CatalogEntry:
        _positive(radius=radius)

        def position(u, v):
            return _stack(u, v, np.zeros(np.broadcast(u, v).shape))

        def derivatives(u, v):
            zero = np.zeros(np.broadcast(u, v).shape)
            return (
                _stack(1.0 + zero, zero, zero),
                _stack(zero, 1.0 + zero, zero),
                _stack(zero, zero, zero),
                _stack(zero, zero, zero),
                _stack(zero, zero, zero),
            )

        patch = ParametricPatch(DiskDomain(radius=radius), position, derivatives, name="planar-disk")
        return CatalogEntry(
            name="planar-disk",
            patch=patch,
            expectations=[
                _expect("maximal", "mean_curvature", 0.0, TRIVIAL, 1e-9),
                _expect("totally umbilic", "everywhere_umbilic", True, TRIVIAL),
                _expect("isothermal chart", "isothermal_residual", 1e-12, TRIVIAL, comparison="le"),
            ],
        )

    def build_hyperbolic_cap(self, c: float = 1.0, t_max: float = 1.0, shift: float = 0.0) -> CatalogEntry:
        """
        The cap of H^2(-c) (apex raised by ``shift``) over the disk of Euclidean
        radius tanh(t_max / 2), which is where x3 = c cosh(t_max) + shift.
        """
        _positive(c=c, t_max=t_max)
        position, derivatives = _hyperbolic_chart(c, shift)
        domain = DiskDomain(radius=math.tanh(t_max / 2))
        patch = ParametricPatch(domain, position, derivatives, name="hyperbolic-cap")
        height = c * math.cosh(t_max) + shift
        return CatalogEntry(
            name="hyperbolic-cap",
            patch=patch,
            supports={"circle": SpacelikePlane.horizontal(height)},
            expectations=[
                _expect("principal curvatures 1/c", "kappa", 1 / c, DERIVED, 1e-6),
                _expect("mean curvature 1/c", "mean_curvature", 1 / c, DERIVED, 1e-6),
                _expect("totally umbilic", "everywhere_umbilic", True, PUBLISHED),
                _expect("isothermal chart", "isothermal_residual", 1e-9, DERIVED, comparison="le"),
                *_capillary_edge("circle", t_max),
            ],
        )

    def build_lorentzian_catenoid(self, a: float = 1.0, sigma0: float = 0.5, sigma1: float = 1.5) -> CatalogEntry:
        _check_catenoid(a, sigma0, sigma1)
        position, derivatives = _catenoid_chart(a)
        domain = AnnularSectorDomain(r0=sigma0, r1=sigma1, theta0=0.0, theta1=2 * math.pi)
        patch = ParametricPatch(domain, position, derivatives, name="lorentzian-catenoid")
        return CatalogEntry(
            name="lorentzian-catenoid",
            patch=patch,
            supports={
                "outer": SpacelikePlane.horizontal(a * sigma1),
                "inner": SpacelikePlane.horizontal(a * sigma0),
            },
            expectations=[
                _expect("maximal", "mean_curvature", 0.0, DERIVED, 1e-6),
                _expect("isothermal chart", "isothermal_residual", 1e-9, DERIVED, comparison="le"),
                _expect("no umbilics", "umbilic_count", 0, DERIVED),
                _expect("annulus index sum", "index_sum", 0.0, DERIVED, 0.05),
                *_capillary_edge("outer", math.acosh(1 / math.tanh(sigma1))),
                *_capillary_edge("inner", math.acosh(1 / math.tanh(sigma0))),
            ],
        )

    def build_catenoid_conformal(self, a: float = 1.0, sigma0: float = 0.5, sigma1: float = 1.5) -> CatalogEntry:
        """
        The catenoid in w = u + i v = exp(sigma + i theta) on a rectangle inside
        the annulus exp(sigma0) <= |w| <= exp(sigma1). Here Phi = 2a / w^2.
        """
        _check_catenoid(a, sigma0, sigma1)
        r0, r1 = math.exp(sigma0), math.exp(sigma1)
        half = (r1 - r0) / 4
        domain = RectangleDomain(u0=r0, u1=(r0 + r1) / 2, v0=-half, v1=half)
        k = a / 2

        def position(u, v):
            q = u * u + v * v
            return k * _stack(u - u / q, v - v / q, np.log(q))

        def derivatives(u, v):
            q = u * u + v * v
            A, B = (v * v - u * u) / q**2, 2 * u * v / q**2
            C, D = 2 * u / q, 2 * v / q
            A_u = (2 * u**3 - 6 * u * v * v) / q**3
            A_v = (6 * u * u * v - 2 * v**3) / q**3
            B_u, B_v = (2 * v**3 - 6 * u * u * v) / q**3, A_u
            C_u, C_v = 2 * (v * v - u * u) / q**2, -4 * u * v / q**2
            D_v = 2 * (u * u - v * v) / q**2
            return (
                k * _stack(1 - A, B, C),
                k * _stack(B, 1 + A, D),
                k * _stack(-A_u, B_u, C_u),
                k * _stack(-A_v, B_v, C_v),
                k * _stack(B_v, A_v, D_v),
            )

        patch = ParametricPatch(domain, position, derivatives, name="catenoid-conformal")
        return CatalogEntry(
            name="catenoid-conformal",
            patch=patch,
            expectations=[
                _expect("maximal", "mean_curvature", 0.0, DERIVED, 1e-6),
                _expect("isothermal chart", "isothermal_residual", 1e-9, DERIVED, comparison="le"),
                _expect("no umbilics", "umbilic_count", 0, DERIVED),
            ],
        )

    def build_truncated_catenoid(
        self,
        a: float = 1.0,
        sigma0: float = 0.5,
        sigma1: float = 1.5,
        theta: float = 2 * math.pi / 3,
    ) -> CatalogEntry:
        """
        The catenoid between the horizontal planes x3 = a sigma0, x3 = a sigma1
        and the vertical planes through the x3-axis at angles 0 and ``theta``.
        """
        _check_catenoid(a, sigma0, sigma1)
        if not 0 < theta < math.pi:
            raise DomainError("opening angle must lie in (0, pi)")
        position, derivatives = _catenoid_chart(a)
        domain = AnnularSectorDomain(r0=sigma0, r1=sigma1, theta0=0.0, theta1=theta)
        patch = ParametricPatch(domain, position, derivatives, name="truncated-catenoid")
        return CatalogEntry(
            name="truncated-catenoid",
            patch=patch,
            supports={
                "theta-start": TimelikePlane(normal=(0.0, 1.0, 0.0)),
                "outer": SpacelikePlane.horizontal(a * sigma1),
                "theta-end": TimelikePlane(normal=(-math.sin(theta), math.cos(theta), 0.0)),
                "inner": SpacelikePlane.horizontal(a * sigma0),
            },
            expectations=[
                _expect("four vertices", "vertex_count", 4, PUBLISHED),
                _expect("right vertex angles", "vertex_angle", math.pi / 2, DERIVED, 0.01),
                _expect("vertex index 1/4", "vertex_index", 0.25, PUBLISHED, 0.05),
                _expect("index sum equals Euler characteristic", "index_sum", 1.0, PUBLISHED, 0.05),
                _expect("no interior umbilics", "umbilic_count", 0, DERIVED),
                *_capillary_edge("theta-start", 0.0),
                *_capillary_edge("outer", math.acosh(1 / math.tanh(sigma1))),
                *_capillary_edge("theta-end", 0.0),
                *_capillary_edge("inner", math.acosh(1 / math.tanh(sigma0))),
            ],
        )

    def build_de_sitter_configuration(
        self,
        c: float = 1.0,
        variant: str = "disk",
        cap_radius: float = 1.0,
        delta: float = 0.5,
    ) -> CatalogEntry:
        """
        A spacelike disk type surface inside the de Sitter surface <x,x> = c^2.

        ``variant="disk"`` is the planar disk x3 = 0 of radius c, meeting the
        support at its equator with beta = 0. ``variant="shifted-cap"`` is the
        hyperbolic cap of radius ``cap_radius`` with apex lowered by ``delta``,
        cut where it meets the support; by rotational symmetry beta is constant,
        with sinh(beta) = |delta y3 - cap_radius^2| / (cap_radius c) and
        y3 = (cap_radius^2 + c^2 + delta^2) / (2 delta).
        """
        _positive(c=c)
        if variant == "disk":
            entry = self.build_planar_disk(radius=c)
            return CatalogEntry(
                name="de-sitter-disk",
                patch=entry.patch,
                supports={"circle": DeSitter(c)},
                expectations=[
                    _expect("maximal", "mean_curvature", 0.0, TRIVIAL, 1e-9),
                    _expect("totally umbilic", "everywhere_umbilic", True, TRIVIAL),
                    *_capillary_edge("circle", 0.0),
                ],
            )
        if variant != "shifted-cap":
            raise DomainError(f"unknown de Sitter variant {variant!r}")
        _positive(cap_radius=cap_radius, delta=delta)
        y3 = (cap_radius**2 + c**2 + delta**2) / (2 * delta)
        if not y3 > cap_radius:
            raise DomainError("the shifted cap does not reach the de Sitter surface")
        entry = self.build_hyperbolic_cap(c=cap_radius, t_max=math.acosh(y3 / cap_radius), shift=-delta)
        beta = math.asinh(abs(delta * y3 - cap_radius**2) / (cap_radius * c))
        return CatalogEntry(
            name="de-sitter-shifted-cap",
            patch=entry.patch,
            supports={"circle": DeSitter(c)},
            expectations=[
                _expect("principal curvatures 1/c", "kappa", 1 / cap_radius, DERIVED, 1e-6),
                _expect("totally umbilic", "everywhere_umbilic", True, PUBLISHED),
                *_capillary_edge("circle", beta),
            ],
        )

    def build_umbilic_test_graph(self, epsilon: float = 0.2, radius: float = 0.5) -> CatalogEntry:
        """
        Graph of sqrt(1 + u^2 + v^2) + epsilon (u^3 - 3 u v^2) over a disk.

        The hyperbolic-plane part is totally umbilic and the harmonic cubic has
        a traceless Hessian vanishing at the origin, so the origin is an
        isolated umbilic with Phi ~ -12 epsilon z, index -1/2.
        """
        _positive(radius=radius)
        if epsilon == 0:
            raise DomainError("epsilon = 0 gives the totally umbilic hyperbolic plane")
        steep = radius / math.sqrt(1 + radius**2) + 3 * abs(epsilon) * radius**2
        if steep >= 1:
            raise DomainError("graph is not spacelike on this disk")

        def position(u, v):
            return _stack(u, v, np.sqrt(1 + u * u + v * v) + epsilon * (u**3 - 3 * u * v * v))

        def derivatives(u, v):
            rho = np.sqrt(1 + u * u + v * v)
            zero = np.zeros(np.broadcast(u, v).shape)
            f_u = u / rho + 3 * epsilon * (u * u - v * v)
            f_v = v / rho - 6 * epsilon * u * v
            f_uu = (1 + v * v) / rho**3 + 6 * epsilon * u
            f_uv = -u * v / rho**3 - 6 * epsilon * v
            f_vv = (1 + u * u) / rho**3 - 6 * epsilon * u
            return (
                _stack(1.0 + zero, zero, f_u),
                _stack(zero, 1.0 + zero, f_v),
                _stack(zero, zero, f_uu),
                _stack(zero, zero, f_uv),
                _stack(zero, zero, f_vv),
            )

        patch = ParametricPatch(DiskDomain(radius=radius), position, derivatives, name="umbilic-test-graph")
        return CatalogEntry(
            name="umbilic-test-graph",
            patch=patch,
            expectations=[
                _expect("one isolated umbilic", "umbilic_count", 1, DERIVED),
                _expect("umbilic at the origin", "umbilic_distance", 1e-3, DERIVED, comparison="le"),
                _expect("interior index -1/2", "interior_index", -0.5, DERIVED, 0.05),
            ],
        )

    def build_tilted_cut_negative(
        self,
        a: float = 1.0,
        h: float = 0.6,
        m: float = 0.3,
        depth: float = 0.4,
        theta0: float = 0.2,
        theta1: float = 1.8,
    ) -> CatalogEntry:
        """
        Catenoid strip hanging below its cut with the tilted spacelike plane x3 = h + m x1.

        The cut is sigma_cut(theta), the root of sigma - h/a - m sinh(sigma) cos(theta)
        nearest h/a; the patch is X(sigma_cut(theta) - s, theta) for s in [0, depth],
        differentiated numerically. Edge ``left`` (s = 0) lies on the plane.
        """
        _positive(a=a, h=h, depth=depth)
        if not 0 < abs(m) < 1:
            raise DomainError("the cutting plane must be spacelike: 0 < |m| < 1")
        if not theta1 > theta0:
            raise DomainError("theta1 must exceed theta0")
        catenoid, _ = _catenoid_chart(a)

        def sigma_cut(theta):
            theta = np.asarray(theta, dtype=float)
            return optimize.newton(
                lambda s: s - h / a - m * np.sinh(s) * np.cos(theta),
                np.full(theta.shape, h / a),
                fprime=lambda s: 1 - m * np.cosh(s) * np.cos(theta),
                tol=1e-14,
                maxiter=100,
            )

        cut = sigma_cut(np.linspace(theta0, theta1, 65))
        if not np.all(np.isfinite(cut)) or float(np.min(cut)) - depth <= 0:
            raise DomainError("the tilted plane does not cut a strip of that depth off the catenoid")

        def position(u, v):
            u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
            return catenoid(sigma_cut(v) - u, v)

        domain = RectangleDomain(u0=0.0, u1=depth, v0=theta0, v1=theta1)
        patch = ParametricPatch(domain, position, name="tilted-cut-negative")
        plane = SpacelikePlane(normal=(m, 0.0, 1.0), offset=h / math.sqrt(1 - m * m))
        return CatalogEntry(
            name="tilted-cut-negative",
            patch=patch,
            supports={"left": plane},
            expectations=[
                _expect("contact angle varies", "verdict:left", "NotConstantAngle", DERIVED),
                _expect("cut is not a line of curvature", "joachimsthal:left", 1e-3, DERIVED, comparison="ge"),
            ],
        )


CatalogService = _CatalogService()
