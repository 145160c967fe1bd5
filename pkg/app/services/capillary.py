import logging
from dataclasses import dataclass
from typing import Literal, Optional, Union

import numpy as np

from app.core.config import Settings, settings
from app.core.errors import (
    CausalClassError,
    DomainError,
    FrameInconsistencyError,
    OffSurfaceError,
    VertexError,
)
from app.geometry.forms import fundamental_field
from app.geometry.lorentz import (
    VectorLike,
    as_array,
    causal_class,
    lorentz_cross,
    lorentz_norm,
    minkowski_inner,
    mixed_angle,
    timelike_angle,
)
from app.model.domain import Edge
from app.model.patch import ParametricPatch
from app.model.support import SupportSurface, describe
from app.schema.capillary import BetaSample, CapillaryReport, Verdict
from app.schema.vector import BoundaryFrame, CausalClass, LVector3

logger = logging.getLogger(__name__)

# scale-normalized distance from a support surface still counted as on it
ON_SURFACE_TOL = 1e-5
# trihedra reconstruction residual beyond which the frames are inconsistent
FRAME_TOL = 1e-4


@dataclass(frozen=True)
class BoundaryComponent:
    """A boundary edge of a patch resting on a support surface."""

    edge: str
    support: SupportSurface
    samples: int = 128
    membership_tol: float = 1e-6


def _unit(v: np.ndarray) -> np.ndarray:
    return v / float(lorentz_norm(v))


class _CapillaryService:
    def support_normal(self, support: SupportSurface, x: VectorLike) -> LVector3:
        """
        Unit normal of the support at x: future timelike for spacelike supports,
        unit spacelike for timelike ones.

        Raises:
            OffSurfaceError: If x is farther than 1e-5 from the support.
        """
        x = as_array(x)
        residual = float(support.residual(x))
        if not residual <= ON_SURFACE_TOL:
            raise OffSurfaceError(f"{tuple(x)} is off {describe(support)} (residual {residual:.3e})")
        return LVector3.from_array(support.normal_at(x))

    def _edge_at(self, patch: ParametricPatch, point, edge: Optional[str]) -> tuple[Edge, float]:
        dom = patch.domain
        p = np.asarray(point, dtype=float)
        tol = 1e-9 * dom.diameter
        if edge is not None:
            e = dom.edge(edge)
            s, dist = e.project(p)
            if dist > tol:
                raise DomainError(f"{tuple(p)} is not on edge {edge!r}")
            return e, s
        loc = dom.locate(p, tol=tol)
        if loc.kind == "vertex":
            raise VertexError(f"{tuple(p)} is a vertex; request the frame per edge")
        if loc.kind == "interior":
            raise DomainError(f"{tuple(p)} is not on the boundary")
        return loc.edge, loc.s

    def boundary_frame(
        self,
        patch: ParametricPatch,
        boundary_point,
        orientation: Union[Literal["auto"], int] = "auto",
        edge: Optional[str] = None,
    ) -> BoundaryFrame:
        """
        The trihedron {tau, N, nu = -tau ^ N} at a smooth boundary point.

        tau is pushed forward from the counterclockwise parameter tangent; with
        ``orientation="auto"`` it is flipped so that nu points into the surface,
        with an explicit sign of +1 or -1 an outward nu is an error.

        Raises:
            VertexError: At a vertex, unless ``edge`` names a one-sided frame.
            FrameInconsistencyError: If an explicit orientation gives an outward nu.
        """
        e, s = self._edge_at(patch, boundary_point, edge)
        p = e.point(s)
        t = e.tangent(s)
        n = e.inward_normal(s)
        fld = fundamental_field(patch, p[0], p[1])
        jet = fld.jet
        normal = np.asarray(fld.normal, dtype=float)
        tau = _unit(jet.X_u * t[0] + jet.X_v * t[1])
        if orientation != "auto":
            tau = int(orientation) * tau
        conormal = -lorentz_cross(tau, normal)
        probe = jet.X_u * n[0] + jet.X_v * n[1]
        if float(minkowski_inner(conormal, probe)) < 0:
            if orientation != "auto":
                raise FrameInconsistencyError(f"orientation {orientation} gives an outward conormal")
            tau, conormal = -tau, -conormal
        return BoundaryFrame(
            tau=LVector3.from_array(tau),
            normal=LVector3.from_array(normal),
            conormal=LVector3.from_array(conormal),
        )

    def _signed_angle(self, frame: BoundaryFrame, n_sigma: np.ndarray, spacelike: bool) -> tuple[float, float]:
        """(beta, signed beta') with the reconstruction residual checked."""
        tau = frame.tau.to_array()
        normal = frame.normal.to_array()
        conormal = frame.conormal.to_array()
        if spacelike:
            nu_sigma = -lorentz_cross(tau, n_sigma)
            signed = float(np.arcsinh(minkowski_inner(normal, nu_sigma)))
            beta = timelike_angle(normal, n_sigma)
            ch, sh = np.cosh(signed), np.sinh(signed)
            nu_rec = ch * nu_sigma + sh * n_sigma
            normal_rec = sh * nu_sigma + ch * n_sigma
        else:
            nu_sigma = -lorentz_cross(tau, n_sigma)
            if nu_sigma[2] < 0:
                n_sigma, nu_sigma = -n_sigma, -nu_sigma
            signed = float(np.arcsinh(minkowski_inner(normal, n_sigma)))
            beta = mixed_angle(n_sigma, normal)
            ch, sh = np.cosh(signed), np.sinh(signed)
            nu_rec = sh * nu_sigma + ch * n_sigma
            normal_rec = ch * nu_sigma + sh * n_sigma
        residual = max(np.linalg.norm(nu_rec - conormal), np.linalg.norm(normal_rec - normal))
        if residual > FRAME_TOL:
            raise FrameInconsistencyError(f"trihedra reconstruction residual {residual:.3e}")
        return beta, signed

    def contact_angle(self, frame: BoundaryFrame, support: SupportSurface, x: VectorLike) -> float:
        """
        Contact angle beta >= 0 between the surface and the support along the boundary.

        Spacelike supports: cosh(beta) = |<N, N_S>|; timelike supports:
        sinh(beta) = |<N, N_S>|. The frame (nu, N) is rebuilt from the support
        frame through the matching trihedra equation as a consistency check.

        Raises:
            OffSurfaceError: If x is off the support.
            FrameInconsistencyError: If the reconstruction misses by more than 1e-4.
        """
        n_sigma = self.support_normal(support, x).to_array()
        beta, _ = self._signed_angle(frame, n_sigma, support.causal == CausalClass.SPACELIKE)
        return beta

    def trihedra_roundtrip(
        self,
        beta: float,
        tau: VectorLike,
        n_sigma: VectorLike,
        support_kind: CausalClass,
    ) -> tuple[np.ndarray, np.ndarray]:
        """
        Build (nu, N) from the support frame and a contact angle.

        Spacelike kind: nu = cosh b nu_S + sinh b N_S, N = sinh b nu_S + cosh b N_S.
        Timelike kind: nu = sinh b nu_S + cosh b N_S, N = cosh b nu_S + sinh b N_S,
        with N_S oriented so that nu_S = -tau ^ N_S is future-directed.

        Raises:
            CausalClassError: If the vectors do not match the support kind.
        """
        if beta < 0:
            raise ValueError("contact angles are nonnegative")
        tau, n_sigma = as_array(tau), as_array(n_sigma)
        if causal_class(tau) != CausalClass.SPACELIKE or not np.any(tau):
            raise CausalClassError("tau must be a nonzero spacelike vector")
        support_kind = CausalClass(support_kind)
        ch, sh = np.cosh(beta), np.sinh(beta)
        if support_kind == CausalClass.SPACELIKE:
            if causal_class(n_sigma) != CausalClass.TIMELIKE or n_sigma[2] <= 0:
                raise CausalClassError("a spacelike support needs a future timelike normal")
            nu_sigma = -lorentz_cross(tau, n_sigma)
            return ch * nu_sigma + sh * n_sigma, sh * nu_sigma + ch * n_sigma
        if support_kind == CausalClass.TIMELIKE:
            if causal_class(n_sigma) != CausalClass.SPACELIKE or not np.any(n_sigma):
                raise CausalClassError("a timelike support needs a spacelike normal")
            nu_sigma = -lorentz_cross(tau, n_sigma)
            if nu_sigma[2] < 0:
                n_sigma, nu_sigma = -n_sigma, -nu_sigma
            return sh * nu_sigma + ch * n_sigma, ch * nu_sigma + sh * n_sigma
        raise CausalClassError("lightlike supports have no trihedra equation")

    @staticmethod
    def _stations(edge: Edge, samples: int) -> np.ndarray:
        # midpoints of equal sub-arcs keep every station off the vertices
        return (np.arange(samples) + 0.5) * edge.length / samples

    def joachimsthal_check(self, patch: ParametricPatch, component: BoundaryComponent) -> float:
        """
        max |II(tau, nu)| along an edge, with II(tau, nu) = -<dN/ds, nu> and
        dN/ds by centered differences, one-sided within a step of the ends.
        """
        edge = patch.domain.edge(component.edge)
        stations = self._stations(edge, component.samples)
        delta = 1e-4 * edge.length

        def normal(s):
            p = edge.point(np.asarray(s))
            return fundamental_field(patch, p[..., 0], p[..., 1]).normal

        worst = 0.0
        for s in stations:
            if s - delta < 0:
                dN = (-3 * normal(s) + 4 * normal(s + delta) - normal(s + 2 * delta)) / (2 * delta)
            elif s + delta > edge.length:
                dN = (3 * normal(s) - 4 * normal(s - delta) + normal(s - 2 * delta)) / (2 * delta)
            else:
                dN = (normal(s + delta) - normal(s - delta)) / (2 * delta)
            p = edge.point(s)
            frame = self.boundary_frame(patch, p, edge=component.edge)
            t = edge.tangent(s)
            jet = patch.jet(p[0], p[1])
            speed = float(lorentz_norm(jet.X_u * t[0] + jet.X_v * t[1]))
            value = -float(minkowski_inner(dN, frame.conormal.to_array())) / speed
            worst = max(worst, abs(value))
        return worst

    def capillary_constancy_check(
        self,
        patch: ParametricPatch,
        component: BoundaryComponent,
        config: Optional[Settings] = None,
    ) -> CapillaryReport:
        """
        Sample the contact angle along an edge and decide whether it is capillary.

        Returns:
            CapillaryReport: Capillary iff the spread of beta is below
            tol * (1 + mean) and the Joachimsthal residual is below its gate.

        Raises:
            OffSurfaceError: If the edge leaves the support surface.
        """
        cfg = config or settings
        if component.samples < 16:
            raise ValueError("a boundary component needs at least 16 samples")
        edge = patch.domain.edge(component.edge)
        stations = self._stations(edge, component.samples)
        params = edge.point(stations)
        X = patch.jet(params[:, 0], params[:, 1]).X
        membership = np.asarray(component.support.residual(X), dtype=float)
        if float(np.max(membership)) > component.membership_tol:
            worst = int(np.argmax(membership))
            raise OffSurfaceError(
                f"{patch.name}: edge {component.edge!r} leaves {describe(component.support)} "
                f"at s={stations[worst]:.6g} (residual {membership[worst]:.3e})"
            )

        profile = []
        for s, p, x in zip(stations, params, X):
            frame = self.boundary_frame(patch, p, edge=component.edge)
            profile.append(BetaSample(s=float(s), beta=self.contact_angle(frame, component.support, x)))
        betas = np.array([b.beta for b in profile])
        mean, spread = float(betas.mean()), float(betas.max() - betas.min())

        joachimsthal = self.joachimsthal_check(patch, component)
        fld = fundamental_field(patch, params[:, 0], params[:, 1])
        kappa_max = float(np.max(np.maximum(np.abs(fld.kappa1), np.abs(fld.kappa2))))
        if spread >= cfg.CAPILLARY_SPREAD_TOL * (1 + mean):
            verdict = Verdict.NOT_CONSTANT_ANGLE
        elif joachimsthal > cfg.JOACHIMSTHAL_TOL * (1 + kappa_max):
            verdict = Verdict.NOT_LINE_OF_CURVATURE
        else:
            verdict = Verdict.CAPILLARY
        logger.info(
            "%s: edge %s beta %.6g (spread %.3e) joachimsthal %.3e -> %s",
            patch.name,
            component.edge,
            mean,
            spread,
            joachimsthal,
            verdict.value,
        )
        return CapillaryReport(
            edge=component.edge,
            support=describe(component.support),
            beta_profile=profile,
            beta_mean=mean,
            beta_spread=spread,
            joachimsthal_max=joachimsthal,
            membership_max=float(np.max(membership)),
            verdict=verdict,
        )


CapillaryService = _CapillaryService()
