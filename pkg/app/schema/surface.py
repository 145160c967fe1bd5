from typing import Optional

from pydantic import BaseModel, ConfigDict

from app.schema.vector import LVector3


class FundamentalData(BaseModel):
    model_config = ConfigDict(frozen=True)

    u: float
    v: float
    E: float
    F: float
    G: float
    e: float
    f: float
    g: float
    normal: LVector3
    H: float
    K: float
    kappa1: float
    kappa2: float
    dir1: Optional[tuple[float, float]] = None
    dir2: Optional[tuple[float, float]] = None
    lambda2: float

    @property
    def umbilic(self) -> bool:
        return self.dir1 is None


class SpacelikeReport(BaseModel):
    passed: bool
    min_metric_det: float
    worst_u: float
    worst_v: float
    samples: int


class HopfSample(BaseModel):
    """Value of Phi = e - g - 2 i f at z = u + i v on an isothermal chart."""

    model_config = ConfigDict(frozen=True)

    u: float
    v: float
    phi_re: float
    phi_im: float
    lambda2: float

    @classmethod
    def from_complex(cls, z: complex, phi: complex, lambda2: float = 1.0) -> "HopfSample":
        return cls(u=z.real, v=z.imag, phi_re=phi.real, phi_im=phi.imag, lambda2=lambda2)

    @property
    def z(self) -> complex:
        return complex(self.u, self.v)

    @property
    def phi(self) -> complex:
        return complex(self.phi_re, self.phi_im)
