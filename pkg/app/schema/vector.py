from enum import Enum
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict


class CausalClass(str, Enum):
    SPACELIKE = "Spacelike"
    TIMELIKE = "Timelike"
    LIGHTLIKE = "Lightlike"


class LVector3(BaseModel):
    """A point or vector of L^3 = (R^3, dx1^2 + dx2^2 - dx3^2)."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    x1: float
    x2: float
    x3: float

    @classmethod
    def from_array(cls, a: Sequence[float]) -> "LVector3":
        return cls(x1=float(a[0]), x2=float(a[1]), x3=float(a[2]))

    def to_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3], dtype=float)


class BoundaryFrame(BaseModel):
    """Trihedron {tau, N, nu = -tau ^ N} at a smooth boundary point."""

    model_config = ConfigDict(frozen=True)

    tau: LVector3
    normal: LVector3
    conormal: LVector3
