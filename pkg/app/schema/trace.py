from enum import Enum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from app.schema.vector import LVector3


class Family(str, Enum):
    FIRST = "First"
    SECOND = "Second"


class StopReason(str, Enum):
    BOUNDARY = "Boundary"
    UMBILIC = "Umbilic"
    MAX_STEPS = "MaxSteps"
    FIELD_DEGENERATE = "FieldDegenerate"


class TraceConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    step: float = Field(default=0.01, gt=0)
    max_steps: int = Field(default=2000, gt=0)
    umbilic_stop_tol: float = Field(default=1e-5, ge=0)
    boundary_stop: bool = True
    # +1 follows the deterministic representative first, -1 the opposite way
    direction: Literal[1, -1] = 1


class CurvatureTrace(BaseModel):
    family: Family
    points_param: list[tuple[float, float]]
    points_ambient: list[LVector3]
    stop_reason: StopReason
    residual: float = 0.0

    @property
    def steps(self) -> int:
        return len(self.points_param) - 1
