from enum import Enum

from pydantic import BaseModel


class Verdict(str, Enum):
    CAPILLARY = "Capillary"
    NOT_CONSTANT_ANGLE = "NotConstantAngle"
    NOT_LINE_OF_CURVATURE = "NotLineOfCurvature"


class BetaSample(BaseModel):
    s: float
    beta: float


class CapillaryReport(BaseModel):
    edge: str
    support: str
    beta_profile: list[BetaSample]
    beta_mean: float
    beta_spread: float
    joachimsthal_max: float
    membership_max: float
    verdict: Verdict
