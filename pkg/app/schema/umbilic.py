from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict


class LocationKind(str, Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    VERTEX = "vertex"


class UmbilicKind(str, Enum):
    INTERIOR = "Interior"
    BOUNDARY_REGULAR = "BoundaryRegular"
    VERTEX_ACUTE = "VertexAcute"
    VERTEX_REFLEX = "VertexReflex"


class IndexMethod(str, Enum):
    ARGUMENT_PRINCIPLE = "ArgumentPrinciple"
    DIRECTION_WINDING = "DirectionWinding"
    REFLECTION = "Reflection"
    CORNER_STRAIGHTENING = "CornerStraightening"


class UmbilicPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    u: float
    v: float
    location: LocationKind
    edge: Optional[str] = None
    vertex: Optional[int] = None
    gap: float


class UmbilicScan(BaseModel):
    surface: str
    points: list[UmbilicPoint] = []
    everywhere_umbilic: bool = False


class UmbilicRecord(BaseModel):
    u: float
    v: float
    kind: UmbilicKind
    order: int
    index: float
    method: IndexMethod
    cross_check: Optional[float] = None
    angle: Optional[float] = None


class SkippedSingularity(BaseModel):
    u: float
    v: float
    reason: str


class IndexReport(BaseModel):
    surface: str
    records: list[UmbilicRecord] = []
    index_sum: float = 0.0
    euler_characteristic: int
    residual: Optional[float] = None
    everywhere_umbilic: bool = False
    acute_vertices: int = 0
    index_bound: float = 0.0
    contradiction_regime: bool = False
    bound_violations: list[str] = []
    skipped: list[SkippedSingularity] = []
    consistent: Optional[bool] = None
