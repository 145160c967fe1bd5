from enum import Enum
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict

from app.schema.capillary import CapillaryReport
from app.schema.umbilic import SkippedSingularity, UmbilicRecord

ExpectedValue = Union[bool, int, float, str]


class Provenance(str, Enum):
    PUBLISHED = "PUBLISHED"
    TRIVIAL = "TRIVIAL"
    DERIVED = "DERIVED"


class Expectation(BaseModel):
    """
    One expected value of a catalog surface.

    ``metric`` names the measured quantity: mean_curvature, kappa,
    everywhere_umbilic, umbilic_count, umbilic_distance, vertex_count,
    vertex_angle, vertex_index, index_sum, interior_index,
    isothermal_residual, or beta:/verdict:/joachimsthal: followed by an edge name.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    metric: str
    expected: ExpectedValue
    tolerance: float = 0.0
    provenance: Provenance
    comparison: Literal["eq", "le", "ge"] = "eq"


class ExpectationCheck(Expectation):
    actual: Optional[ExpectedValue] = None
    passed: bool


class CatalogSummary(BaseModel):
    name: str
    description: str
    params: dict[str, Union[float, str]]
    domain: str
    edges: list[str]
    supports: dict[str, str]
    derivative_mode: str
    expectations: list[Expectation]


class AnalysisReport(BaseModel):
    surface: str
    params: dict[str, Union[float, str]] = {}
    grid: int
    derivative_mode: str
    spacelike_min: float
    spacelike: bool
    isothermal_residual: float
    isothermal: bool
    cr_residual: Optional[float] = None
    everywhere_umbilic: bool = False
    umbilics: list[UmbilicRecord] = []
    index_sum: Optional[float] = None
    euler_char: int
    index_consistent: Optional[bool] = None
    skipped: list[SkippedSingularity] = []
    capillary: list[CapillaryReport] = []
    expectations: list[ExpectationCheck] = []
    timings: dict[str, float] = {}

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.expectations)
