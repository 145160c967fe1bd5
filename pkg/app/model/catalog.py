from dataclasses import dataclass, field
from typing import Union

from app.model.patch import ParametricPatch
from app.model.support import SupportSurface
from app.schema.report import Expectation

Param = Union[float, str]


@dataclass(frozen=True)
class CatalogRecord:
    """A row of the named-surface registry: which builder to call and with what defaults."""

    name: str
    builder: str
    description: str
    defaults: dict[str, Param] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    patch: ParametricPatch
    supports: dict[str, SupportSurface] = field(default_factory=dict)
    expectations: list[Expectation] = field(default_factory=list)
    description: str = ""
    params: dict[str, Param] = field(default_factory=dict)
