import math

from app.model.catalog import CatalogRecord
from app.repository.base import BaseRepository

CATALOG = (
    CatalogRecord(
        name="planar-disk",
        builder="build_planar_disk",
        description="Spacelike planar disk x3 = 0; totally umbilic and maximal.",
        defaults={"radius": 1.0},
    ),
    CatalogRecord(
        name="hyperbolic-cap",
        builder="build_hyperbolic_cap",
        description="Cap of the hyperbolic plane <x,x> = -c^2 cut by a horizontal spacelike plane.",
        defaults={"c": 1.0, "t_max": 1.0, "shift": 0.0},
    ),
    CatalogRecord(
        name="lorentzian-catenoid",
        builder="build_lorentzian_catenoid",
        description="Maximal rotation surface about the timelike axis, full annulus in (sigma, theta).",
        defaults={"a": 1.0, "sigma0": 0.5, "sigma1": 1.5},
    ),
    CatalogRecord(
        name="catenoid-conformal",
        builder="build_catenoid_conformal",
        description="Lorentzian catenoid in the chart w = exp(sigma + i theta), where Phi = 2a / w^2.",
        defaults={"a": 1.0, "sigma0": 0.5, "sigma1": 1.5},
    ),
    CatalogRecord(
        name="truncated-catenoid",
        builder="build_truncated_catenoid",
        description="Catenoid piece between two horizontal and two vertical planes; four vertices of index 1/4.",
        defaults={"a": 1.0, "sigma0": 0.5, "sigma1": 1.5, "theta": 2 * math.pi / 3},
    ),
    CatalogRecord(
        name="de-sitter-disk",
        builder="build_de_sitter_configuration",
        description="Planar disk meeting the de Sitter surface <x,x> = c^2 along its equator.",
        defaults={"c": 1.0, "variant": "disk"},
    ),
    CatalogRecord(
        name="de-sitter-shifted-cap",
        builder="build_de_sitter_configuration",
        description="Hyperbolic cap with lowered apex whose boundary circle lies on a de Sitter surface.",
        defaults={"c": 1.0, "variant": "shifted-cap", "cap_radius": 1.0, "delta": 0.5},
    ),
    CatalogRecord(
        name="umbilic-test-graph",
        builder="build_umbilic_test_graph",
        description="Perturbed hyperbolic graph with one isolated interior umbilic of index -1/2.",
        defaults={"epsilon": 0.2, "radius": 0.5},
    ),
    CatalogRecord(
        name="tilted-cut-negative",
        builder="build_tilted_cut_negative",
        description="Catenoid piece cut by the tilted plane x3 = h + m x1; the contact angle varies.",
        defaults={"a": 1.0, "h": 0.6, "m": 0.3},
    ),
)


class _CatalogRepository(BaseRepository):
    def names(self) -> list[str]:
        return [row.name for row in self.get_many()]


CatalogRepository = _CatalogRepository(model=CatalogRecord, rows=CATALOG)
