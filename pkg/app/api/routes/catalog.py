from fastapi import APIRouter, HTTPException

from app.core.errors import UnknownSurfaceError
from app.schema.report import CatalogSummary
from app.services.catalog import CatalogService

router = APIRouter()


@router.get("/", response_model=list[CatalogSummary])
def get_catalog():
    """
    List the named surfaces.

    Returns:
    - One summary per catalog surface, built at its default parameters.
    """
    return CatalogService.summaries()


@router.get("/{name}", response_model=CatalogSummary)
def get_surface(name: str):
    try:
        return CatalogService.summary(CatalogService.build(name))
    except UnknownSurfaceError as e:
        raise HTTPException(status_code=404, detail=str(e))
