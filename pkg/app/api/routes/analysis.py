from typing import Optional

from fastapi import APIRouter, HTTPException, Query

from app.core.errors import UnknownSurfaceError
from app.schema.capillary import CapillaryReport
from app.schema.report import AnalysisReport
from app.schema.surface_spec import SurfaceSpec
from app.schema.umbilic import IndexReport, UmbilicScan
from app.services.analysis import AnalysisService

router = APIRouter()


def _prepare(name: str, grid: Optional[int]):
    try:
        return AnalysisService.prepare(SurfaceSpec(name=name), grid=grid)
    except UnknownSurfaceError as e:
        raise HTTPException(status_code=404, detail=str(e))
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))


@router.get("/{name}", response_model=AnalysisReport, response_model_exclude={"timings"})
def analyze(name: str, grid: Optional[int] = Query(None, description="samples per axis")):
    entry, config = _prepare(name, grid)
    try:
        return AnalysisService.analyze(entry, config)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))


@router.get("/{name}/umbilics", response_model=UmbilicScan)
def get_umbilics(name: str, grid: Optional[int] = None):
    entry, config = _prepare(name, grid)
    try:
        return AnalysisService.umbilics(entry, config)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))


@router.get("/{name}/index", response_model=IndexReport)
def get_index(name: str, grid: Optional[int] = None):
    entry, config = _prepare(name, grid)
    try:
        return AnalysisService.index(entry, config)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))


@router.get("/{name}/capillary", response_model=list[CapillaryReport])
def get_capillary(name: str, grid: Optional[int] = None):
    entry, config = _prepare(name, grid)
    try:
        return AnalysisService.capillary(entry, config)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
